#pragma once

// Experiment runner: replication fan-out over an (s, n) grid, deterministic
// seeding, and run directories with a manifest.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fpp/quadrature.hpp"
#include "fpp/stats.hpp"

namespace fpp {

enum class OutputFormat { csv, json };

struct RunConfig {
  std::vector<double> s_values;
  std::vector<long long> n_values;
  int replications = 1;
  std::uint64_t master_seed = 0;
  std::string output_path = "fpp_run";
  QuadratureSpec quadrature;
  unsigned jobs = 1;  // 0 = all hardware threads
  OutputFormat format = OutputFormat::csv;

  // Throws ConfigError. Accepts n = 2 (the single-edge graph) besides n >= 3.
  void validate() const;

  std::string to_json() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static RunConfig from_json(const std::string& text);
  static RunConfig load(const std::filesystem::path& file);
};

inline constexpr long long kMaxVertices = 1'000'000;

// Seed of replication r in the (s, n) cell. Depends on the cell's values, not
// its position in the grid, so a record is reproducible from any sweep that
// contains its cell.
std::uint64_t record_seed(std::uint64_t master_seed, double s, long long n, int r);

// One replication: optimal 1 -> n path on K_n. standardized_t uses k*(s) and
// is NaN for n = 2.
ExperimentRecord run_replication(double s, long long n, std::uint64_t seed);

// All records of the grid in (s, n, r) order. No files are touched.
std::vector<ExperimentRecord> simulate_records(const RunConfig& config);

struct RunOutcome {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;
  std::size_t record_count = 0;
};

// Writes config.json, records.csv (or records.jsonl) and manifest.json under
// config.output_path. The manifest says "complete": false until the last row
// is flushed; a failed run leaves it that way with the error recorded.
RunOutcome run_simulate(const RunConfig& config);

// run_simulate plus summary.csv (one row per cell) and hop_frequencies.csv
// (tidy: s, n, hopcount, frequency).
RunOutcome run_sweep(const RunConfig& config);

std::string format_record_csv(const ExperimentRecord& r);
std::string format_record_json(const ExperimentRecord& r);
inline constexpr const char* kRecordCsvHeader = "n,s,seed,weight,hopcount,standardized_t";

}  // namespace fpp
