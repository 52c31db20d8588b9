#pragma once

// Acceptance suite. Each criterion produces one or more TestReports with its
// parameters and tolerances pinned here; a criterion passes iff all of its
// reports pass.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fpp/simulate.hpp"
#include "fpp/stats.hpp"

namespace fpp {

inline constexpr int kCriterionCount = 12;
inline constexpr std::uint64_t kValidationSeed = 0x5eed2026;

struct ValidationOptions {
  std::uint64_t seed = kValidationSeed;
  unsigned jobs = 1;  // 0 = all hardware threads
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<TestReport> reports;
  double seconds = 0.0;

  bool pass() const;
};

CriterionResult run_criterion(int id, const ValidationOptions& opt = {});

// Suites: formulas, saddle, oracle, hopcount, gumbel, poisson, special,
// multipoint, all. Throws ConfigError for unknown names.
std::vector<int> suite_criteria(const std::string& suite);
std::vector<std::string> suite_names();

std::vector<CriterionResult> run_suite(const std::string& suite, const ValidationOptions& opt = {});

// reports.json: every report of every criterion plus the overall verdict.
std::string results_to_json(const std::string& suite, const std::vector<CriterionResult>& results);
void write_results(const std::filesystem::path& dir, const std::string& suite,
                   const std::vector<CriterionResult>& results);

// Brute-force oracles over all simple paths; exponential in n.
PathResult enumerate_shortest_path(const WeightModel& model, int n, Vertex src, Vertex dst);
std::uint64_t enumerate_k_edge_paths_below(const WeightModel& model, int n, int k, double z);

}  // namespace fpp
