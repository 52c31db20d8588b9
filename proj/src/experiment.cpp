#include "fpp/experiment.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fpp/error.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"
#include "fpp/simulate.hpp"
#include "fpp/theory.hpp"

namespace fpp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* transform_name(Transform t) {
  return t == Transform::linear ? "linear" : "log_substitution";
}

Transform parse_transform(const std::string& name) {
  if (name == "log_substitution") return Transform::log_substitution;
  if (name == "linear") return Transform::linear;
  throw ConfigError("unknown quadrature transform '" + name + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

struct Cell {
  double s;
  long long n;
};

std::vector<Cell> cells_of(const RunConfig& c) {
  std::vector<Cell> cells;
  for (double s : c.s_values) {
    for (long long n : c.n_values) cells.push_back({s, n});
  }
  return cells;
}

class Manifest {
 public:
  Manifest(fs::path path, const RunConfig& config, const char* command)
      : path_(std::move(path)) {
    doc_["command"] = command;
    doc_["complete"] = false;
    doc_["format"] = config.format == OutputFormat::csv ? "csv" : "json";
    doc_["files"] = json::array();
    doc_["metadata"]["started_utc"] = utc_now();
    flush();
  }

  void add_file(const fs::path& p) { doc_["files"].push_back(p.filename().string()); }

  void finish(std::size_t records) {
    doc_["records"] = records;
    doc_["complete"] = true;
    doc_["metadata"]["finished_utc"] = utc_now();
    flush();
  }

  void fail(const std::string& what) noexcept {
    try {
      doc_["error"] = what;
      doc_["metadata"]["failed_utc"] = utc_now();
      flush();
    } catch (...) {
    }
  }

 private:
  void flush() { write_text(path_, doc_.dump(2) + "\n"); }

  fs::path path_;
  json doc_;
};

// Computes every record on the worker pool while this thread writes them in
// order as soon as each becomes available.
template <class Sink>
void fan_out(const RunConfig& config, Sink&& sink) {
  const auto cells = cells_of(config);
  const std::size_t reps = static_cast<std::size_t>(config.replications);
  const std::size_t total = cells.size() * reps;

  std::vector<std::optional<ExperimentRecord>> slots(total);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<bool> cancel{false};
  std::exception_ptr worker_error;
  bool workers_done = false;

  auto compute = [&](std::size_t i) {
    if (cancel.load()) throw Error(ErrorCode::io, "cancelled");
    const Cell& c = cells[i / reps];
    const int r = static_cast<int>(i % reps);
    ExperimentRecord rec = run_replication(c.s, c.n, record_seed(config.master_seed, c.s, c.n, r));
    {
      std::lock_guard lock(mu);
      slots[i] = std::move(rec);
    }
    cv.notify_all();
  };

  std::thread driver([&] {
    try {
      parallel_for(total, config.jobs, compute);
    } catch (...) {
      std::lock_guard lock(mu);
      worker_error = std::current_exception();
    }
    {
      std::lock_guard lock(mu);
      workers_done = true;
    }
    cv.notify_all();
  });

  try {
    for (std::size_t i = 0; i < total; ++i) {
      ExperimentRecord rec;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return slots[i].has_value() || workers_done; });
        if (!slots[i]) break;  // a worker failed before producing row i
        rec = std::move(*slots[i]);
        slots[i].reset();
      }
      sink(rec);
    }
  } catch (...) {
    cancel = true;
    driver.join();
    throw;
  }
  driver.join();
  if (worker_error) std::rethrow_exception(worker_error);
}

}  // namespace

void RunConfig::validate() const {
  if (s_values.empty()) throw ConfigError("s_values must not be empty");
  for (double s : s_values) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ConfigError("every s must be a positive finite number, got " + fmt_double(s));
    }
  }
  if (n_values.empty()) throw ConfigError("n_values must not be empty");
  for (long long n : n_values) {
    if (n < 2 || n > kMaxVertices) {
      throw ConfigError("every n must lie in [2, " + std::to_string(kMaxVertices) + "], got " +
                        std::to_string(n));
    }
  }
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (output_path.empty()) throw ConfigError("output_path must not be empty");
  try {
    quadrature.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("quadrature: ") + e.what());
  }
}

std::string RunConfig::to_json() const {
  json j;
  j["s_values"] = s_values;
  j["n_values"] = n_values;
  j["replications"] = replications;
  j["master_seed"] = master_seed;
  j["output_path"] = output_path;
  j["quadrature"] = {{"node_count", quadrature.node_count},
                     {"tolerance", quadrature.tolerance},
                     {"transform", transform_name(quadrature.transform)}};
  j["jobs"] = jobs;
  j["format"] = format == OutputFormat::csv ? "csv" : "json";
  return j.dump(2);
}

RunConfig RunConfig::from_json(const std::string& text) {
  RunConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "s_values") {
        c.s_values = v.get<std::vector<double>>();
      } else if (key == "n_values") {
        c.n_values = v.get<std::vector<long long>>();
      } else if (key == "replications") {
        c.replications = v.get<int>();
      } else if (key == "master_seed") {
        if (!v.is_number_unsigned()) throw ConfigError("master_seed must be a non-negative integer");
        c.master_seed = v.get<std::uint64_t>();
      } else if (key == "output_path") {
        c.output_path = v.get<std::string>();
      } else if (key == "jobs") {
        if (!v.is_number_unsigned()) throw ConfigError("jobs must be a non-negative integer");
        c.jobs = v.get<unsigned>();
      } else if (key == "format") {
        const auto f = v.get<std::string>();
        if (f == "csv") {
          c.format = OutputFormat::csv;
        } else if (f == "json") {
          c.format = OutputFormat::json;
        } else {
          throw ConfigError("format must be csv or json, got '" + f + "'");
        }
      } else if (key == "quadrature") {
        for (const auto& [qk, qv] : v.items()) {
          if (qk == "node_count") {
            c.quadrature.node_count = qv.get<int>();
          } else if (qk == "tolerance") {
            c.quadrature.tolerance = qv.get<double>();
          } else if (qk == "transform") {
            c.quadrature.transform = parse_transform(qv.get<std::string>());
          } else {
            throw ConfigError("unknown quadrature key '" + qk + "'");
          }
        }
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config has a value of the wrong type: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read config: " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::uint64_t record_seed(std::uint64_t master_seed, double s, long long n, int r) {
  const std::uint64_t cell = mix64(std::bit_cast<std::uint64_t>(s)) ^
                             mix64(static_cast<std::uint64_t>(n) + 0x9e3779b97f4a7c15ULL);
  return replication_seed(master_seed ^ cell, static_cast<std::uint64_t>(r));
}

ExperimentRecord run_replication(double s, long long n, std::uint64_t seed) {
  if (n < 2 || n > kMaxVertices) throw DomainError("run_replication: n out of range");
  const Disorder d(s);
  const WeightModel model(d, seed);
  const int nn = static_cast<int>(n);
  const PathResult path = shortest_path(model, nn, 1, nn);
  ExperimentRecord rec;
  rec.n = n;
  rec.s = s;
  rec.seed = seed;
  rec.weight = path.weight;
  rec.hopcount = path.hopcount;
  rec.standardized_t = n >= 3 ? standardize_weight(d, k_star(d).k_star, n, path.weight)
                              : std::numeric_limits<double>::quiet_NaN();
  return rec;
}

std::vector<ExperimentRecord> simulate_records(const RunConfig& config) {
  config.validate();
  std::vector<ExperimentRecord> out;
  fan_out(config, [&](const ExperimentRecord& r) { out.push_back(r); });
  return out;
}

std::string format_record_csv(const ExperimentRecord& r) {
  std::string line = std::to_string(r.n) + "," + fmt_double(r.s) + "," + std::to_string(r.seed) +
                     "," + fmt_double(r.weight) + "," + std::to_string(r.hopcount) + ",";
  if (!std::isnan(r.standardized_t)) line += fmt_double(r.standardized_t);
  return line;
}

std::string format_record_json(const ExperimentRecord& r) {
  json j;
  j["n"] = r.n;
  j["s"] = r.s;
  j["seed"] = r.seed;
  j["weight"] = r.weight;
  j["hopcount"] = r.hopcount;
  j["standardized_t"] = std::isnan(r.standardized_t) ? json(nullptr) : json(r.standardized_t);
  return j.dump();
}

namespace {

struct RunState {
  fs::path dir;
  std::unique_ptr<Manifest> manifest;
  RunOutcome outcome;
};

RunState open_run(const RunConfig& config, const char* command) {
  config.validate();
  RunState st;
  st.dir = config.output_path;
  std::error_code ec;
  fs::create_directories(st.dir, ec);
  if (ec) throw IoError("cannot create output directory " + st.dir.string() + ": " + ec.message());
  st.manifest = std::make_unique<Manifest>(st.dir / "manifest.json", config, command);
  st.outcome.directory = st.dir;
  const fs::path cfg = st.dir / "config.json";
  write_text(cfg, config.to_json() + "\n");
  st.manifest->add_file(cfg);
  st.outcome.files.push_back(cfg);
  return st;
}

// Streams records to disk; `also` sees each record after it is written.
template <class Also>
void write_records(const RunConfig& config, RunState& st, Also&& also) {
  const bool csv = config.format == OutputFormat::csv;
  const fs::path path = st.dir / (csv ? "records.csv" : "records.jsonl");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  st.manifest->add_file(path);
  st.outcome.files.push_back(path);
  if (csv) out << kRecordCsvHeader << '\n';
  fan_out(config, [&](const ExperimentRecord& r) {
    out << (csv ? format_record_csv(r) : format_record_json(r)) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
    ++st.outcome.record_count;
    also(r);
  });
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

RunOutcome run_simulate(const RunConfig& config) {
  RunState st = open_run(config, "simulate");
  try {
    write_records(config, st, [](const ExperimentRecord&) {});
    st.manifest->finish(st.outcome.record_count);
  } catch (const std::exception& e) {
    st.manifest->fail(e.what());
    throw;
  }
  return st.outcome;
}

RunOutcome run_sweep(const RunConfig& config) {
  RunState st = open_run(config, "sweep");
  try {
    struct Acc {
      std::map<int, long long> hops;
      double sum_w = 0.0;
      double sum_t = 0.0;
      long long count = 0;
    };
    std::map<std::pair<std::size_t, std::size_t>, Acc> acc;
    std::size_t seen = 0;
    const std::size_t reps = static_cast<std::size_t>(config.replications);
    const std::size_t per_s = config.n_values.size();
    write_records(config, st, [&](const ExperimentRecord& r) {
      const std::size_t cell = seen++ / reps;
      Acc& a = acc[{cell / per_s, cell % per_s}];
      ++a.hops[r.hopcount];
      a.sum_w += r.weight;
      a.sum_t += r.standardized_t;
      ++a.count;
    });

    std::string summary =
        "s,n,replications,k_star,is_special,modal_hopcount,freq_k_star,mean_weight,"
        "mean_standardized_t\n";
    std::string freqs = "s,n,hopcount,frequency\n";
    for (const auto& [key, a] : acc) {
      const double s = config.s_values[key.first];
      const long long n = config.n_values[key.second];
      const HopMinimizer hm = k_star(Disorder(s));
      std::vector<int> hops;
      for (const auto& [h, c] : a.hops) hops.insert(hops.end(), static_cast<std::size_t>(c), h);
      const auto hist = hop_histogram(hops);
      int modal = hist.begin()->first;
      for (const auto& [h, c] : a.hops) {
        if (c > a.hops.at(modal)) modal = h;
      }
      const double f_star = hist.count(hm.k_star) ? hist.at(hm.k_star) : 0.0;
      const double cnt = static_cast<double>(a.count);
      summary += fmt_double(s) + "," + std::to_string(n) + "," + std::to_string(a.count) + "," +
                 std::to_string(hm.k_star) + "," + (hm.is_special ? "1" : "0") + "," +
                 std::to_string(modal) + "," + fmt_double(f_star) + "," +
                 fmt_double(a.sum_w / cnt) + "," +
                 (n >= 3 ? fmt_double(a.sum_t / cnt) : std::string()) + "\n";
      for (const auto& [h, f] : hist) {
        freqs += fmt_double(s) + "," + std::to_string(n) + "," + std::to_string(h) + "," +
                 fmt_double(f) + "\n";
      }
    }
    for (const auto& [name, text] : {std::pair{"summary.csv", &summary},
                                     std::pair{"hop_frequencies.csv", &freqs}}) {
      const fs::path p = st.dir / name;
      write_text(p, *text);
      st.manifest->add_file(p);
      st.outcome.files.push_back(p);
    }
    st.manifest->finish(st.outcome.record_count);
  } catch (const std::exception& e) {
    st.manifest->fail(e.what());
    throw;
  }
  return st.outcome;
}

}  // namespace fpp
