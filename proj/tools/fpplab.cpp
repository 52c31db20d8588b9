// fpplab: command-line front end over the fpp C interface.
//
//   fpplab theory   --s 2.5 [--kmax 6] [--format json]
//   fpplab theory   --special 2
//   fpplab simulate --s 0.5 --n 2000 --reps 500 --seed 1 --out run/
//   fpplab sweep    --s 0.5,1.5,2.5 --n 500,1000 --reps 200 --out sweep/
//   fpplab validate formulas [--out DIR]
//
// Exit codes: 0 success / all reports pass, 1 a validation report failed,
// 2 bad arguments or config, 3 runtime or I/O error.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpp/fpp.h"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct CliError {
  int exit_code;
  std::string message;
};

void check(fpp_status st) {
  if (st == FPP_OK) return;
  const int code = (st == FPP_ERR_CONFIG || st == FPP_ERR_INVALID_ARGUMENT || st == FPP_ERR_DOMAIN)
                       ? kExitUsage
                       : kExitRuntime;
  throw CliError{code, std::string(fpp_status_name(st)) + ": " + fpp_last_error()};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// ---- theory -------------------------------------------------------------------

struct TheoryArgs {
  std::optional<double> s;
  int kmax = 6;
  std::optional<int> special;
  std::string format = "text";
};

int cmd_theory(const TheoryArgs& a) {
  if (a.kmax < 2) throw CliError{kExitUsage, "--kmax must be >= 2"};
  if (!a.s && !a.special) throw CliError{kExitUsage, "theory needs --s or --special"};
  nlohmann::ordered_json j;
  if (a.special) {
    double sj = 0;
    check(fpp_special_point(*a.special, &sj));
    j["special"] = {{"j", *a.special}, {"s_j", sj}};
  }
  if (a.s) {
    const double s = *a.s;
    fpp_hop_minimizer hm{};
    check(fpp_k_star(s, &hm));
    j["s"] = s;
    j["p"] = 1.0 / s;
    j["k_star"] = hm.k_star;
    j["g_star"] = hm.g_star;
    j["is_special"] = hm.is_special != 0;
    if (hm.is_special) j["pair"] = {hm.pair_lo, hm.pair_hi};
    j["table"] = nlohmann::ordered_json::array();
    for (int k = 2; k <= a.kmax; ++k) {
      double g = 0, ak = 0;
      check(fpp_gs(s, k, &g));
      check(fpp_a_coeff(s, k, &ak));
      j["table"].push_back({{"k", k}, {"g", g}, {"a_k", ak}});
    }
    j["special_points"] = nlohmann::ordered_json::array();
    for (int jj = 2; jj <= a.kmax; ++jj) {
      double sj = 0;
      check(fpp_special_point(jj, &sj));
      j["special_points"].push_back({{"j", jj}, {"s_j", sj}});
    }
  }

  if (a.format == "json") {
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
  }
  if (a.format == "csv") {
    if (a.s) {
      std::printf("k,g,a_k,is_k_star\n");
      for (const auto& row : j["table"]) {
        const int k = row["k"];
        std::printf("%d,%s,%s,%d\n", k, fmt(row["g"]).c_str(), fmt(row["a_k"]).c_str(),
                    k == j["k_star"].get<int>() ? 1 : 0);
      }
    } else {
      std::printf("j,s_j\n%d,%s\n", *a.special, fmt(j["special"]["s_j"]).c_str());
    }
    return 0;
  }
  if (a.special) {
    std::printf("s_%d = %s\n", *a.special, fmt(j["special"]["s_j"]).c_str());
  }
  if (a.s) {
    std::printf("s = %s  p = %s\n", fmt(*a.s).c_str(), fmt(1.0 / *a.s).c_str());
    std::printf("k* = %d  g* = %s  special = %s", j["k_star"].get<int>(),
                fmt(j["g_star"]).c_str(), j["is_special"].get<bool>() ? "yes" : "no");
    if (j.contains("pair")) std::printf(" (pair %d, %d)", j["pair"][0].get<int>(), j["pair"][1].get<int>());
    std::printf("\n\n%-4s %-18s %s\n", "k", "g_s(k)", "a_k");
    for (const auto& row : j["table"]) {
      std::printf("%-4d %-18s %s\n", row["k"].get<int>(), fmt(row["g"]).c_str(),
                  fmt(row["a_k"]).c_str());
    }
    std::printf("\n%-4s %s\n", "j", "s_j");
    for (const auto& row : j["special_points"]) {
      std::printf("%-4d %s\n", row["j"].get<int>(), fmt(row["s_j"]).c_str());
    }
  }
  return 0;
}

// ---- simulate / sweep ------------------------------------------------------------

struct RunArgs {
  std::string config_file;
  std::vector<double> s;
  std::vector<long long> n;
  std::optional<int> reps;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::string format;
  std::string out;
};

struct ConfigHandle {
  fpp_config* c = nullptr;
  ~ConfigHandle() { fpp_config_destroy(c); }
};

int cmd_run(const RunArgs& a, bool sweep) {
  ConfigHandle h;
  if (!a.config_file.empty()) {
    check(fpp_config_load(a.config_file.c_str(), &h.c));
  } else {
    check(fpp_config_create(&h.c));
  }
  if (!a.s.empty()) check(fpp_config_set_s_values(h.c, a.s.data(), a.s.size()));
  if (!a.n.empty()) check(fpp_config_set_n_values(h.c, a.n.data(), a.n.size()));
  if (a.reps) check(fpp_config_set_replications(h.c, *a.reps));
  if (a.seed) check(fpp_config_set_seed(h.c, *a.seed));
  if (a.jobs) check(fpp_config_set_jobs(h.c, *a.jobs));
  if (!a.format.empty()) {
    check(fpp_config_set_format(h.c, a.format == "json" ? FPP_FORMAT_JSON : FPP_FORMAT_CSV));
  }
  if (!a.out.empty()) check(fpp_config_set_output_path(h.c, a.out.c_str()));
  check(fpp_config_validate(h.c));

  size_t records = 0;
  check(sweep ? fpp_run_sweep(h.c, &records) : fpp_run_simulate(h.c, &records));
  char* cfg = nullptr;
  check(fpp_config_to_json(h.c, &cfg));
  const auto echo = nlohmann::json::parse(cfg);
  fpp_string_free(cfg);
  std::printf("%s: wrote %zu records to %s\n", sweep ? "sweep" : "simulate", records,
              echo["output_path"].get<std::string>().c_str());
  return 0;
}

// ---- validate -------------------------------------------------------------------

struct ValidateArgs {
  std::string suite;
  std::string out = "fpp_validate";
  std::uint64_t seed = fpp_default_validation_seed();
  unsigned jobs = 1;
  std::string format = "text";
};

int cmd_validate(const ValidateArgs& a) {
  fpp_report_set* set = nullptr;
  check(fpp_validate(a.suite.c_str(), a.seed, a.jobs, a.out.empty() ? nullptr : a.out.c_str(),
                     &set));
  const int all = fpp_report_set_pass(set);
  if (a.format == "json") {
    char* text = nullptr;
    const fpp_status st = fpp_report_set_to_json(set, &text);
    if (st == FPP_OK) std::printf("%s\n", text);
    fpp_string_free(text);
  } else {
    for (size_t i = 0; i < fpp_report_set_criterion_count(set); ++i) {
      int id = 0, pass = 0;
      const char* title = nullptr;
      double seconds = 0;
      size_t nrep = 0;
      fpp_report_set_criterion(set, i, &id, &title, &pass, &seconds, &nrep);
      std::printf("[%s] criterion %d: %s (%.1f s)\n", pass ? "PASS" : "FAIL", id, title, seconds);
      for (size_t r = 0; r < nrep; ++r) {
        fpp_report rep{};
        fpp_report_set_report(set, i, r, &rep);
        std::printf("    %s %-58s %-12s <= %-10s n=%lld%s%s\n", rep.pass ? "ok  " : "FAIL",
                    rep.test_name, fmt(rep.statistic).c_str(), fmt(rep.threshold).c_str(),
                    rep.sample_size, *rep.note ? "  " : "", rep.note);
      }
    }
    std::printf("%s\n", all ? "all criteria pass" : "some criteria FAIL");
  }
  fpp_report_set_destroy(set);
  return all ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-passage percolation on K_n with E^{-s} edge weights"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fpp_version()));

  TheoryArgs theory;
  auto* th = app.add_subcommand("theory", "closed-form quantities for one s");
  th->add_option("--s", theory.s, "disorder exponent s > 0");
  th->add_option("--kmax", theory.kmax, "largest k in the tables")->capture_default_str();
  th->add_option("--special", theory.special, "print the special point s_j");
  th->add_option("--format", theory.format)->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();

  RunArgs sim, swp;
  auto add_run_flags = [](CLI::App* cmd, RunArgs& a) {
    cmd->add_option("--config", a.config_file, "JSON config; flags override its fields")
        ->check(CLI::ExistingFile);
    cmd->add_option("--s", a.s, "s values")->delimiter(',');
    cmd->add_option("--n", a.n, "graph sizes")->delimiter(',');
    cmd->add_option("--reps", a.reps, "replications per (s, n)");
    cmd->add_option("--seed", a.seed, "master seed");
    cmd->add_option("--jobs", a.jobs, "worker threads (0 = all cores)");
    cmd->add_option("--format", a.format, "record format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", a.out, "output directory");
  };
  auto* simulate = app.add_subcommand("simulate", "optimal paths for every (s, n, replication)");
  add_run_flags(simulate, sim);
  auto* sweep = app.add_subcommand("sweep", "simulate plus per-cell summary tables");
  add_run_flags(sweep, swp);

  ValidateArgs val;
  std::string suites;
  for (size_t i = 0; fpp_suite_name(i); ++i) suites += (i ? ", " : "") + std::string(fpp_suite_name(i));
  auto* validate = app.add_subcommand("validate", "run an acceptance suite (" + suites + ")");
  validate->add_option("suite", val.suite, "suite name")->required();
  validate->add_option("--out", val.out, "directory for reports.json (empty: do not write)")
      ->capture_default_str();
  validate->add_option("--seed", val.seed, "master seed")->capture_default_str();
  validate->add_option("--jobs", val.jobs, "worker threads (0 = all cores)")->capture_default_str();
  validate->add_option("--format", val.format)->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*th) return cmd_theory(theory);
    if (*simulate) return cmd_run(sim, false);
    if (*sweep) return cmd_run(swp, true);
    if (*validate) return cmd_validate(val);
  } catch (const CliError& e) {
    std::fprintf(stderr, "fpplab: %s\n", e.message.c_str());
    return e.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fpplab: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
