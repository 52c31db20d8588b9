// Acceptance runner: one PASS/FAIL line per criterion. Usage:
//   acceptance <id>|all [--seed N] [--jobs N]
// Exits non-zero if any selected criterion fails.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include "fpp/validation.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <criterion 1-%d | all> [--seed N] [--jobs N]\n", argv[0],
                 fpp::kCriterionCount);
    return 2;
  }
  fpp::ValidationOptions opt;
  std::vector<int> ids;
  try {
    for (int i = 2; i < argc; ++i) {
      const std::string flag = argv[i];
      if (i + 1 >= argc) throw std::invalid_argument("missing value for " + flag);
      if (flag == "--seed") {
        opt.seed = std::stoull(argv[++i], nullptr, 0);
      } else if (flag == "--jobs") {
        opt.jobs = static_cast<unsigned>(std::stoul(argv[++i]));
      } else {
        throw std::invalid_argument("unknown flag " + flag);
      }
    }
    const std::string which = argv[1];
    if (which == "all") {
      for (int id = 1; id <= fpp::kCriterionCount; ++id) ids.push_back(id);
    } else {
      const int id = std::stoi(which);
      if (id < 1 || id > fpp::kCriterionCount) throw std::invalid_argument("no criterion " + which);
      ids.push_back(id);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 2;
  }

  bool all = true;
  for (int id : ids) {
    try {
      const fpp::CriterionResult r = fpp::run_criterion(id, opt);
      std::printf("%s criterion %d: %s (%.1f s)\n", r.pass() ? "PASS" : "FAIL", r.id,
                  r.title.c_str(), r.seconds);
      for (const auto& rep : r.reports) {
        std::printf("    [%s] %s: %.6g <= %.6g (n=%lld)%s%s\n", rep.pass ? "ok" : "FAIL",
                    rep.test_name.c_str(), rep.statistic, rep.threshold, rep.sample_size,
                    rep.note.empty() ? "" : "  ", rep.note.c_str());
      }
      all = all && r.pass();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion %d: error: %s\n", id, e.what());
      all = false;
    }
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
