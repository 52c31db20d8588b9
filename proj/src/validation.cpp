#include "fpp/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>

#include <json.hpp>

#include "fpp/error.hpp"
#include "fpp/numerics.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"
#include "fpp/theory.hpp"

namespace fpp {

namespace {

std::string num(double x, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::uint64_t criterion_seed(const ValidationOptions& opt, int id) {
  return opt.seed ^ mix64(static_cast<std::uint64_t>(id) * 0x100000001b3ULL);
}

template <class T, class Fn>
std::vector<T> replicate(int reps, unsigned jobs, Fn&& fn) {
  std::vector<T> out(static_cast<std::size_t>(reps));
  parallel_for(out.size(), jobs, [&](std::size_t r) { out[r] = fn(static_cast<int>(r)); });
  return out;
}

// ---- 1. formula identities ------------------------------------------------

CriterionResult formulas_identities() {
  CriterionResult c{1, "formula identities", {}, 0.0};

  int outside = 0;
  double worst_tie = 0.0;
  for (int j = 2; j <= 10; ++j) {
    const double sj = special_point(j);
    if (!(sj > j - 1 && sj < j)) ++outside;
    const Disorder d(sj);
    const double gj = gs(d, j), gj1 = gs(d, j + 1);
    worst_tie = std::max(worst_tie, std::abs(gj - gj1) / std::min(gj, gj1));
  }
  c.reports.push_back(make_report("s_j in (j-1, j), j=2..10", outside, 0, 9));
  c.reports.push_back(make_report("g_{s_j}(j) = g_{s_j}(j+1) relative gap, j=2..10", worst_tie,
                                  1e-10, 9));

  double a1_err = 0.0;
  for (double s : {0.25, 0.5, 1.0, 2.5, 7.0}) {
    a1_err = std::max(a1_err, std::abs(a_coeff(Disorder(s), 1) - 1.0));
  }
  c.reports.push_back(make_report("a_1 = 1", a1_err, 0.0, 5));

  double worst_rt = 0.0;
  long long checked = 0;
  for (double s : {0.5, 1.0, 1.5, 2.5}) {
    const Disorder d(s);
    const int k = k_star(d).k_star;
    for (long long n : {10LL, 1000LL, 1000000LL}) {
      for (int i = -40; i <= 40; ++i) {
        const double t = i * 0.25;
        const double back = standardize_weight(d, k, n, centering_z(d, k, n, t));
        worst_rt = std::max(worst_rt, std::abs(back - t) / std::max(1.0, std::abs(t)));
        ++checked;
      }
    }
  }
  c.reports.push_back(make_report("standardize(center(t)) = t over t in [-10, 10]", worst_rt,
                                  1e-12, checked, "error relative to max(1, |t|)"));
  return c;
}

// ---- 2. minimizer regimes --------------------------------------------------

CriterionResult minimizer_regimes() {
  CriterionResult c{2, "minimizer regimes", {}, 0.0};
  int bad = 0;
  std::string seen;
  for (int i = 1; i <= 10; ++i) {
    const int k = k_star(Disorder(i / 10.0)).k_star;
    if (k != 2) ++bad;
  }
  c.reports.push_back(make_report("k*(s) = 2 for s = 0.1..1.0", bad, 0, 10));
  const int k25 = k_star(Disorder(2.5)).k_star;
  const int k15 = k_star(Disorder(1.5)).k_star;
  c.reports.push_back(make_report("k*(2.5) = 4", k25 == 4 ? 0 : 1, 0, 1,
                                  "k*(2.5) = " + std::to_string(k25)));
  c.reports.push_back(make_report("k*(1.5) = 3", k15 == 3 ? 0 : 1, 0, 1,
                                  "k*(1.5) = " + std::to_string(k15)));
  return c;
}

// ---- 3. Poisson condition --------------------------------------------------

CriterionResult poisson_condition_claim() {
  CriterionResult c{3, "Poisson condition claim", {}, 0.0};
  int bad = 0;
  long long checked = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::string where;
  for (int i = 1; i <= 180; ++i) {
    const double s = 1.0 + 0.05 * i;
    const Disorder d(s);
    const int lo = static_cast<int>(std::floor(s + 1.0));
    const int hi = static_cast<int>(std::ceil(s + 1.0));
    for (int k : {lo, hi}) {
      if (k == hi && hi == lo) continue;
      for (int j = 1; j <= k - 2; ++j) {
        const PoissonCondition pc = poisson_condition(d, k, j);
        ++checked;
        if (!pc.holds) ++bad;
        if (pc.margin < min_margin) {
          min_margin = pc.margin;
          where = "s=" + num(s, 4) + " k=" + std::to_string(k) + " j=" + std::to_string(j);
        }
      }
    }
  }
  c.reports.push_back(make_report("margin > 0 on s in (1, 10] step 0.05", bad, 0, checked,
                                  "min margin " + num(min_margin) + " at " + where));
  return c;
}

// ---- 4. saddle-point validation -------------------------------------------

CriterionResult saddle_validation() {
  CriterionResult c{4, "saddle-point validation", {}, 0.0};
  // Tail depth X = k^{p+1} z^{-p}, i.e. the exponent of the leading term.
  const std::vector<double> depths = {25, 50, 100, 200, 400, 800};
  for (double s : {0.5, 1.0, 2.0}) {
    const Disorder d(s);
    for (int k : {2, 3}) {
      std::vector<double> dev;
      std::string trail;
      for (double x : depths) {
        const double z = std::pow(std::pow(k, d.p() + 1.0) / x, s);
        const double r = std::exp(fk_numeric(d, k, z) - log_fk_tail_asymptotic(d, k, z));
        dev.push_back(std::abs(r - 1.0));
        trail += (trail.empty() ? "" : " ") + num(r, 5);
      }
      int rises = 0;
      for (std::size_t i = 1; i < dev.size(); ++i) {
        if (!(dev[i] < dev[i - 1])) ++rises;
      }
      const std::string tag = "s=" + num(s) + " k=" + std::to_string(k);
      c.reports.push_back(make_report("|ratio - 1| at deepest point, " + tag, dev.back(), 0.2,
                                      static_cast<long long>(depths.size()),
                                      "ratios (descending z): " + trail));
      c.reports.push_back(make_report("ratio trends to 1, " + tag, rises, 0,
                                      static_cast<long long>(depths.size())));
    }
  }
  return c;
}

// ---- 5. correlated-tail rate -----------------------------------------------

CriterionResult correlated_tail_rate() {
  CriterionResult c{5, "correlated-tail rate", {}, 0.0};
  struct Case {
    double s;
    int k, j;
  };
  for (const Case& cs : {Case{1.0, 3, 1}, Case{2.5, 4, 1}, Case{2.5, 4, 2}}) {
    const Disorder d(cs.s);
    const double x1 = 200.0, x2 = 400.0;  // z^{-p}
    const double z1 = std::pow(x1, -cs.s), z2 = std::pow(x2, -cs.s);
    const double l1 = joint_tail_numeric(d, cs.k, cs.j, z1, z1);
    const double l2 = joint_tail_numeric(d, cs.k, cs.j, z2, z2);
    const double slope = -(l2 - l1) / (x2 - x1);
    const double target = correlated_tail_exponent(d, cs.k, cs.j);
    c.reports.push_back(make_report(
        "log-slope / rate - 1, s=" + num(cs.s) + " k=" + std::to_string(cs.k) +
            " j=" + std::to_string(cs.j),
        std::abs(slope / target - 1.0), 0.05, 2,
        "slope " + num(slope, 8) + " vs [(k-j)nu+j]^{p+1} = " + num(target, 8)));
  }
  return c;
}

// ---- 6. Dijkstra oracle ----------------------------------------------------

CriterionResult dijkstra_oracle(const ValidationOptions& opt) {
  CriterionResult c{6, "Dijkstra oracle", {}, 0.0};
  const std::uint64_t base = criterion_seed(opt, 6);
  int mismatches = 0;
  long long cases = 0;
  double worst = 0.0;
  for (double s : {0.5, 1.0, 2.5}) {
    for (int n = 5; n <= 9; ++n) {
      for (int r = 0; r < 50; ++r) {
        const WeightModel m(Disorder(s), replication_seed(base ^ mix64(n), r));
        const PathResult fast = shortest_path(m, n, 1, n);
        const PathResult slow = enumerate_shortest_path(m, n, 1, n);
        const double rel = std::abs(fast.weight - slow.weight) / slow.weight;
        worst = std::max(worst, rel);
        if (rel > 1e-12 || fast.vertices != slow.vertices) ++mismatches;
        ++cases;
      }
    }
  }
  c.reports.push_back(make_report("shortest_path differs from enumeration, n=5..9 x 50 seeds",
                                  mismatches, 0, cases,
                                  "s in {0.5, 1, 2.5}; max relative weight gap " + num(worst)));
  return c;
}

// ---- 7. hopcount law -------------------------------------------------------

CriterionResult hopcount_law(const ValidationOptions& opt) {
  CriterionResult c{7, "hopcount law", {}, 0.0};
  const Disorder d(0.5);
  const std::uint64_t base = criterion_seed(opt, 7);
  auto hops_at = [&](int n, int reps) {
    return replicate<int>(reps, opt.jobs, [&](int r) {
      const WeightModel m(d, replication_seed(base ^ mix64(static_cast<std::uint64_t>(n)), r));
      return shortest_path(m, n, 1, n).hopcount;
    });
  };

  const auto h2000 = hops_at(2000, 500);
  const auto hist = hop_histogram(h2000);
  const double f2 = hist.count(2) ? hist.at(2) : 0.0;
  std::string dist;
  for (const auto& [h, f] : hist) dist += "H=" + std::to_string(h) + ":" + num(f, 4) + " ";
  c.reports.push_back(make_report("1 - P(H_n = 2), s=0.5, n=2000", 1.0 - f2, 0.05, 500, dist));

  int lo = std::numeric_limits<int>::max(), hi = 0;
  std::string maxima;
  for (int n : {500, 1000, 2000, 4000}) {
    const auto h = hops_at(n, 200);
    const int mx = *std::max_element(h.begin(), h.end());
    lo = std::min(lo, mx);
    hi = std::max(hi, mx);
    maxima += "n=" + std::to_string(n) + ":" + std::to_string(mx) + " ";
  }
  c.reports.push_back(make_report("spread of max H_n over n in {500..4000}", hi - lo, 0, 800,
                                  "max H_n per n (200 reps): " + maxima));
  return c;
}

// ---- 8. Gumbel weight law ----------------------------------------------------

CriterionResult gumbel_weight_law(const ValidationOptions& opt) {
  CriterionResult c{8, "Gumbel weight law", {}, 0.0};
  const Disorder d(0.5);
  const std::uint64_t base = criterion_seed(opt, 8);
  const long long n = 5000;
  const auto t = replicate<double>(1000, opt.jobs, [&](int r) {
    const WeightModel m(d, replication_seed(base, r));
    return standardize_weight(d, 2, n, min_two_edge(m, static_cast<int>(n)));
  });
  c.reports.push_back(ks_against_gumbel(t, d, 2, 0.08, "KS min_two_edge vs Gumbel, n=5000"));

  // The inverse-CDF sampler needs no graph, so n can be taken far out.
  const double log_n = 30.0 * std::log(10.0);
  for (int k : {2, 3}) {
    const CenteringMap cm(d, k, log_n);
    const auto tk = replicate<double>(20000, opt.jobs, [&](int r) {
      Stream rng(base ^ mix64(static_cast<std::uint64_t>(k)), static_cast<std::uint64_t>(r));
      return cm.standardize(sample_min_independent(d, k, log_n, rng));
    });
    c.reports.push_back(ks_against_independent_min(
        tk, d, k, 0.05, "KS independent minimum vs exp(-a_k e^t), k=" + std::to_string(k)));
    c.reports.back().note = "n = 1e30, m = n^{k-1}";
  }
  return c;
}

// ---- 9. Poisson count law ----------------------------------------------------

CriterionResult poisson_count_law(const ValidationOptions& opt) {
  CriterionResult c{9, "Poisson count law", {}, 0.0};
  const Disorder d(0.5);
  const long long n = 5000;
  const std::uint64_t base = criterion_seed(opt, 9);
  const double z = centering_z(d, 2, n, 0.0);
  const auto counts = replicate<std::uint64_t>(1000, opt.jobs, [&](int r) {
    const WeightModel m(d, replication_seed(base, r));
    return count_k_edge_paths_below(m, static_cast<int>(n), 2, z).count;
  });
  double mean = 0.0;
  for (auto k : counts) mean += static_cast<double>(k);
  mean /= static_cast<double>(counts.size());
  const double lam = gumbel_rate(d, 2, 0.0);
  const double exact = static_cast<double>(n - 2) * std::exp(fk_numeric(d, 2, z));
  c.reports.push_back(make_report("|mean N_2 / lambda_2(0) - 1|", std::abs(mean / lam - 1.0), 0.15,
                                  1000,
                                  "mean " + num(mean) + ", lambda_2(0) " + num(lam) +
                                      ", finite-n expectation " + num(exact)));
  c.reports.push_back(poisson_count_test(counts, lam, 0.1, "TV(counts, Poisson(lambda_2(0)))"));
  return c;
}

// ---- 10. special set --------------------------------------------------------

CriterionResult special_set(const ValidationOptions& opt) {
  CriterionResult c{10, "special set", {}, 0.0};
  const double s2 = special_point(2);
  const Disorder d(s2);
  const int n = 5000;
  const std::uint64_t base = criterion_seed(opt, 10);
  const auto hops = replicate<int>(1000, opt.jobs, [&](int r) {
    const WeightModel m(d, replication_seed(base, r));
    return shortest_path(m, n, 1, n).hopcount;
  });
  const auto hist = hop_histogram(hops);
  auto freq = [&](int h) { return hist.count(h) ? hist.at(h) : 0.0; };
  const HopSplit split = hop_split_probability(s2);
  const HopSplit ordered = hop_split_probability(s2, PathCount::ordered);
  std::string dist;
  for (const auto& [h, f] : hist) dist += "H=" + std::to_string(h) + ":" + num(f, 4) + " ";
  const std::string alt =
      "; with ordered path counts the limit is " + num(ordered.p_floor, 5) + "/" +
      num(ordered.p_ceil, 5);
  c.reports.push_back(make_report("|P(H=2) - p_floor|", std::abs(freq(2) - split.p_floor), 0.10,
                                  1000, dist + "vs p_floor " + num(split.p_floor, 5) + alt));
  c.reports.push_back(make_report("|P(H=3) - p_ceil|", std::abs(freq(3) - split.p_ceil), 0.10,
                                  1000, "p_ceil " + num(split.p_ceil, 5) + alt));
  c.reports.push_back(make_report("P(H=2) > 0 and P(H=3) > 0",
                                  freq(2) > 0.0 && freq(3) > 0.0 ? 0 : 1, 0, 1000));
  return c;
}

// ---- 11. multipoint independence ---------------------------------------------

CriterionResult multipoint_independence(const ValidationOptions& opt) {
  CriterionResult c{11, "multipoint independence", {}, 0.0};
  const Disorder d(0.5);
  const long long n = 3000;
  const std::uint64_t base = criterion_seed(opt, 11);
  const auto pairs = replicate<std::pair<double, double>>(2000, opt.jobs, [&](int r) {
    const WeightModel m(d, replication_seed(base, r));
    const auto res = multipoint_weights(m, static_cast<int>(n), 2);
    return std::pair{standardize_weight(d, 2, n, res[0].weight),
                     standardize_weight(d, 2, n, res[1].weight)};
  });
  const double rho = pairwise_correlation(pairs);
  c.reports.push_back(make_report("|rho(t_2, t_3)|", std::abs(rho), 0.05, 2000,
                                  "rho = " + num(rho)));
  std::vector<double> a, b;
  for (const auto& [x, y] : pairs) {
    a.push_back(x);
    b.push_back(y);
  }
  c.reports.push_back(ks_against_gumbel(a, d, 2, 0.08, "KS target 2 vs Gumbel"));
  c.reports.push_back(ks_against_gumbel(b, d, 2, 0.08, "KS target 3 vs Gumbel"));
  return c;
}

// ---- 12. first-order lower bound ----------------------------------------------

CriterionResult first_order_floor(const ValidationOptions& opt) {
  CriterionResult c{12, "first-order lower bound proxy", {}, 0.0};
  const Disorder d(0.5);
  const int n = 4000;
  const std::uint64_t base = criterion_seed(opt, 12);
  for (int k : {2, 3}) {
    const double z = 0.8 * gs(d, k) / std::pow(std::log(static_cast<double>(n)), d.s());
    const auto counts = replicate<std::uint64_t>(200, opt.jobs, [&](int r) {
      const WeightModel m(d, replication_seed(base ^ mix64(static_cast<std::uint64_t>(k)), r));
      return count_k_edge_paths_below(m, n, k, z).count;
    });
    const auto positive = std::count_if(counts.begin(), counts.end(), [](auto x) { return x > 0; });
    const double paths = k == 2 ? n - 2.0 : (n - 2.0) * (n - 3.0);
    const double expect = paths * std::exp(fk_numeric(d, k, z));
    c.reports.push_back(make_report(
        "seeds with N_" + std::to_string(k) + "(0.8 g_s(k)/(log n)^s) > 0",
        static_cast<double>(positive), 0, 200,
        "expected count per seed " + num(expect) + ", expected positive seeds " +
            num(200.0 * -std::expm1(-expect))));
  }
  return c;
}

using Runner = std::function<CriterionResult(const ValidationOptions&)>;

const std::map<int, Runner>& runners() {
  static const std::map<int, Runner> table = {
      {1, [](const ValidationOptions&) { return formulas_identities(); }},
      {2, [](const ValidationOptions&) { return minimizer_regimes(); }},
      {3, [](const ValidationOptions&) { return poisson_condition_claim(); }},
      {4, [](const ValidationOptions&) { return saddle_validation(); }},
      {5, [](const ValidationOptions&) { return correlated_tail_rate(); }},
      {6, dijkstra_oracle},
      {7, hopcount_law},
      {8, gumbel_weight_law},
      {9, poisson_count_law},
      {10, special_set},
      {11, multipoint_independence},
      {12, first_order_floor},
  };
  return table;
}

const std::vector<std::pair<std::string, std::vector<int>>>& suites() {
  static const std::vector<std::pair<std::string, std::vector<int>>> table = {
      {"formulas", {1, 2, 3}}, {"saddle", {4, 5}},  {"oracle", {6}},
      {"hopcount", {7}},       {"gumbel", {8}},     {"poisson", {9, 12}},
      {"special", {10}},       {"multipoint", {11}}, {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}},
  };
  return table;
}

// Walks every simple src -> dst path, summing weights in path order.
void enumerate(const WeightModel& m, int n, Vertex dst, std::vector<Vertex>& path,
               std::vector<char>& used, double w, PathResult& best) {
  const Vertex u = path.back();
  if (u == dst) {
    if (w < best.weight) {
      best.weight = w;
      best.vertices = path;
    }
    return;
  }
  for (Vertex v = 1; v <= n; ++v) {
    if (used[v]) continue;
    const double nw = w + m.edge_weight(u, v);
    if (nw >= best.weight) continue;
    used[v] = 1;
    path.push_back(v);
    enumerate(m, n, dst, path, used, nw, best);
    path.pop_back();
    used[v] = 0;
  }
}

}  // namespace

bool CriterionResult::pass() const {
  return !reports.empty() &&
         std::all_of(reports.begin(), reports.end(), [](const TestReport& r) { return r.pass; });
}

CriterionResult run_criterion(int id, const ValidationOptions& opt) {
  const auto it = runners().find(id);
  if (it == runners().end()) {
    throw ConfigError("no acceptance criterion " + std::to_string(id) + " (valid: 1.." +
                      std::to_string(kCriterionCount) + ")");
  }
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult res = it->second(opt);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<int> suite_criteria(const std::string& suite) {
  for (const auto& [name, ids] : suites()) {
    if (name == suite) return ids;
  }
  std::string known;
  for (const auto& [name, ids] : suites()) known += (known.empty() ? "" : ", ") + name;
  throw ConfigError("unknown suite '" + suite + "' (known: " + known + ")");
}

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, ids] : suites()) out.push_back(name);
  return out;
}

std::vector<CriterionResult> run_suite(const std::string& suite, const ValidationOptions& opt) {
  std::vector<CriterionResult> out;
  for (int id : suite_criteria(suite)) out.push_back(run_criterion(id, opt));
  return out;
}

std::string results_to_json(const std::string& suite, const std::vector<CriterionResult>& results) {
  nlohmann::json j;
  j["suite"] = suite;
  bool all = true;
  j["criteria"] = nlohmann::json::array();
  for (const auto& c : results) {
    nlohmann::json cj;
    cj["id"] = c.id;
    cj["title"] = c.title;
    cj["pass"] = c.pass();
    cj["seconds"] = c.seconds;
    cj["reports"] = nlohmann::json::array();
    for (const auto& r : c.reports) {
      cj["reports"].push_back({{"test_name", r.test_name},
                               {"statistic", r.statistic},
                               {"threshold", r.threshold},
                               {"pass", r.pass},
                               {"sample_size", r.sample_size},
                               {"note", r.note}});
    }
    all = all && c.pass();
    j["criteria"].push_back(std::move(cj));
  }
  j["pass"] = all;
  return j.dump(2);
}

void write_results(const std::filesystem::path& dir, const std::string& suite,
                   const std::vector<CriterionResult>& results) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const auto path = dir / "reports.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << results_to_json(suite, results) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

PathResult enumerate_shortest_path(const WeightModel& model, int n, Vertex src, Vertex dst) {
  if (n < 2 || n > 11) throw DomainError("enumerate_shortest_path: n must be in [2, 11]");
  if (src < 1 || src > n || dst < 1 || dst > n || src == dst) {
    throw DomainError("enumerate_shortest_path: bad endpoints");
  }
  PathResult best;
  best.weight = std::numeric_limits<double>::infinity();
  std::vector<Vertex> path{src};
  std::vector<char> used(n + 1, 0);
  used[src] = 1;
  enumerate(model, n, dst, path, used, 0.0, best);
  best.hopcount = static_cast<int>(best.vertices.size()) - 1;
  return best;
}

std::uint64_t enumerate_k_edge_paths_below(const WeightModel& model, int n, int k, double z) {
  if (k < 2 || k > 3) throw DomainError("enumerate_k_edge_paths_below: k must be 2 or 3");
  if (n < 3 || n > 64) throw DomainError("enumerate_k_edge_paths_below: n must be in [3, 64]");
  std::uint64_t count = 0;
  for (Vertex a = 2; a < n; ++a) {
    if (k == 2) {
      if (model.edge_weight(1, a) + model.edge_weight(a, n) < z) ++count;
      continue;
    }
    for (Vertex b = 2; b < n; ++b) {
      if (b == a) continue;
      if (model.edge_weight(1, a) + model.edge_weight(a, b) + model.edge_weight(b, n) < z) ++count;
    }
  }
  return count;
}

}  // namespace fpp
