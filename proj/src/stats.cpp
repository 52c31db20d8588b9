#include "fpp/stats.hpp"

#include <algorithm>
#include <cmath>

#include "fpp/error.hpp"

namespace fpp {

namespace {

constexpr std::size_t kMinKsSamples = 100;
constexpr std::size_t kMinCounts = 200;
constexpr std::size_t kMinPairs = 100;
constexpr double kPoissonCut = 1e-9;

// Neumaier compensated sum.
double compensated_sum(const std::vector<double>& xs) {
  double sum = 0.0, c = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + c;
}

}  // namespace

TestReport make_report(std::string name, double statistic, double threshold,
                       long long sample_size, std::string note) {
  TestReport r;
  r.test_name = std::move(name);
  r.statistic = statistic;
  r.threshold = threshold;
  r.pass = statistic <= threshold;
  r.sample_size = sample_size;
  r.note = std::move(note);
  return r;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.size() < kMinKsSamples) {
    throw InsufficientSamplesError("ks_statistic: need at least 100 samples");
  }
  for (double x : samples) {
    if (std::isnan(x)) throw DomainError("ks_statistic: NaN sample");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size();) {
    // Step over ties so the ECDF jump is taken once.
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double f = cdf(samples[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n),
                  std::abs(static_cast<double>(j) / n - f)});
    i = j;
  }
  return d;
}

TestReport ks_against_gumbel(const std::vector<double>& samples, const Disorder& d, int k,
                             double threshold, std::string name) {
  const double ks = ks_statistic(samples, [&](double t) { return 1.0 - gumbel_sf(d, k, t); });
  return make_report(std::move(name), ks, threshold, static_cast<long long>(samples.size()));
}

TestReport ks_against_independent_min(const std::vector<double>& samples, const Disorder& d,
                                      int k, double threshold, std::string name) {
  const double ks =
      ks_statistic(samples, [&](double t) { return 1.0 - independent_min_sf(d, k, t); });
  return make_report(std::move(name), ks, threshold, static_cast<long long>(samples.size()));
}

double poisson_tv(const std::vector<std::uint64_t>& counts, double mean) {
  if (counts.size() < kMinCounts) {
    throw InsufficientSamplesError("poisson_count_test: need at least 200 counts");
  }
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw DomainError("poisson_count_test: mean must be positive");
  }

  // Support {0..K}: extend past the mode until the pmf drops below the cut.
  std::vector<double> pmf;
  double log_p = -mean;
  for (int k = 0;; ++k) {
    if (k > 0) log_p += std::log(mean) - std::log(static_cast<double>(k));
    const double p = std::exp(log_p);
    if (p < kPoissonCut && k > mean) break;
    pmf.push_back(p);
  }
  const std::size_t K = pmf.size();  // index K is the lumped tail
  const double head = compensated_sum(pmf);
  pmf.push_back(std::max(0.0, 1.0 - head));

  std::vector<double> emp(K + 1, 0.0);
  const double inv = 1.0 / static_cast<double>(counts.size());
  for (std::uint64_t c : counts) emp[std::min<std::uint64_t>(c, K)] += inv;

  std::vector<double> diffs(K + 1);
  for (std::size_t i = 0; i <= K; ++i) diffs[i] = std::abs(emp[i] - pmf[i]);
  return std::clamp(0.5 * compensated_sum(diffs), 0.0, 1.0);
}

TestReport poisson_count_test(const std::vector<std::uint64_t>& counts, double mean,
                              double threshold, std::string name) {
  return make_report(std::move(name), poisson_tv(counts, mean), threshold,
                     static_cast<long long>(counts.size()));
}

std::map<int, double> hop_histogram(const std::vector<int>& hopcounts) {
  if (hopcounts.empty()) throw DomainError("hop_histogram: empty input");
  std::map<int, long long> tally;
  for (int h : hopcounts) ++tally[h];
  std::map<int, double> freq;
  const auto total = static_cast<long long>(hopcounts.size());
  // Hand the rounding residue to the largest bin so the sum is exactly 1.
  long long placed = 0;
  double acc = 0.0;
  auto largest = tally.begin();
  for (auto it = tally.begin(); it != tally.end(); ++it) {
    if (it->second > largest->second) largest = it;
  }
  for (const auto& [h, c] : tally) {
    if (h == largest->first) continue;
    freq[h] = static_cast<double>(c) / static_cast<double>(total);
    acc += freq[h];
    placed += c;
  }
  freq[largest->first] = placed == 0 ? 1.0 : 1.0 - acc;
  return freq;
}

std::map<int, double> hop_histogram(const std::vector<ExperimentRecord>& records) {
  std::vector<int> h;
  h.reserve(records.size());
  for (const auto& r : records) h.push_back(r.hopcount);
  return hop_histogram(h);
}

double pairwise_correlation(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < kMinPairs) {
    throw InsufficientSamplesError("pairwise_correlation: need at least 100 pairs");
  }
  const double n = static_cast<double>(pairs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pairs) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pairs) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw ZeroVarianceError("pairwise_correlation: a coordinate has zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace fpp
