#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fpp/error.hpp"
#include "fpp/rng.hpp"
#include "fpp/stats.hpp"

using namespace fpp;

TEST_CASE("make_report verdict") {
  CHECK(make_report("x", 0.1, 0.1, 10).pass);
  CHECK_FALSE(make_report("x", 0.11, 0.1, 10).pass);
  CHECK_FALSE(make_report("x", std::nan(""), 0.1, 10).pass);
}

TEST_CASE("KS against the Gumbel law") {
  const Disorder d(1.0);
  // Inverse transform: P(T > t) = exp(-lambda e^t) gives T = log(E / lambda).
  const double lambda = gumbel_rate(d, 2, 0.0);
  Stream rng(3, 0);
  std::vector<double> t(100000);
  for (double& x : t) x = std::log(rng.exponential() / lambda);
  const TestReport r = ks_against_gumbel(t, d, 2, 0.006);
  CHECK(r.pass);
  CHECK(r.sample_size == 100000);
  // Shifted samples are rejected.
  for (double& x : t) x += 0.5;
  CHECK_FALSE(ks_against_gumbel(t, d, 2, 0.006).pass);

  const std::vector<double> constant(200, 0.0);
  CHECK(ks_statistic(constant, [](double x) { return x < 0.5 ? 0.0 : 1.0; }) >= 0.5 - 1e-12);
  CHECK_THROWS_AS(ks_statistic(std::vector<double>(99, 0.0), [](double) { return 0.5; }),
                  InsufficientSamplesError);
  std::vector<double> with_nan(200, 0.0);
  with_nan[5] = std::nan("");
  CHECK_THROWS_AS(ks_statistic(with_nan, [](double) { return 0.5; }), DomainError);
}

TEST_CASE("KS is invariant under sample order") {
  Stream rng(8, 1);
  std::vector<double> x(1000);
  for (double& v : x) v = rng.uniform();
  const auto cdf = [](double v) { return std::clamp(v, 0.0, 1.0); };
  const double a = ks_statistic(x, cdf);
  std::reverse(x.begin(), x.end());
  CHECK(ks_statistic(x, cdf) == a);
}

TEST_CASE("independent-minimum law differs from the graph law") {
  const Disorder d(1.0);
  const double lambda = std::exp(log_a_coeff(d, 3));
  Stream rng(4, 0);
  std::vector<double> t(20000);
  for (double& x : t) x = std::log(rng.exponential() / lambda);
  CHECK(ks_against_independent_min(t, d, 3, 0.015).pass);
  CHECK_FALSE(ks_against_gumbel(t, d, 3, 0.015).pass);
}

TEST_CASE("Poisson total variation") {
  // Knuth's multiplication method.
  Stream rng(6, 0);
  const double mean = 2.9;
  std::vector<std::uint64_t> counts(20000);
  for (auto& c : counts) {
    const double limit = std::exp(-mean);
    double prod = rng.uniform_open();
    std::uint64_t k = 0;
    while (prod > limit) {
      prod *= rng.uniform_open();
      ++k;
    }
    c = k;
  }
  CHECK(poisson_tv(counts, mean) < 0.02);
  CHECK(poisson_tv(counts, 6.0) > 0.2);
  CHECK(poisson_count_test(counts, mean, 0.02).pass);

  const std::vector<std::uint64_t> zeros(500, 0);
  CHECK(poisson_tv(zeros, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(poisson_tv(std::vector<std::uint64_t>(199, 1), 1.0), InsufficientSamplesError);
  CHECK_THROWS_AS(poisson_tv(zeros, 0.0), DomainError);
}

TEST_CASE("hop histogram") {
  const std::vector<int> hops = {2, 2, 3, 1, 2, 3, 4};
  const auto h = hop_histogram(hops);
  double total = 0.0;
  for (const auto& [k, f] : h) total += f;
  CHECK(total == 1.0);
  CHECK(h.at(2) == doctest::Approx(3.0 / 7.0));
  CHECK(h.size() == 4);
  std::vector<ExperimentRecord> recs(3);
  recs[0].hopcount = 5;
  recs[1].hopcount = 5;
  recs[2].hopcount = 1;
  CHECK(hop_histogram(recs).at(5) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(hop_histogram(std::vector<int>{}), DomainError);
}

TEST_CASE("pairwise correlation") {
  std::vector<std::pair<double, double>> pos, neg, ind;
  Stream rng(10, 0);
  for (int i = 0; i < 5000; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    pos.emplace_back(x, 3 * x + 1);
    neg.emplace_back(x, -x);
    ind.emplace_back(x, y);
  }
  CHECK(pairwise_correlation(pos) == doctest::Approx(1.0));
  CHECK(pairwise_correlation(neg) == doctest::Approx(-1.0));
  CHECK(std::abs(pairwise_correlation(ind)) < 0.05);
  CHECK_THROWS_AS(pairwise_correlation({pos.begin(), pos.begin() + 99}), InsufficientSamplesError);
  std::vector<std::pair<double, double>> flat(200, {1.0, 2.0});
  CHECK_THROWS_AS(pairwise_correlation(flat), ZeroVarianceError);
}
