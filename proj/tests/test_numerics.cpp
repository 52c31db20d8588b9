#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fpp/error.hpp"
#include "fpp/numerics.hpp"
#include "fpp/rng.hpp"
#include "fpp/simulate.hpp"
#include "fpp/theory.hpp"

using namespace fpp;

namespace {
bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}
}  // namespace

TEST_CASE("log F_k frozen values") {
  // Independent high-precision evaluations of the convolution integrals.
  struct Row { int k; double s, z, log_f; };
  const Row rows[] = {
      {2, 1.0, 0.5, -6.997053234657596},  {2, 1.0, 0.2, -18.58714508759403},
      {2, 0.5, 0.5, -30.22628954528682},  {2, 2.0, 0.3, -4.500413663327253},
      {3, 1.0, 0.5, -15.52049026784023},
  };
  for (const Row& r : rows) {
    CAPTURE(r.k);
    CAPTURE(r.s);
    CAPTURE(r.z);
    CHECK(rel_close(fk_numeric(Disorder(r.s), r.k, r.z), r.log_f, 1e-9));
  }
  CHECK(fk_numeric(Disorder(1.0), 1, 0.25) == doctest::Approx(-4.0));
}

TEST_CASE("F_k is monotone in z and decreasing in k") {
  for (double s : {0.5, 1.0, 2.5}) {
    const Disorder d(s);
    for (int k = 2; k <= 4; ++k) {
      double prev = -INFINITY;
      for (double z : {0.05, 0.1, 0.3, 0.7, 1.5, 4.0}) {
        const double f = fk_numeric(d, k, z);
        CHECK(f > prev);
        CHECK(f <= 0.0);
        CHECK(fk_numeric(d, k + 1, z) <= f);
        prev = f;
      }
    }
  }
}

TEST_CASE("numeric tail approaches the asymptotic form") {
  const Disorder d(1.0);
  for (int k : {2, 3}) {
    const double gap_far = std::abs(fk_numeric(d, k, 0.02) - log_fk_tail_asymptotic(d, k, 0.02));
    const double gap_near = std::abs(fk_numeric(d, k, 0.2) - log_fk_tail_asymptotic(d, k, 0.2));
    CHECK(gap_far < 0.05);
    CHECK(gap_far < gap_near);
  }
}

TEST_CASE("min_quantile") {
  // k = 1 inverts in closed form: z = (-log T)^{-s}.
  for (double s : {0.5, 1.0, 2.5}) {
    for (double u : {0.1, 0.5, 0.9}) {
      const double log_m = std::log(50.0);
      const double level = 1.0 - std::pow(1.0 - u, 1.0 / 50.0);
      CHECK(rel_close(min_quantile(Disorder(s), 1, log_m, u), std::pow(-std::log(level), -s),
                      1e-12));
    }
  }
  for (double s : {0.5, 1.0, 2.5}) {
    const Disorder d(s);
    for (int k : {2, 3}) {
      for (double log_m : {0.0, 5.0, 40.0}) {
        for (double u : {0.05, 0.5, 0.95}) {
          const double z = min_quantile(d, k, log_m, u);
          CHECK(fk_numeric(d, k, z) == doctest::Approx(min_quantile_log_target(log_m, u)).epsilon(1e-8));
        }
      }
    }
  }
  CHECK_THROWS_AS(min_quantile(Disorder(1.0), 2, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(min_quantile(Disorder(1.0), 2, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(min_quantile(Disorder(1.0), 2, -1.0, 0.5), DomainError);
}

TEST_CASE("sampler matches a direct minimum of i.i.d. Z_k") {
  const Disorder d(1.0);
  constexpr int kReps = 100000;
  constexpr long long kN = 20;
  for (int k : {2, 3}) {
    Stream direct_rng(11, k), sampler_rng(12, k);
    const long long m = k == 2 ? kN : kN * kN;
    std::vector<double> direct(kReps), sampled(kReps);
    for (int r = 0; r < kReps; ++r) {
      double best = INFINITY;
      for (long long i = 0; i < m; ++i) best = std::min(best, sample_Zk(d, k, direct_rng));
      direct[r] = best;
      sampled[r] = sample_min_independent(d, k, kN, sampler_rng);
    }
    CAPTURE(k);
    CHECK(ks_two_sample(direct, sampled) < 0.01);
  }
}

TEST_CASE("sample_Zk agrees with F_k") {
  constexpr int kDraws = 10'000'000;
  for (double s : {0.5, 1.0, 2.5}) {
    const Disorder d(s);
    for (int k : {2, 3}) {
      // z near the median of Z_k.
      const double z = min_quantile(d, k, 0.0, 0.5);
      Stream rng(77, k);
      long long below = 0;
      for (int i = 0; i < kDraws; ++i) below += sample_Zk(d, k, rng) <= z;
      const double f = std::exp(fk_numeric(d, k, z));
      const double se = std::sqrt(f * (1 - f) / kDraws);
      CAPTURE(s);
      CAPTURE(k);
      CHECK(std::abs(double(below) / kDraws - f) < 4 * se);
    }
  }
}

TEST_CASE("joint tail lies between independence and the single-path tail") {
  for (double s : {0.5, 1.0, 2.5}) {
    const Disorder d(s);
    for (double z : {0.3, 0.8}) {
      const double single = fk_numeric(d, 3, z);
      for (int j = 1; j <= 2; ++j) {
        const double joint = joint_tail_numeric(d, 3, j, z, z);
        CHECK(joint <= single + 1e-12);
        CHECK(joint >= 2.0 * single - 1e-12);
      }
      CHECK(joint_tail_numeric(d, 3, 1, z, z) <= joint_tail_numeric(d, 3, 2, z, z));
      // Full overlap is one path.
      CHECK(joint_tail_numeric(d, 3, 3, z, z) == doctest::Approx(single).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(joint_tail_numeric(Disorder(1.0), 3, 0, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(joint_tail_numeric(Disorder(1.0), 3, 1, 0.5, 2.0), DomainError);
}

TEST_CASE("joint tail decays at the correlated exponent") {
  for (double s : {1.0, 2.5}) {
    const Disorder d(s);
    const double p = d.p();
    for (int j = 1; j <= 2; ++j) {
      const double za = std::pow(200.0, -s), zb = std::pow(400.0, -s);
      const double slope = (joint_tail_numeric(d, 3, j, za, za) - joint_tail_numeric(d, 3, j, zb, zb)) /
                           (std::pow(zb, -p) - std::pow(za, -p));
      CAPTURE(s);
      CAPTURE(j);
      CHECK(rel_close(slope, correlated_tail_exponent(d, 3, j), 0.02));
    }
  }
}

TEST_CASE("hop split at special points") {
  const double s2 = special_point(2);
  const HopSplit b = hop_split_probability(s2);
  CHECK(b.p_floor == doctest::Approx(0.5874091662925641).epsilon(1e-9));
  CHECK(b.p_ceil == doctest::Approx(0.4125908337074359).epsilon(1e-9));
  CHECK(b.p_floor + b.p_ceil == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hop_split_probability(special_point(3)).p_floor ==
        doctest::Approx(0.6143268993751491).epsilon(1e-9));
  CHECK(hop_split_probability(s2, PathCount::ordered).p_floor ==
        doctest::Approx(0.4778499561589838).epsilon(1e-9));
  CHECK_THROWS_AS(hop_split_probability(1.5), DomainError);

  // Monte Carlo: Xi_k / (k-1) against Xi_{k+1} / k with their Gumbel laws.
  const Disorder d(s2);
  const double lam2 = a_coeff(d, 2), lam3 = a_coeff(d, 3) / 2.0;
  Stream rng(5, 0);
  constexpr int kDraws = 10'000'000;
  long long floor_wins = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double u = std::log(rng.exponential() / lam2);
    const double v = std::log(rng.exponential() / lam3) / 2.0;
    floor_wins += u < v;
  }
  const double f = double(floor_wins) / kDraws;
  CHECK(std::abs(f - b.p_floor) < 4 * std::sqrt(b.p_floor * b.p_ceil / kDraws));
}

TEST_CASE("quadrature spec validation") {
  CHECK_NOTHROW(QuadratureSpec{}.validate());
  CHECK_THROWS_AS((QuadratureSpec{31, 1e-9}).validate(), DomainError);
  CHECK_THROWS_AS((QuadratureSpec{64, 0.0}).validate(), DomainError);
  CHECK_THROWS_AS((QuadratureSpec{64, 1e-2}).validate(), DomainError);
  CHECK_THROWS_AS(fk_numeric(Disorder(1.0), 2, 0.5, QuadratureSpec{8, 1e-9}), DomainError);
  // Linear substitution agrees with the default.
  const QuadratureSpec lin{64, 1e-9, Transform::linear};
  CHECK(fk_numeric(Disorder(1.0), 2, 0.5, lin) == doctest::Approx(-6.997053234657596).epsilon(1e-7));
  CHECK_THROWS_AS(fk_numeric(Disorder(1.0), 0, 0.5), DomainError);
  CHECK_THROWS_AS(fk_numeric(Disorder(1.0), 2, 0.0), DomainError);
}
