#pragma once

// Closed-form quantities for first-passage percolation on K_n with i.i.d.
// edge weights E^{-s}, E ~ Exp(1). Everything here is deterministic.

#include <optional>
#include <utility>

namespace fpp {

// Disorder exponent s > 0 together with its reciprocal p = 1/s.
class Disorder {
 public:
  explicit Disorder(double s);

  double s() const noexcept { return s_; }
  double p() const noexcept { return p_; }

  friend bool operator==(const Disorder&, const Disorder&) = default;

 private:
  double s_;
  double p_;
};

inline constexpr double kDefaultTieTolerance = 1e-9;

struct HopMinimizer {
  int k_star = 2;
  double g_star = 0.0;
  bool is_special = false;
  // Competing (k, k+1) pair, present iff is_special.
  std::optional<std::pair<int, int>> pair;
};

struct TailConstants {
  int k = 1;
  double a_k = 1.0;
  double nu = 1.0;             // 2^{1/(p+1)}
  double factorial_div = 1.0;  // (k-1)!
};

// g_s(x) = x^{s+1} / (x-1)^s for x >= 2, evaluated in log space.
double gs(const Disorder& d, double x);
double log_gs(const Disorder& d, double x);

// s_j = log(1 + 1/j) / log(1 + 1/(j^2 - 1)), the points where g_s(j) = g_s(j+1).
double special_point(int j);

HopMinimizer k_star(const Disorder& d, double tie_tol = kDefaultTieTolerance);

// a_k with a_1 = 1 and
//   a_k = a_{k-1} p sqrt(2 pi) / sqrt(p(p+1)) (k/(k-1))^{(k-2)p/2} k^{(p-1)/2} (k-1)^{1/2},
// the constant of the small-z law of F_k below.
double a_coeff(const Disorder& d, int k);
double log_a_coeff(const Disorder& d, int k);

TailConstants tail_constants(const Disorder& d, int k);

// Small-z asymptotics of F_k(z) = P(E_1^{-s} + ... + E_k^{-s} <= z):
// a_k z^{-(k-1)p/2} exp(-k^{p+1} z^{-p}).
double log_fk_tail_asymptotic(const Disorder& d, int k, double z);
// Linear value; returns 0 once the tail drops below 1e-300.
double fk_tail_asymptotic(const Disorder& d, int k, double z);

// Affine map between a path weight W and its standardized value t for
// k-edge paths on K_n. Built from log n so that astronomically large n
// (used by the independent-minimum sampler) stays representable.
class CenteringMap {
 public:
  CenteringMap(const Disorder& d, int k, double log_n);

  int k() const noexcept { return k_; }
  double log_n() const noexcept { return log_n_; }
  double scale() const noexcept { return scale_; }
  double shift() const noexcept { return shift_; }
  double center() const noexcept { return center_; }

  // z_n(t) in its expanded form.
  double centering_z(double t) const;
  double standardize(double weight) const;

 private:
  Disorder d_;
  int k_;
  double log_n_;
  double g_;
  double scale_;
  double shift_;
  double center_;
};

double centering_z(const Disorder& d, int k, long long n, double t);
double standardize_weight(const Disorder& d, int k, long long n, double weight);

// lambda_k(t) = a_k e^t / (k-1)!
double gumbel_rate(const Disorder& d, int k, double t);
// exp(-lambda_k(t)): limiting P(standardized W_n > t) on K_n.
double gumbel_sf(const Disorder& d, int k, double t);
// exp(-a_k e^t): limiting survival for the minimum of n^{k-1} independent
// copies of Z_k (no path-count factorial).
double independent_min_sf(const Disorder& d, int k, double t);

// [(k-j) nu + j]^{p+1}: exponential rate of P(X_{k,k} < z, X_{k,j} < z) in
// z^{-p}, for two k-edge paths sharing j edges. j == k gives k^{p+1}.
double correlated_tail_exponent(const Disorder& d, int k, int j);

// Rate of P(A < z, B < z) for a path A of len1 edges and a path B of len2
// edges sharing `shared` edges, from minimising the summed saddle costs:
// (shared + (a^{p+1} + b^{p+1})^{1/(p+1)})^{p+1}, a = len1 - shared,
// b = len2 - shared. Reduces to correlated_tail_exponent when len1 == len2.
double joint_tail_exponent(const Disorder& d, int len1, int len2, int shared);

struct PoissonCondition {
  bool holds = false;
  double margin = 0.0;
};

// ((1 - j/k) nu + j/k)^{p+1} - (2 - j/(k-1)) > 0, for s > 1, k >= 3,
// 1 <= j <= k-2.
PoissonCondition poisson_condition(const Disorder& d, int k, int j);
// u_k(x) = [(1-x) 2^{s/(s+1)} + x]^{1+1/s} - (2 - k x/(k-1)); u_k(j/k) is the
// margin above.
double poisson_u(const Disorder& d, int k, double x);
double poisson_u_prime0(const Disorder& d, int k);

}  // namespace fpp
