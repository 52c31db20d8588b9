#include "fpp/theory.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "fpp/error.hpp"

namespace fpp {

namespace {

constexpr double kLogTiny = -690.7755278982137;  // log(1e-300)

void require_k(int k, int min_k, const char* what) {
  if (k < min_k) {
    throw DomainError(std::string(what) + ": k must be >= " +
                      std::to_string(min_k) + ", got " + std::to_string(k));
  }
}

double log_factorial(int m) { return std::lgamma(static_cast<double>(m) + 1.0); }

// Memoised log a_k per (s, k). The recursion is cheap; the cache only makes
// repeated lookups from the samplers free.
class LogACache {
 public:
  double get(const Disorder& d, int k) {
    const auto key = std::make_pair(std::bit_cast<std::uint64_t>(d.s()), k);
    {
      std::lock_guard lock(mu_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    const double v = compute(d, k);
    std::lock_guard lock(mu_);
    if (cache_.size() > 4096) cache_.clear();
    cache_.emplace(key, v);
    return v;
  }

 private:
  // Step from the saddle point of the convolution F_m = F_{m-1} * F_1 at
  // x = 1/m: the factor is (m/(m-1))^{(m-2)p/2}. Writing it as
  // ((m-1)/m)^{(m-2)p/2} overstates a_m by (m/(m-1))^{(m-2)p}, which the
  // quadrature tables expose at once for m >= 3.
  static double compute(const Disorder& d, int k) {
    const double p = d.p();
    const double log_step_const =
        std::log(p) + 0.5 * std::log(2.0 * std::numbers::pi) -
        0.5 * std::log(p * (p + 1.0));
    double acc = 0.0;  // log a_1
    for (int m = 2; m <= k; ++m) {
      const double mm = m;
      acc += log_step_const + (mm - 2.0) * p / 2.0 * std::log(mm / (mm - 1.0)) +
             (p - 1.0) / 2.0 * std::log(mm) + 0.5 * std::log(mm - 1.0);
    }
    return acc;
  }

  std::mutex mu_;
  std::map<std::pair<std::uint64_t, int>, double> cache_;
};

LogACache& a_cache() {
  static LogACache cache;
  return cache;
}

}  // namespace

Disorder::Disorder(double s) : s_(s), p_(1.0 / s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("disorder exponent s must be a positive finite number");
  }
}

double log_gs(const Disorder& d, double x) {
  if (!(x >= 2.0)) throw DomainError("g_s(x) is defined for x >= 2");
  return (d.s() + 1.0) * std::log(x) - d.s() * std::log(x - 1.0);
}

double gs(const Disorder& d, double x) { return std::exp(log_gs(d, x)); }

double special_point(int j) {
  if (j < 2) throw DomainError("special_point: j must be >= 2");
  const double jj = j;
  return std::log1p(1.0 / jj) / std::log1p(1.0 / (jj * jj - 1.0));
}

HopMinimizer k_star(const Disorder& d, double tie_tol) {
  if (!(tie_tol > 0.0)) throw DomainError("k_star: tie tolerance must be > 0");
  HopMinimizer out;
  if (d.s() <= 1.0) {
    out.k_star = 2;
    out.g_star = gs(d, 2.0);
    return out;
  }
  const int lo = static_cast<int>(std::floor(d.s() + 1.0));
  const int hi = static_cast<int>(std::ceil(d.s() + 1.0));
  const double g_lo = gs(d, lo);
  const double g_hi = gs(d, hi);
  out.k_star = g_hi < g_lo ? hi : lo;
  out.g_star = std::min(g_lo, g_hi);
  if (lo != hi && std::abs(g_lo - g_hi) / out.g_star <= tie_tol) {
    out.is_special = true;
    out.pair = std::make_pair(lo, hi);
  }
  return out;
}

double log_a_coeff(const Disorder& d, int k) {
  require_k(k, 1, "a_coeff");
  return a_cache().get(d, k);
}

double a_coeff(const Disorder& d, int k) { return std::exp(log_a_coeff(d, k)); }

TailConstants tail_constants(const Disorder& d, int k) {
  require_k(k, 1, "tail_constants");
  TailConstants c;
  c.k = k;
  c.a_k = a_coeff(d, k);
  c.nu = std::exp2(1.0 / (d.p() + 1.0));
  c.factorial_div = std::exp(log_factorial(k - 1));
  return c;
}

double log_fk_tail_asymptotic(const Disorder& d, int k, double z) {
  require_k(k, 1, "fk_tail_asymptotic");
  if (!(z > 0.0)) throw DomainError("fk_tail_asymptotic: z must be > 0");
  const double p = d.p();
  const double kk = k;
  return log_a_coeff(d, k) - (kk - 1.0) * p / 2.0 * std::log(z) -
         std::pow(kk, p + 1.0) * std::pow(z, -p);
}

double fk_tail_asymptotic(const Disorder& d, int k, double z) {
  const double lv = log_fk_tail_asymptotic(d, k, z);
  return lv > kLogTiny ? std::exp(lv) : 0.0;
}

CenteringMap::CenteringMap(const Disorder& d, int k, double log_n)
    : d_(d), k_(k), log_n_(log_n) {
  require_k(k, 2, "CenteringMap");
  if (!(log_n >= std::log(3.0) - 1e-12) || !std::isfinite(log_n)) {
    throw DomainError("centering requires n >= 3");
  }
  const double s = d.s();
  const double p = d.p();
  const double km1 = k - 1;
  g_ = gs(d, k);
  center_ = g_ / std::pow(log_n, s);
  scale_ = km1 * std::pow(log_n, s + 1.0) / (s * g_);
  shift_ = km1 / 2.0 * std::log(log_n) - p * km1 / 2.0 * std::log(g_);
}

double CenteringMap::centering_z(double t) const {
  const double s = d_.s();
  const double p = d_.p();
  const double km1 = k_ - 1;
  const double bracket = -std::log(log_n_) / (2.0 * p) + t / (km1 * p) +
                         std::log(g_) / 2.0;
  return g_ / std::pow(log_n_, s) + g_ / std::pow(log_n_, s + 1.0) * bracket;
}

double CenteringMap::standardize(double weight) const {
  return scale_ * (weight - center_) + shift_;
}

double centering_z(const Disorder& d, int k, long long n, double t) {
  if (n < 3) throw DomainError("centering_z: n must be >= 3");
  return CenteringMap(d, k, std::log(static_cast<double>(n))).centering_z(t);
}

double standardize_weight(const Disorder& d, int k, long long n, double weight) {
  if (n < 3) throw DomainError("standardize_weight: n must be >= 3");
  return CenteringMap(d, k, std::log(static_cast<double>(n))).standardize(weight);
}

double gumbel_rate(const Disorder& d, int k, double t) {
  require_k(k, 2, "gumbel_rate");
  return std::exp(log_a_coeff(d, k) + t - log_factorial(k - 1));
}

double gumbel_sf(const Disorder& d, int k, double t) {
  return std::exp(-gumbel_rate(d, k, t));
}

double independent_min_sf(const Disorder& d, int k, double t) {
  require_k(k, 2, "independent_min_sf");
  return std::exp(-std::exp(log_a_coeff(d, k) + t));
}

double correlated_tail_exponent(const Disorder& d, int k, int j) {
  require_k(k, 2, "correlated_tail_exponent");
  if (j < 1 || j > k) {
    throw DomainError("correlated_tail_exponent: j must lie in [1, k]");
  }
  const double p = d.p();
  const double nu = std::exp2(1.0 / (p + 1.0));
  return std::pow((k - j) * nu + j, p + 1.0);
}

double joint_tail_exponent(const Disorder& d, int len1, int len2, int shared) {
  if (len1 < 1 || len2 < 1 || shared < 1 || shared > std::min(len1, len2)) {
    throw DomainError("joint_tail_exponent: need 1 <= shared <= min(len1, len2)");
  }
  const double p = d.p();
  const double a = len1 - shared;
  const double b = len2 - shared;
  const double private_part =
      std::pow(std::pow(a, p + 1.0) + std::pow(b, p + 1.0), 1.0 / (p + 1.0));
  return std::pow(shared + private_part, p + 1.0);
}

PoissonCondition poisson_condition(const Disorder& d, int k, int j) {
  if (!(d.s() > 1.0)) {
    throw DomainError("poisson_condition: only meaningful for s > 1");
  }
  require_k(k, 3, "poisson_condition");
  if (j < 1 || j > k - 2) {
    throw DomainError("poisson_condition: j must lie in [1, k-2]");
  }
  const double p = d.p();
  const double nu = std::exp2(1.0 / (p + 1.0));
  const double x = static_cast<double>(j) / k;
  const double margin = std::pow((1.0 - x) * nu + x, p + 1.0) -
                        (2.0 - static_cast<double>(j) / (k - 1));
  return {margin > 0.0, margin};
}

double poisson_u(const Disorder& d, int k, double x) {
  require_k(k, 2, "poisson_u");
  const double s = d.s();
  const double base = (1.0 - x) * std::exp2(s / (s + 1.0)) + x;
  return std::pow(base, 1.0 + 1.0 / s) -
         (2.0 - static_cast<double>(k) / (k - 1) * x);
}

double poisson_u_prime0(const Disorder& d, int k) {
  require_k(k, 2, "poisson_u_prime0");
  const double s = d.s();
  const double a = (s + 1.0) / s;
  const double two_inv_a = std::exp2(1.0 / a);
  return -a * std::pow(two_inv_a, a - 1.0) * (two_inv_a - 1.0) +
         static_cast<double>(k) / (k - 1);
}

}  // namespace fpp
