#include "fpp/numerics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "fpp/error.hpp"

namespace fpp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Grid in v = log(w^{-p}); X = w^{-p} spans [1e-4, 5e3] for every s, so the
// residual is equally well resolved whatever the disorder.
constexpr double kVLo = -9.210340371976182;  // log 1e-4
constexpr double kVHi = 8.517193191416238;   // log 5e3
constexpr double kDv = 0.02;

// Natural cubic spline second derivatives on a uniform grid.
std::vector<double> spline_moments(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  std::vector<double> c(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    rhs[i] = 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
  }
  // Thomas algorithm for the (1, 4, 1) system on interior nodes.
  std::vector<double> cp(n, 0.0), dp(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double denom = 4.0 - (i > 1 ? cp[i - 1] : 0.0);
    cp[i] = 1.0 / denom;
    dp[i] = (rhs[i] - (i > 1 ? dp[i - 1] : 0.0)) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m[i] = dp[i] - cp[i] * m[i + 1];
  }
  return m;
}

double log1p_density_term(double p, double v_shift) {
  // log f_1(y) + log y with v_shift = log(y^{-p}); f_1(y) = p y^{-p-1} e^{-y^{-p}}.
  return std::log(p) + v_shift - std::exp(v_shift);
}

}  // namespace

FkTable::FkTable(const Disorder& d, int k_max, const QuadratureSpec& q)
    : d_(d), k_max_(k_max), u_lo_(kVLo), du_(kDv) {
  if (k_max < 1) throw DomainError("FkTable: k_max must be >= 1");
  q.validate();
  nodes_ = static_cast<int>(std::ceil((kVHi - kVLo) / kDv)) + 1;
  const double p = d_.p();

  for (int j = 2; j <= k_max_; ++j) {
    Level level;
    level.r.resize(nodes_);
    const double jp = std::pow(static_cast<double>(j), p + 1.0);
    for (int i = 0; i < nodes_; ++i) {
      const double v = u_lo_ + du_ * i;
      // F_j(w) = int_0^1 F_{j-1}(w xc) f_1(w x) w dx, with w^{-p} = e^v.
      const auto integrand = [&](double x, double xc) {
        const double v_inner = v - p * std::log(xc);
        const double v_edge = v - p * std::log(x);
        const double inner = j == 2 ? -std::exp(v_inner)
                                    : residual(j - 1, v_inner, nullptr) -
                                          std::pow(j - 1.0, p + 1.0) * std::exp(v_inner);
        return inner + log1p_density_term(p, v_edge) - std::log(x);
      };
      const double log_f = integrate_log_unit(integrand, q);
      level.r[i] = log_f + jp * std::exp(v);
    }
    level.m = spline_moments(level.r, du_);
    levels_.push_back(std::move(level));
  }
}

double FkTable::w_min() const noexcept { return std::exp(-d_.s() * kVHi); }
double FkTable::w_max() const noexcept { return std::exp(-d_.s() * kVLo); }

double FkTable::residual(int j, double v, double* dr_dv) const {
  const Level& lv = levels_[j - 2];
  const double v_hi = u_lo_ + du_ * (nodes_ - 1);
  if (v >= v_hi) {
    // Deep tail: r_j -> log a_j + (j-1) v / 2.
    const double slope = (j - 1) / 2.0;
    if (dr_dv) *dr_dv = slope;
    return lv.r.back() + slope * (v - v_hi);
  }
  if (v <= u_lo_) {
    // Bulk: r_j ~ (j^{p+1} - j) e^v.
    const double r = lv.r.front() * std::exp(v - u_lo_);
    if (dr_dv) *dr_dv = r;
    return r;
  }
  const double pos = (v - u_lo_) / du_;
  int i = static_cast<int>(pos);
  if (i >= nodes_ - 1) i = nodes_ - 2;
  const double t = pos - i;
  const double a = 1.0 - t;
  const double h = du_;
  const double y0 = lv.r[i], y1 = lv.r[i + 1];
  const double m0 = lv.m[i], m1 = lv.m[i + 1];
  if (dr_dv) {
    *dr_dv = (y1 - y0) / h + h * ((3.0 * t * t - 1.0) * m1 - (3.0 * a * a - 1.0) * m0) / 6.0;
  }
  return a * y0 + t * y1 + h * h / 6.0 * ((a * a * a - a) * m0 + (t * t * t - t) * m1);
}

double FkTable::log_cdf(int j, double w) const {
  if (j < 1 || j > k_max_) throw DomainError("FkTable: level out of range");
  if (!(w > 0.0)) return kNegInf;
  const double p = d_.p();
  const double v = -p * std::log(w);
  if (j == 1) return -std::exp(v);
  return residual(j, v, nullptr) - std::pow(static_cast<double>(j), p + 1.0) * std::exp(v);
}

double FkTable::log_pdf(int j, double w) const {
  if (j < 1 || j > k_max_) throw DomainError("FkTable: level out of range");
  if (!(w > 0.0)) return kNegInf;
  const double p = d_.p();
  const double v = -p * std::log(w);
  if (j == 1) return std::log(p) - (p + 1.0) * std::log(w) - std::exp(v);
  double dr = 0.0;
  const double jp = std::pow(static_cast<double>(j), p + 1.0);
  const double log_f = residual(j, v, &dr) - jp * std::exp(v);
  // d log F / dw = (p / w) (j^{p+1} e^v - r'(v)).
  const double rate = jp * std::exp(v) - dr;
  if (!(rate > 0.0)) return kNegInf;
  return log_f + std::log(p) - std::log(w) + std::log(rate);
}

std::shared_ptr<const FkTable> fk_table(const Disorder& d, int k_max,
                                        const QuadratureSpec& q) {
  using Key = std::tuple<std::uint64_t, int, std::uint64_t, int>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const FkTable>> cache;
  const Key key{std::bit_cast<std::uint64_t>(d.s()), q.node_count,
                std::bit_cast<std::uint64_t>(q.tolerance), static_cast<int>(q.transform)};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end() && it->second->k_max() >= k_max) {
      return it->second;
    }
  }
  auto table = std::make_shared<const FkTable>(d, std::max(k_max, 2), q);
  std::lock_guard lock(mu);
  auto& slot = cache[key];
  if (!slot || slot->k_max() < table->k_max()) slot = table;
  return slot;
}

double fk_numeric(const Disorder& d, int k, double z, const QuadratureSpec& q) {
  if (k < 1) throw DomainError("fk_numeric: k must be >= 1");
  if (!(z > 0.0)) throw DomainError("fk_numeric: z must be > 0");
  q.validate();
  const double p = d.p();
  const double v = -p * std::log(z);
  if (k == 1) return -std::exp(v);
  const auto table = fk_table(d, k - 1, q);
  const auto integrand = [&](double x, double xc) {
    const double inner = table->log_cdf(k - 1, z * xc);
    const double v_edge = v - p * std::log(x);
    return inner + log1p_density_term(p, v_edge) - std::log(x);
  };
  return integrate_log_unit(integrand, q);
}

double min_quantile_log_target(double log_m, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("min_quantile: u must lie in (0, 1)");
  if (!(log_m >= 0.0) || !std::isfinite(log_m)) {
    throw DomainError("min_quantile: m must be >= 1");
  }
  // 1 - (1-u)^{1/m} = -expm1(-x), x = -log(1-u) / m.
  const double log_x = std::log(-std::log1p(-u)) - log_m;
  const double x = std::exp(log_x);
  if (log_x < -20.0) return log_x - x / 2.0;
  return std::log(-std::expm1(-x));
}

double min_quantile(const Disorder& d, int k, double log_m, double u,
                    const QuadratureSpec& q) {
  if (k < 1) throw DomainError("min_quantile: k must be >= 1");
  const double target = min_quantile_log_target(log_m, u);
  const double s = d.s();
  const double p = d.p();
  if (k == 1) {
    // F_1(z) = exp(-z^{-p}) inverts exactly.
    return std::pow(-target, -s);
  }
  const auto table = fk_table(d, k, q);
  const double kk = k;
  const double kp = std::pow(kk, p + 1.0);
  const double log_a = log_a_coeff(d, k);

  // Seed from the tail asymptotics in v = log z^{-p}:
  // log a_k + (k-1) v / 2 - k^{p+1} e^v = target.
  double v = std::log(std::max((log_a - target) / kp, 1e-8));
  for (int it = 0; it < 50; ++it) {
    const double f = log_a + (kk - 1.0) * v / 2.0 - kp * std::exp(v) - target;
    const double df = (kk - 1.0) / 2.0 - kp * std::exp(v);
    const double step = f / df;
    v -= std::clamp(step, -2.0, 2.0);
    if (std::abs(step) < 1e-12) break;
  }
  if (!std::isfinite(v)) throw InversionError("min_quantile: seed diverged");

  // phi is decreasing in v.
  const auto phi = [&](double vv) { return table->log_cdf(k, std::exp(-s * vv)) - target; };
  double lo = v - 0.5, hi = v + 0.5;
  double f_lo = phi(lo), f_hi = phi(hi);
  for (int it = 0; it < 60 && !(f_lo >= 0.0 && f_hi <= 0.0); ++it) {
    if (f_lo < 0.0) {
      lo -= (hi - lo);
      f_lo = phi(lo);
    }
    if (f_hi > 0.0) {
      hi += (hi - lo);
      f_hi = phi(hi);
    }
  }
  if (!(f_lo >= 0.0 && f_hi <= 0.0)) {
    throw InversionError("min_quantile: could not bracket the target level");
  }
  if (f_lo == 0.0) return std::exp(-s * lo);
  if (f_hi == 0.0) return std::exp(-s * hi);
  boost::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      phi, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
  if (max_iter >= 200) throw InversionError("min_quantile: root refinement did not converge");
  return std::exp(-s * 0.5 * (a + b));
}

double joint_tail_numeric(const Disorder& d, JointShape shape, double z1, double z2,
                          const QuadratureSpec& q) {
  const int a = shape.len1 - shape.shared;
  const int b = shape.len2 - shape.shared;
  if (shape.shared < 1 || a < 0 || b < 0) {
    throw DomainError("joint_tail_numeric: need 1 <= shared <= min(len1, len2)");
  }
  if (!(z1 > 0.0 && z2 > 0.0)) throw DomainError("joint_tail_numeric: z must be > 0");
  const double ratio = z2 / z1;
  if (ratio < 0.5 || ratio > 2.0) {
    throw DomainError("joint_tail_numeric: z2/z1 must lie in [0.5, 2]");
  }
  q.validate();
  const auto table = fk_table(d, std::max({a, b, shape.shared, 2}), q);
  const double z = std::min(z1, z2);
  const auto private_part = [&](int len, double zi, double x, double xc) {
    if (len == 0) return 0.0;
    const double w = zi == z ? z * xc : zi - z * x;
    return table->log_cdf(len, w);
  };
  const auto integrand = [&](double x, double xc) {
    const double y = z * x;
    return private_part(a, z1, x, xc) + private_part(b, z2, x, xc) +
           table->log_pdf(shape.shared, y) + std::log(z);
  };
  return integrate_log_unit(integrand, q);
}

double joint_tail_numeric(const Disorder& d, int k, int j, double z1, double z2,
                          const QuadratureSpec& q) {
  if (j < 1 || j > k) throw DomainError("joint_tail_numeric: j must lie in [1, k]");
  return joint_tail_numeric(d, JointShape{k, k, j}, z1, z2, q);
}

HopSplit hop_split_probability(double s_special, PathCount counting) {
  const Disorder d(s_special);
  const HopMinimizer hm = k_star(d);
  if (!hm.is_special) {
    throw DomainError("hop_split_probability: s is not a special point");
  }
  const int k = hm.pair->first;
  const bool binomial = counting == PathCount::binomial;
  const double lam_k = a_coeff(d, k) / (binomial ? std::tgamma(k) : 1.0);
  const double lam_k1 = a_coeff(d, k + 1) / (binomial ? std::tgamma(k + 1) : 1.0);
  const double ek = k - 1;
  const double ek1 = k;
  // U = Xi_k/(k-1): P(U > u) = exp(-lam_k e^{(k-1)u}); V = Xi_{k+1}/k likewise.
  const auto log_sf_u = [&](double u) { return -lam_k * std::exp(ek * u); };
  const auto log_sf_v = [&](double u) { return -lam_k1 * std::exp(ek1 * u); };
  const auto floor_integrand = [&](double u) {
    return lam_k * ek * std::exp(ek * u + log_sf_u(u) + log_sf_v(u));
  };
  const auto ceil_integrand = [&](double u) {
    return lam_k1 * ek1 * std::exp(ek1 * u + log_sf_u(u) + log_sf_v(u));
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  const double lo = -80.0, hi = 12.0;
  HopSplit out{};
  out.p_floor = GK::integrate(floor_integrand, lo, hi, 25, 1e-14, &err);
  out.p_ceil = GK::integrate(ceil_integrand, lo, hi, 25, 1e-14, &err);
  if (std::abs(out.p_floor + out.p_ceil - 1.0) > 1e-10) {
    throw QuadratureError("hop_split_probability: components do not sum to 1");
  }
  return out;
}

}  // namespace fpp
