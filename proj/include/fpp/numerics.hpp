#pragma once

// Numerical oracles for the distribution functions behind the limit laws.
// All probabilities are carried as natural logarithms.

#include <memory>
#include <utility>
#include <vector>

#include "fpp/quadrature.hpp"
#include "fpp/theory.hpp"

namespace fpp {

// log F_j(w) for j = 1..k_max, F_j the law of E_1^{-s} + ... + E_j^{-s}.
//
// Level j is obtained from level j-1 by the convolution
//   F_j(w) = int_0^1 F_{j-1}(w (1-x)) f_1(w x) w dx,
// evaluated at every node of a uniform grid in log w and stored as the smooth
// residual r_j = log F_j(w) + j^{p+1} w^{-p}, interpolated by a natural cubic
// spline. Outside the grid the small-z asymptotics (deep tail) or
// 1 - F_j ~ j w^{-p} (bulk) take over.
class FkTable {
 public:
  FkTable(const Disorder& d, int k_max, const QuadratureSpec& q);

  const Disorder& disorder() const noexcept { return d_; }
  int k_max() const noexcept { return k_max_; }

  double log_cdf(int j, double w) const;
  // log of the density f_j(w).
  double log_pdf(int j, double w) const;

  // Range of w covered by the grid.
  double w_min() const noexcept;
  double w_max() const noexcept;

 private:
  struct Level {
    std::vector<double> r;    // residual at grid nodes
    std::vector<double> m;    // spline second derivatives
  };

  double residual(int j, double u, double* dr_du) const;

  Disorder d_;
  int k_max_;
  double u_lo_;
  double du_;
  int nodes_;
  std::vector<Level> levels_;  // levels_[j-2] holds F_j, j >= 2
};

// Shared, lazily built table keyed by (s, k_max, quadrature spec). Safe for
// concurrent use; concurrent first requests may build the same table twice.
std::shared_ptr<const FkTable> fk_table(const Disorder& d, int k_max,
                                        const QuadratureSpec& q = {});

// log F_k(z) by one adaptive convolution pass over the cached F_{k-1} table.
double fk_numeric(const Disorder& d, int k, double z, const QuadratureSpec& q = {});

// z solving F_k(z) = 1 - (1-u)^{1/m}, the u-quantile of the minimum of m
// i.i.d. copies of Z_k. m is passed as log m.
double min_quantile(const Disorder& d, int k, double log_m, double u,
                    const QuadratureSpec& q = {});

// log of the target F_k level 1 - (1-u)^{1/m}, computed without cancellation.
double min_quantile_log_target(double log_m, double u);

// log P(A < z1, B < z2) where A is a sum of `len1` and B a sum of `len2`
// independent E^{-s} terms and exactly `shared` terms are common to both:
//   int F_{len1-shared}(z1 - y) F_{len2-shared}(z2 - y) dF_shared(y).
struct JointShape {
  int len1;
  int len2;
  int shared;
};
double joint_tail_numeric(const Disorder& d, JointShape shape, double z1,
                          double z2, const QuadratureSpec& q = {});
// Equal-length form: two k-edge paths overlapping in j edges.
double joint_tail_numeric(const Disorder& d, int k, int j, double z1, double z2,
                          const QuadratureSpec& q = {});

struct HopSplit {
  double p_floor;  // P(Xi_k / (k-1) < Xi_{k+1} / k)
  double p_ceil;
};

// How many k-edge paths join two fixed vertices of K_n. The limit law
// exp(-a_k e^t/(k-1)!) counts them as C(n-2, k-1); a path visits its k-1
// intermediate vertices in order, so there are really (n-2)!/(n-k-1)! of
// them and the rate loses the (k-1)!.
enum class PathCount { binomial, ordered };

// Limiting hopcount split at a special point s in S, with
// Xi_l having survival exp(-a_l e^t / (l-1)!) under PathCount::binomial and
// exp(-a_l e^t) under PathCount::ordered. Throws DomainError when k_star(s)
// does not flag s as special.
HopSplit hop_split_probability(double s_special, PathCount counting = PathCount::binomial);

}  // namespace fpp
