#pragma once

#include <functional>

namespace fpp {

enum class Transform { log_substitution, linear };

struct QuadratureSpec {
  int node_count = 64;       // coarse scan points used to locate the mode
  double tolerance = 1e-9;   // relative error target on the integral
  Transform transform = Transform::log_substitution;

  // Throws DomainError unless node_count >= 32 and tolerance in (0, 1e-3].
  void validate() const;

  friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

// Log of an integrand on (0, 1). Receives both x and 1 - x so that callers
// can keep full precision near either endpoint. May return -infinity.
using UnitLogIntegrand = std::function<double(double x, double one_minus_x)>;

// Returns log of the integral of exp(log_f) over (0, 1).
//
// The integrand is assumed to be unimodal in log space (true for every
// convolution used here). Its mode is located by a scan plus golden-section
// refinement, panels are laid out geometrically around it, and each panel is
// integrated with adaptive Gauss-Kronrod 7/15 on values rescaled by the
// modal height, so tails far below double range stay finite.
//
// With Transform::log_substitution the variable is x = 1 / (1 + e^{-t}),
// which resolves features at scale 1e-18 near either endpoint.
//
// Throws QuadratureError when the subdivision budget is exhausted before the
// requested tolerance is met.
double integrate_log_unit(const UnitLogIntegrand& log_f, const QuadratureSpec& q);

}  // namespace fpp
