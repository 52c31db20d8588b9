#include "fpp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "fpp/error.hpp"

namespace fpp {

void QuadratureSpec::validate() const {
  if (node_count < 32) throw DomainError("quadrature node_count must be >= 32");
  if (!(tolerance > 0.0 && tolerance <= 1e-3)) {
    throw DomainError("quadrature tolerance must lie in (0, 1e-3]");
  }
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogisticSpan = 45.0;
constexpr int kMaxSubdivisions = 6000;

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

class LogIntegrand {
 public:
  LogIntegrand(const UnitLogIntegrand& f, Transform tr) : f_(f), tr_(tr) {}

  double lo() const { return tr_ == Transform::linear ? 0.0 : -kLogisticSpan; }
  double hi() const { return tr_ == Transform::linear ? 1.0 : kLogisticSpan; }

  // Log integrand in the transformed variable, Jacobian included.
  double operator()(double t) const {
    double x, xc, log_jac;
    if (tr_ == Transform::linear) {
      x = t;
      xc = 1.0 - t;
      log_jac = 0.0;
      if (x <= 0.0 || xc <= 0.0) return kNegInf;
    } else {
      const double lx = -std::log1p(std::exp(-t));
      const double lxc = -std::log1p(std::exp(t));
      x = std::exp(lx);
      xc = std::exp(lxc);
      log_jac = lx + lxc;
    }
    const double v = f_(x, xc);
    if (std::isnan(v)) throw QuadratureError("integrand evaluated to NaN");
    return v + log_jac;
  }

 private:
  const UnitLogIntegrand& f_;
  Transform tr_;
};

struct Panel {
  double a, b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const LogIntegrand& g, double a, double b, double shift) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const auto ev = [&](double t) {
    const double v = g(t);
    return v == kNegInf ? 0.0 : std::exp(v - shift);
  };
  const double fc = ev(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double f1 = ev(c - dx);
    const double f2 = ev(c + dx);
    kron += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
  }
  return {a, b, kron * h, std::abs(kron - gauss) * h};
}

}  // namespace

double integrate_log_unit(const UnitLogIntegrand& log_f, const QuadratureSpec& q) {
  q.validate();
  const LogIntegrand g(log_f, q.transform);
  const double lo = g.lo();
  const double hi = g.hi();

  // Coarse scan.
  const int n_scan = q.node_count;
  const double spacing = (hi - lo) / n_scan;
  std::vector<double> ts(n_scan + 1);
  std::vector<double> gs(n_scan + 1);
  int best = -1;
  for (int i = 0; i <= n_scan; ++i) {
    ts[i] = lo + spacing * i;
    gs[i] = g(ts[i]);
    if (gs[i] > kNegInf && (best < 0 || gs[i] > gs[best])) best = i;
  }
  if (best < 0) {
    // No scan point hit the support; probe the midpoints before giving up.
    for (int i = 0; i < n_scan; ++i) {
      const double tm = 0.5 * (ts[i] + ts[i + 1]);
      if (g(tm) > kNegInf) {
        best = i;
        break;
      }
    }
    if (best < 0) return kNegInf;
  }

  // Golden-section refinement of the mode.
  const double ra = ts[std::max(best - 1, 0)];
  const double rb = ts[std::min(best + 1, n_scan)];
  auto neg = [&](double t) {
    const double v = g(t);
    return v == kNegInf ? std::numeric_limits<double>::max() : -v;
  };
  const auto [t_mode, neg_mode] = boost::math::tools::brent_find_minima(neg, ra, rb, 50);
  double peak = -neg_mode;
  double t_peak = t_mode;
  if (gs[best] > peak) {
    peak = gs[best];
    t_peak = ts[best];
  }

  // Width of the peak from a shrinking second difference.
  double sigma = spacing;
  for (double h = spacing / 4.0; h > 1e-12; h /= 8.0) {
    const double gp = g(std::min(t_peak + h, hi));
    const double gm = g(std::max(t_peak - h, lo));
    if (gp == kNegInf || gm == kNegInf) continue;
    const double d2 = (gp - 2.0 * peak + gm) / (h * h);
    if (!(d2 < 0.0)) break;
    const double s = 1.0 / std::sqrt(-d2);
    sigma = std::min(s, spacing);
    if (s > 10.0 * h) break;
  }

  std::vector<double> cuts = ts;
  cuts.push_back(t_peak);
  for (double step = sigma / 2.0; step < (hi - lo); step *= 2.0) {
    if (t_peak - step > lo) cuts.push_back(t_peak - step);
    if (t_peak + step < hi) cuts.push_back(t_peak + step);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Panels whose bounding value is hopeless relative to the peak mass are
  // dropped; unimodality makes the panel endpoint nearest the mode its max.
  const double log_mass_floor =
      peak + std::log(sigma) + std::log(q.tolerance) - 30.0;
  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  double g_prev = g(cuts.front());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const double g_next = g(b);
    const bool holds_mode = a <= t_peak && t_peak <= b;
    const double bound = std::max(g_prev, g_next) + std::log(b - a);
    g_prev = g_next;
    if (!holds_mode && bound < log_mass_floor) continue;
    Panel p = gauss_kronrod(g, a, b, peak);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }

  int splits = 0;
  while (total_err > q.tolerance * total && !heap.empty()) {
    if (++splits > kMaxSubdivisions) {
      throw QuadratureError("adaptive quadrature did not reach tolerance");
    }
    const Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    const Panel l = gauss_kronrod(g, p.a, mid, peak);
    const Panel r = gauss_kronrod(g, mid, p.b, peak);
    total += l.value + r.value - p.value;
    total_err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
  }
  if (!(total > 0.0)) return kNegInf;
  return peak + std::log(total);
}

}  // namespace fpp
