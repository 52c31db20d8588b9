#include "fpp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "fpp/error.hpp"
#include "fpp/numerics.hpp"

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kTop = (std::uint64_t{1} << 53) - 1;

void require_n(int n, int min_n, const char* what) {
  if (n < min_n) {
    throw DomainError(std::string(what) + ": n must be >= " + std::to_string(min_n));
  }
}

void require_vertex(int n, Vertex v, const char* what) {
  if (v < 1 || v > n) throw DomainError(std::string(what) + ": vertex out of range");
}

// Lowest-index argmin over vertices not yet settled.
Vertex argmin_open(const std::vector<double>& dist, const std::vector<char>& done, int n) {
  Vertex best = 0;
  double best_d = kInf;
  for (Vertex v = 1; v <= n; ++v) {
    if (!done[v] && dist[v] < best_d) {
      best_d = dist[v];
      best = v;
    }
  }
  return best;
}

double path_weight(const WeightModel& model, const std::vector<Vertex>& path) {
  double w = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) w += model.edge_weight(path[i], path[i + 1]);
  return w;
}

PathResult make_path(const WeightModel& model, std::vector<Vertex> vertices) {
  PathResult out;
  out.hopcount = static_cast<int>(vertices.size()) - 1;
  out.weight = path_weight(model, vertices);
  out.vertices = std::move(vertices);
  return out;
}

}  // namespace

double WeightModel::edge_weight(Vertex i, Vertex j) const {
  if (i < 1 || j < 1) throw DomainError("edge_weight: vertices are 1-based");
  if (i == j) throw DomainError("edge_weight: K_n has no self-loops");
  return weight_from_bits(edge_bits(i, j));
}

double WeightModel::weight_from_bits(std::uint64_t bits) const noexcept {
  // 1 - U = (q + 1/2) 2^{-53} with q uniform on {0, ..., 2^53 - 1}, so E > 0.
  // q + 1/2 is only exact below 2^52; above it use U = (b + 1/2) 2^{-53}
  // with b = 2^53 - 1 - q instead.
  const std::uint64_t b = bits >> 11;
  const std::uint64_t q = kTop - b;
  const double e = q < (std::uint64_t{1} << 52)
                       ? -std::log((static_cast<double>(q) + 0.5) * kTwoPow53Inv)
                       : -std::log1p(-(static_cast<double>(b) + 0.5) * kTwoPow53Inv);
  return std::exp(-d_.s() * std::log(e));
}

std::uint64_t WeightModel::light_cutoff(double tau) const noexcept {
  if (!(tau > 0.0)) return kTop + 1;
  if (tau == kInf) return 0;
  // weight < tau  <=>  E > tau^{-p}  <=>  q + 1/2 < 2^53 e^{-tau^{-p}}.
  const double q_max = std::exp(-std::pow(tau, -d_.p())) * 9007199254740992.0 + 2.0;
  if (q_max >= static_cast<double>(kTop)) return 0;
  return kTop - static_cast<std::uint64_t>(q_max);
}

PathResult shortest_path(const WeightModel& model, int n, Vertex src, Vertex dst) {
  require_n(n, 2, "shortest_path");
  require_vertex(n, src, "shortest_path");
  require_vertex(n, dst, "shortest_path");
  if (src == dst) throw DomainError("shortest_path: src and dst must differ");

  std::vector<double> dist[2] = {std::vector<double>(n + 1, kInf),
                                 std::vector<double>(n + 1, kInf)};
  std::vector<Vertex> parent[2] = {std::vector<Vertex>(n + 1, 0),
                                   std::vector<Vertex>(n + 1, 0)};
  std::vector<char> done[2] = {std::vector<char>(n + 1, 0), std::vector<char>(n + 1, 0)};
  dist[0][src] = 0.0;
  dist[1][dst] = 0.0;

  double best = kInf;
  Vertex meet_fwd = 0, meet_bwd = 0;

  for (;;) {
    const Vertex top_f = argmin_open(dist[0], done[0], n);
    const Vertex top_b = argmin_open(dist[1], done[1], n);
    const double df = top_f ? dist[0][top_f] : kInf;
    const double db = top_b ? dist[1][top_b] : kInf;
    if (df + db >= best) break;

    const int side = df <= db ? 0 : 1;
    const int other = 1 - side;
    const Vertex u = side == 0 ? top_f : top_b;
    done[side][u] = 1;
    const double du = dist[side][u];
    const std::uint64_t cutoff = model.light_cutoff(best - du);

    for (Vertex v = 1; v <= n; ++v) {
      if (v == u || done[side][v]) continue;
      const std::uint64_t bits = model.edge_bits(u, v);
      if ((bits >> 11) < cutoff) continue;
      const double nd = du + model.weight_from_bits(bits);
      if (nd >= best) continue;
      if (nd < dist[side][v]) {
        dist[side][v] = nd;
        parent[side][v] = u;
      }
      const double through = nd + dist[other][v];
      if (through < best) {
        best = through;
        meet_fwd = side == 0 ? u : v;
        meet_bwd = side == 0 ? v : u;
      }
    }
  }

  std::vector<Vertex> path;
  for (Vertex v = meet_fwd; v != 0; v = v == src ? 0 : parent[0][v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  for (Vertex v = meet_bwd; v != 0; v = v == dst ? 0 : parent[1][v]) path.push_back(v);
  return make_path(model, std::move(path));
}

double min_two_edge(const WeightModel& model, int n) {
  require_n(n, 3, "min_two_edge");
  double best = kInf;
  for (Vertex i = 2; i <= n - 1; ++i) {
    best = std::min(best, model.weight_from_bits(model.edge_bits(1, i)) +
                              model.weight_from_bits(model.edge_bits(i, n)));
  }
  return best;
}

CountResult count_k_edge_paths_below(const WeightModel& model, int n, int k, double z) {
  if (k >= 4) throw UnsupportedError("count_k_edge_paths_below: only k in {2, 3} is supported");
  if (k < 2) throw DomainError("count_k_edge_paths_below: k must be 2 or 3");
  if (!(z > 0.0)) throw DomainError("count_k_edge_paths_below: z must be > 0");
  require_n(n, 3, "count_k_edge_paths_below");

  CountResult out{k, z, 0};
  const std::uint64_t cutoff = model.light_cutoff(z);
  // Every edge on a counted path is itself lighter than z.
  auto light = [&](Vertex a, Vertex b, double& w) {
    const std::uint64_t bits = model.edge_bits(a, b);
    if ((bits >> 11) < cutoff) return false;
    w = model.weight_from_bits(bits);
    return w < z;
  };

  if (k == 2) {
    for (Vertex i = 2; i <= n - 1; ++i) {
      double w1, w2;
      if (light(1, i, w1) && light(i, n, w2) && w1 + w2 < z) ++out.count;
    }
    return out;
  }

  std::vector<std::pair<double, Vertex>> from_source, into_sink;
  for (Vertex i = 2; i <= n - 1; ++i) {
    double w;
    if (light(1, i, w)) from_source.emplace_back(w, i);
    if (light(i, n, w)) into_sink.emplace_back(w, i);
  }
  std::sort(from_source.begin(), from_source.end());
  std::sort(into_sink.begin(), into_sink.end());
  for (const auto& [wa, a] : from_source) {
    const double rest = z - wa;
    if (!(into_sink.size() && into_sink.front().first < rest)) break;
    const std::uint64_t mid_cutoff = model.light_cutoff(rest);
    for (const auto& [wb, b] : into_sink) {
      if (wb >= rest) break;
      if (b == a) continue;
      const std::uint64_t bits = model.edge_bits(a, b);
      if ((bits >> 11) < mid_cutoff) continue;
      if (wa + model.weight_from_bits(bits) + wb < z) ++out.count;
    }
  }
  return out;
}

std::vector<PathResult> multipoint_weights(const WeightModel& model, int n, int m) {
  if (m < 1) throw DomainError("multipoint_weights: m must be >= 1");
  if (m + 1 >= n) throw DomainError("multipoint_weights: need m + 1 < n");

  std::vector<double> dist(n + 1, kInf);
  std::vector<Vertex> parent(n + 1, 0);
  std::vector<char> done(n + 1, 0);
  dist[1] = 0.0;
  int open_targets = m;

  while (open_targets > 0) {
    const Vertex u = argmin_open(dist, done, n);
    done[u] = 1;
    if (u >= 2 && u <= m + 1) --open_targets;
    if (open_targets == 0) break;

    // Nothing at or beyond the worst open target label can still matter.
    double bound = 0.0;
    for (Vertex t = 2; t <= m + 1; ++t) {
      if (!done[t]) bound = std::max(bound, dist[t]);
    }
    const double du = dist[u];
    const std::uint64_t cutoff = model.light_cutoff(bound - du);
    for (Vertex v = 1; v <= n; ++v) {
      if (v == u || done[v]) continue;
      const std::uint64_t bits = model.edge_bits(u, v);
      if ((bits >> 11) < cutoff) continue;
      const double nd = du + model.weight_from_bits(bits);
      if (nd < dist[v] && nd < bound) {
        dist[v] = nd;
        parent[v] = u;
      }
    }
  }

  std::vector<PathResult> out;
  out.reserve(m);
  for (Vertex t = 2; t <= m + 1; ++t) {
    std::vector<Vertex> path;
    for (Vertex v = t; v != 0; v = v == 1 ? 0 : parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    out.push_back(make_path(model, std::move(path)));
  }
  return out;
}

double sample_Zk(const Disorder& d, int k, Stream& rng) {
  if (k < 1) throw DomainError("sample_Zk: k must be >= 1");
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    // E from an open uniform so that E^{-s} stays finite.
    const double e = -std::log1p(-rng.uniform_open());
    sum += std::exp(-d.s() * std::log(e));
  }
  return sum;
}

double sample_min_independent(const Disorder& d, int k, double log_n, Stream& rng,
                              const QuadratureSpec& q) {
  if (k < 2) throw DomainError("sample_min_independent: k must be >= 2");
  if (!(log_n >= std::log(3.0) - 1e-12)) {
    throw DomainError("sample_min_independent: n must be >= 3");
  }
  return min_quantile(d, k, (k - 1) * log_n, rng.uniform_open(), q);
}

double sample_min_independent(const Disorder& d, int k, long long n, Stream& rng,
                              const QuadratureSpec& q) {
  if (n < 3) throw DomainError("sample_min_independent: n must be >= 3");
  return sample_min_independent(d, k, std::log(static_cast<double>(n)), rng, q);
}

}  // namespace fpp
