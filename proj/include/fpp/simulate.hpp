#pragma once

// Monte-Carlo engine for first-passage percolation on the implicit complete
// graph K_n. Edge weights are never stored: each is regenerated on demand
// from a counter-based hash of (seed, unordered edge).

#include <cstdint>
#include <vector>

#include "fpp/quadrature.hpp"
#include "fpp/rng.hpp"
#include "fpp/theory.hpp"

namespace fpp {

using Vertex = int;  // 1-based, as in K_n = {1, ..., n}

class WeightModel {
 public:
  WeightModel(const Disorder& d, std::uint64_t master_seed) noexcept
      : d_(d), seed_(master_seed), prf_(master_seed) {}

  const Disorder& disorder() const noexcept { return d_; }
  std::uint64_t master_seed() const noexcept { return seed_; }

  // E^{-s} for the edge {i, j}. Throws DomainError if i == j or either is < 1.
  double edge_weight(Vertex i, Vertex j) const;

  // Raw hash bits of edge {i, j}; symmetric in (i, j).
  std::uint64_t edge_bits(Vertex i, Vertex j) const noexcept {
    const auto lo = static_cast<std::uint64_t>(i < j ? i : j);
    const auto hi = static_cast<std::uint64_t>(i < j ? j : i);
    return prf_((lo << 32) | hi);
  }

  double weight_from_bits(std::uint64_t bits) const noexcept;

  // Every edge lighter than tau has (bits >> 11) >= light_cutoff(tau). The
  // converse does not hold; survivors must be checked exactly. Lets the
  // searches skip the log/pow for edges that cannot matter.
  std::uint64_t light_cutoff(double tau) const noexcept;

 private:
  Disorder d_;
  std::uint64_t seed_;
  Prf prf_;
};

struct PathResult {
  double weight = 0.0;
  int hopcount = 0;
  std::vector<Vertex> vertices;
};

struct CountResult {
  int k = 0;
  double threshold = 0.0;
  std::uint64_t count = 0;
};

// Exact minimal-weight path between src and dst in K_n. Bidirectional
// dense Dijkstra (array argmin, no heap), O(n^2) worst case and O(n) memory;
// edges heavier than the current best complete path are rejected from their
// hash bits alone.
PathResult shortest_path(const WeightModel& model, int n, Vertex src, Vertex dst);

// min over i in {2, ..., n-1} of w(1, i) + w(i, n).
double min_two_edge(const WeightModel& model, int n);

// Number of simple k-edge paths from 1 to n with weight < z, k in {2, 3}.
CountResult count_k_edge_paths_below(const WeightModel& model, int n, int k, double z);

// Optimal paths from vertex 1 to each of 2, ..., m+1 from one Dijkstra pass.
std::vector<PathResult> multipoint_weights(const WeightModel& model, int n, int m);

// E_1^{-s} + ... + E_k^{-s} from fresh stream draws.
double sample_Zk(const Disorder& d, int k, Stream& rng);

// One draw of the minimum of n^{k-1} i.i.d. copies of Z_k by inverse CDF.
double sample_min_independent(const Disorder& d, int k, double log_n, Stream& rng,
                              const QuadratureSpec& q = {});
double sample_min_independent(const Disorder& d, int k, long long n, Stream& rng,
                              const QuadratureSpec& q = {});

}  // namespace fpp
