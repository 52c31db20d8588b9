#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "fpp/error.hpp"
#include "fpp/simulate.hpp"
#include "fpp/stats.hpp"
#include "fpp/validation.hpp"

using namespace fpp;

TEST_CASE("edge weights are symmetric, deterministic and seed dependent") {
  const WeightModel a(Disorder(1.0), 42), b(Disorder(1.0), 42), c(Disorder(1.0), 43);
  int differ = 0;
  for (int i = 1; i <= 20; ++i) {
    for (int j = i + 1; j <= 20; ++j) {
      CHECK(a.edge_weight(i, j) == a.edge_weight(j, i));
      CHECK(a.edge_weight(i, j) == b.edge_weight(i, j));
      CHECK(a.edge_weight(i, j) > 0.0);
      CHECK(std::isfinite(a.edge_weight(i, j)));
      differ += a.edge_weight(i, j) != c.edge_weight(i, j);
    }
  }
  CHECK(differ == 190);
  CHECK_THROWS_AS(a.edge_weight(0, 3), DomainError);
  CHECK_THROWS_AS(a.edge_weight(4, 4), DomainError);
}

TEST_CASE("extreme bit patterns stay finite") {
  const WeightModel m(Disorder(2.5), 1);
  for (std::uint64_t bits : {std::uint64_t{0}, ~std::uint64_t{0}, std::uint64_t{1} << 63}) {
    const double w = m.weight_from_bits(bits);
    CHECK(w > 0.0);
    CHECK(std::isfinite(w));
  }
}

TEST_CASE("edge weight law is E^{-s}") {
  constexpr int kN = 1'000'000;
  for (double s : {0.5, 2.5}) {
    const WeightModel m(Disorder(s), 99);
    std::vector<double> w;
    w.reserve(kN);
    for (int i = 0; i < kN; ++i) w.push_back(m.weight_from_bits(m.edge_bits(1, i + 2)));
    // P(E^{-s} <= x) = exp(-x^{-1/s}).
    const double ks = ks_statistic(std::move(w), [s](double x) { return std::exp(-std::pow(x, -1.0 / s)); });
    CAPTURE(s);
    CHECK(ks < 0.002);
  }
}

TEST_CASE("light_cutoff keeps exactly the light edges") {
  for (double s : {0.5, 1.0, 2.5}) {
    const WeightModel m(Disorder(s), 5);
    for (double tau : {0.05, 0.3, 1.0, 3.0}) {
      const std::uint64_t cutoff = m.light_cutoff(tau);
      for (int j = 2; j <= 20000; ++j) {
        const std::uint64_t bits = m.edge_bits(1, j);
        // The prefilter may keep extra edges but never drops a light one.
        if (m.weight_from_bits(bits) < tau) CHECK((bits >> 11) >= cutoff);
      }
    }
    CHECK(m.light_cutoff(0.0) > (~std::uint64_t{0} >> 11));
    CHECK(m.light_cutoff(INFINITY) == 0);
  }
}

TEST_CASE("shortest path agrees with exhaustive enumeration") {
  for (double s : {0.5, 1.0, 2.5}) {
    for (int n = 3; n <= 9; ++n) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const WeightModel m(Disorder(s), seed * 1000 + n);
        const PathResult fast = shortest_path(m, n, 1, n);
        const PathResult slow = enumerate_shortest_path(m, n, 1, n);
        CHECK(fast.weight == doctest::Approx(slow.weight).epsilon(1e-13));
        CHECK(fast.hopcount == slow.hopcount);
      }
    }
  }
}

TEST_CASE("path invariants") {
  const WeightModel m(Disorder(1.5), 7);
  for (int n : {2, 10, 300, 2000}) {
    const PathResult p = shortest_path(m, n, 1, n);
    REQUIRE(p.vertices.size() == static_cast<size_t>(p.hopcount) + 1);
    CHECK(p.vertices.front() == 1);
    CHECK(p.vertices.back() == n);
    CHECK(std::set<Vertex>(p.vertices.begin(), p.vertices.end()).size() == p.vertices.size());
    double w = 0.0;
    for (size_t i = 1; i < p.vertices.size(); ++i) w += m.edge_weight(p.vertices[i - 1], p.vertices[i]);
    CHECK(p.weight == doctest::Approx(w).epsilon(1e-15));
    CHECK(p.weight <= m.edge_weight(1, n));
    if (n >= 3) CHECK(p.weight <= min_two_edge(m, n));
    // Symmetric in the endpoints.
    CHECK(shortest_path(m, n, n, 1).weight == doctest::Approx(p.weight).epsilon(1e-13));
  }
  const PathResult two = shortest_path(m, 2, 1, 2);
  CHECK(two.hopcount == 1);
  CHECK(two.weight == m.edge_weight(1, 2));
  CHECK_THROWS_AS(shortest_path(m, 1, 1, 1), DomainError);
  CHECK_THROWS_AS(shortest_path(m, 5, 2, 2), DomainError);
  CHECK_THROWS_AS(shortest_path(m, 5, 1, 6), DomainError);
  CHECK_THROWS_AS(min_two_edge(m, 2), DomainError);
}

TEST_CASE("k-edge path counts agree with brute force") {
  for (double s : {0.5, 1.0, 2.5}) {
    for (int n = 3; n <= 12; ++n) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const WeightModel m(Disorder(s), seed + 100 * n);
        // Thresholds around the path weights so counts are non-trivial.
        const double w2 = min_two_edge(m, n);
        for (double z : {0.5 * w2, 1.5 * w2, 3.0 * w2}) {
          for (int k : {2, 3}) {
            CHECK(count_k_edge_paths_below(m, n, k, z).count ==
                  enumerate_k_edge_paths_below(m, n, k, z));
          }
        }
      }
    }
  }
  const WeightModel m(Disorder(1.0), 1);
  CHECK_THROWS_AS(count_k_edge_paths_below(m, 10, 4, 1.0), UnsupportedError);
  CHECK_THROWS_AS(count_k_edge_paths_below(m, 10, 1, 1.0), DomainError);
  CHECK_THROWS_AS(count_k_edge_paths_below(m, 10, 2, 0.0), DomainError);
}

TEST_CASE("multipoint weights match pairwise shortest paths") {
  for (double s : {0.5, 2.5}) {
    const WeightModel m(Disorder(s), 31);
    const int n = 500;
    const auto many = multipoint_weights(m, n, 5);
    REQUIRE(many.size() == 5);
    for (int t = 2; t <= 6; ++t) {
      const PathResult single = shortest_path(m, n, 1, t);
      CHECK(many[t - 2].weight == doctest::Approx(single.weight).epsilon(1e-13));
      CHECK(many[t - 2].vertices.front() == 1);
      CHECK(many[t - 2].vertices.back() == t);
    }
  }
  const WeightModel m(Disorder(1.0), 1);
  CHECK_THROWS_AS(multipoint_weights(m, 10, 0), DomainError);
  CHECK_THROWS_AS(multipoint_weights(m, 10, 9), DomainError);
}

TEST_CASE("sample_Zk") {
  Stream rng(1, 2);
  for (int i = 0; i < 1000; ++i) {
    const double z = sample_Zk(Disorder(1.0), 3, rng);
    CHECK(z > 0.0);
    CHECK(std::isfinite(z));
  }
  CHECK_THROWS_AS(sample_Zk(Disorder(1.0), 0, rng), DomainError);
  CHECK_THROWS_AS(sample_min_independent(Disorder(1.0), 2, 2LL, rng), DomainError);
  CHECK_THROWS_AS(sample_min_independent(Disorder(1.0), 1, 10LL, rng), DomainError);
  Stream a(9, 9), b(9, 9);
  CHECK(sample_min_independent(Disorder(1.0), 2, 100LL, a) ==
        sample_min_independent(Disorder(1.0), 2, 100LL, b));
}
