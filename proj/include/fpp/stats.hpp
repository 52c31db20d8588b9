#pragma once

// Fixed-threshold comparisons between simulation output and the limit laws.
// Every function is a pure function of its arguments.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fpp/theory.hpp"

namespace fpp {

struct ExperimentRecord {
  long long n = 0;
  double s = 0.0;
  std::uint64_t seed = 0;
  double weight = 0.0;
  int hopcount = 0;
  double standardized_t = 0.0;  // NaN when undefined (n < 3)
};

struct TestReport {
  std::string test_name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;  // statistic <= threshold
  long long sample_size = 0;
  std::string note;   // free-form context, not used for the verdict
};

TestReport make_report(std::string name, double statistic, double threshold,
                       long long sample_size, std::string note = {});

// sup_t |F_emp(t) - cdf(t)|. Needs >= 100 samples.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// KS distance of standardized weights to 1 - gumbel_sf(d, k, .).
TestReport ks_against_gumbel(const std::vector<double>& samples, const Disorder& d, int k,
                             double threshold, std::string name = "ks_gumbel");

// KS distance to 1 - independent_min_sf(d, k, .), the limit without (k-1)!.
TestReport ks_against_independent_min(const std::vector<double>& samples, const Disorder& d,
                                      int k, double threshold,
                                      std::string name = "ks_independent_min");

// Total variation between the count histogram and Poisson(mean), on the
// support where the Poisson mass is >= 1e-9 with the remainder lumped.
// Needs >= 200 counts and mean > 0.
double poisson_tv(const std::vector<std::uint64_t>& counts, double mean);
TestReport poisson_count_test(const std::vector<std::uint64_t>& counts, double mean,
                              double threshold, std::string name = "poisson_tv");

// Normalized hopcount frequencies. Throws DomainError on empty input.
std::map<int, double> hop_histogram(const std::vector<ExperimentRecord>& records);
std::map<int, double> hop_histogram(const std::vector<int>& hopcounts);

// Sample Pearson correlation. Needs >= 100 pairs; ZeroVarianceError if
// either coordinate is constant.
double pairwise_correlation(const std::vector<std::pair<double, double>>& pairs);

}  // namespace fpp
