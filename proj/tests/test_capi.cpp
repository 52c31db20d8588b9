#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "fpp/fpp.h"

TEST_CASE("status names and errors") {
  CHECK(std::string(fpp_status_name(FPP_OK)) == "ok");
  CHECK(std::string(fpp_version()) == "1.0.0");
  double out = 0;
  CHECK(fpp_gs(-1.0, 2.0, &out) == FPP_ERR_DOMAIN);
  CHECK(std::strlen(fpp_last_error()) > 0);
  CHECK(fpp_gs(1.0, 2.0, nullptr) == FPP_ERR_INVALID_ARGUMENT);
  CHECK(fpp_gs(1.0, 2.0, &out) == FPP_OK);
  CHECK(out == doctest::Approx(4.0));
  CHECK(fpp_count_paths_below(nullptr, 10, 2, 1.0, nullptr) == FPP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("theory through the C surface") {
  double sj = 0;
  REQUIRE(fpp_special_point(2, &sj) == FPP_OK);
  CHECK(sj == doctest::Approx(1.409420839653209));
  fpp_hop_minimizer hm{};
  REQUIRE(fpp_k_star(sj, &hm) == FPP_OK);
  CHECK(hm.is_special == 1);
  CHECK(hm.pair_lo == 2);
  CHECK(hm.pair_hi == 3);
  REQUIRE(fpp_k_star(2.5, &hm) == FPP_OK);
  CHECK(hm.k_star == 4);
  int holds = 0;
  double margin = 0;
  REQUIRE(fpp_poisson_condition(2.5, 4, 1, &holds, &margin) == FPP_OK);
  CHECK(holds == 1);
  double pf = 0, pc = 0;
  REQUIRE(fpp_hop_split_probability(sj, 0, &pf, &pc) == FPP_OK);
  CHECK(pf == doctest::Approx(0.5874091662925641));
  CHECK(fpp_hop_split_probability(1.5, 0, &pf, &pc) == FPP_ERR_DOMAIN);
  double lf = 0;
  fpp_quadrature q;
  fpp_quadrature_default(&q);
  CHECK(q.node_count == 64);
  REQUIRE(fpp_log_fk_numeric(1.0, 2, 0.5, &q, &lf) == FPP_OK);
  CHECK(lf == doctest::Approx(-6.997053234657596));
  q.node_count = 2;
  CHECK(fpp_log_fk_numeric(1.0, 2, 0.5, &q, &lf) == FPP_ERR_DOMAIN);
}

TEST_CASE("simulation handles") {
  fpp_weight_model* m = nullptr;
  REQUIRE(fpp_weight_model_create(1.0, 42, &m) == FPP_OK);
  fpp_path* p = nullptr;
  REQUIRE(fpp_shortest_path(m, 200, 1, 200, &p) == FPP_OK);
  const int h = fpp_path_hopcount(p);
  CHECK(h >= 1);
  REQUIRE(fpp_path_vertex_count(p) == static_cast<size_t>(h) + 1);
  std::vector<int> v(h + 1);
  REQUIRE(fpp_path_vertices(p, v.data(), v.size()) == FPP_OK);
  CHECK(v.front() == 1);
  CHECK(v.back() == 200);
  double w2 = 0;
  REQUIRE(fpp_min_two_edge(m, 200, &w2) == FPP_OK);
  CHECK(fpp_path_weight(p) <= w2);
  fpp_path_destroy(p);
  CHECK(fpp_shortest_path(m, 200, 3, 3, &p) == FPP_ERR_DOMAIN);
  uint64_t count = 0;
  CHECK(fpp_count_paths_below(m, 50, 4, 1.0, &count) == FPP_ERR_UNSUPPORTED);
  std::vector<double> w(3);
  std::vector<int> hops(3);
  REQUIRE(fpp_multipoint_weights(m, 100, 3, w.data(), hops.data()) == FPP_OK);
  CHECK(w[0] > 0);
  std::vector<double> draws(10);
  REQUIRE(fpp_sample_min_independent(1.0, 2, std::log(1e6), 1, 2, draws.size(), draws.data()) == FPP_OK);
  CHECK(draws[3] > 0);
  fpp_weight_model_destroy(m);
  fpp_weight_model_destroy(nullptr);
  fpp_path_destroy(nullptr);
}

TEST_CASE("statistics") {
  std::vector<double> x(50, 1.0), y(50, 2.0);
  double out = 0;
  CHECK(fpp_pairwise_correlation(x.data(), y.data(), x.size(), &out) == FPP_ERR_INSUFFICIENT_SAMPLES);
  x.assign(200, 1.0);
  y.assign(200, 2.0);
  CHECK(fpp_pairwise_correlation(x.data(), y.data(), x.size(), &out) == FPP_ERR_ZERO_VARIANCE);
  std::vector<uint64_t> zeros(300, 0);
  REQUIRE(fpp_poisson_tv(zeros.data(), zeros.size(), 2.0, &out) == FPP_OK);
  CHECK(out == doctest::Approx(1.0 - std::exp(-2.0)));
}

TEST_CASE("config handle") {
  fpp_config* c = nullptr;
  REQUIRE(fpp_config_create(&c) == FPP_OK);
  const double s[] = {1.0};
  const long long n[] = {1};
  REQUIRE(fpp_config_set_s_values(c, s, 1) == FPP_OK);
  REQUIRE(fpp_config_set_n_values(c, n, 1) == FPP_OK);
  CHECK(fpp_config_validate(c) == FPP_ERR_CONFIG);
  char* text = nullptr;
  REQUIRE(fpp_config_to_json(c, &text) == FPP_OK);
  CHECK(std::string(text).find("s_values") != std::string::npos);
  fpp_string_free(text);
  fpp_config_destroy(c);
  CHECK(fpp_config_from_json("{\"nope\": 1}", &c) == FPP_ERR_CONFIG);
  CHECK(fpp_config_load("/nonexistent/x.json", &c) == FPP_ERR_IO);
}

TEST_CASE("formulas suite via the C surface") {
  CHECK(std::string(fpp_suite_name(0)).size() > 0);
  fpp_report_set* r = nullptr;
  CHECK(fpp_validate("nosuch", 1, 1, nullptr, &r) == FPP_ERR_CONFIG);
  REQUIRE(fpp_validate("formulas", fpp_default_validation_seed(), 1, nullptr, &r) == FPP_OK);
  CHECK(fpp_report_set_pass(r) == 1);
  REQUIRE(fpp_report_set_criterion_count(r) == 3);
  int id = 0, pass = 0;
  const char* title = nullptr;
  double secs = 0;
  size_t nrep = 0;
  REQUIRE(fpp_report_set_criterion(r, 0, &id, &title, &pass, &secs, &nrep) == FPP_OK);
  CHECK(id == 1);
  CHECK(nrep >= 1);
  fpp_report rep{};
  REQUIRE(fpp_report_set_report(r, 0, 0, &rep) == FPP_OK);
  CHECK(rep.pass == 1);
  CHECK(fpp_report_set_report(r, 0, nrep, &rep) == FPP_ERR_DOMAIN);
  char* json = nullptr;
  REQUIRE(fpp_report_set_to_json(r, &json) == FPP_OK);
  CHECK(std::string(json).find("\"criteria\"") != std::string::npos);
  fpp_string_free(json);
  fpp_report_set_destroy(r);
}
