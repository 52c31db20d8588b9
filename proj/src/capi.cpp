#include "fpp/fpp.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "fpp/error.hpp"
#include "fpp/experiment.hpp"
#include "fpp/numerics.hpp"
#include "fpp/rng.hpp"
#include "fpp/simulate.hpp"
#include "fpp/stats.hpp"
#include "fpp/theory.hpp"
#include "fpp/validation.hpp"

struct fpp_weight_model {
  fpp::WeightModel model;
};

struct fpp_path {
  fpp::PathResult path;
};

struct fpp_config {
  fpp::RunConfig config;
};

struct fpp_report_set {
  std::string suite;
  std::vector<fpp::CriterionResult> results;
};

namespace {

thread_local std::string g_last_error;

struct InvalidArgument {
  const char* what;
};

fpp_status fail(fpp_status st, const char* what) {
  g_last_error = what;
  return st;
}

// Runs body, translating exceptions into status codes.
template <class Body>
fpp_status guard(Body&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return FPP_OK;
  } catch (const InvalidArgument& e) {
    return fail(FPP_ERR_INVALID_ARGUMENT, e.what);
  } catch (const fpp::Error& e) {
    return fail(static_cast<fpp_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FPP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FPP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FPP_ERR_INTERNAL, "unknown error");
  }
}

template <class T>
T* need(T* p, const char* name) {
  if (p == nullptr) throw InvalidArgument{name};
  return p;
}

fpp::QuadratureSpec to_spec(const fpp_quadrature* q) {
  fpp::QuadratureSpec spec;
  if (q == nullptr) return spec;
  spec.node_count = q->node_count;
  spec.tolerance = q->tolerance;
  switch (q->transform) {
    case FPP_TRANSFORM_LOG:
      spec.transform = fpp::Transform::log_substitution;
      break;
    case FPP_TRANSFORM_LINEAR:
      spec.transform = fpp::Transform::linear;
      break;
    default:
      throw InvalidArgument{"unknown quadrature transform"};
  }
  spec.validate();
  return spec;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* fpp_last_error(void) { return g_last_error.c_str(); }

const char* fpp_status_name(fpp_status status) {
  switch (status) {
    case FPP_OK: return "ok";
    case FPP_ERR_DOMAIN: return "domain";
    case FPP_ERR_QUADRATURE: return "quadrature_nonconvergence";
    case FPP_ERR_INVERSION: return "inversion_failure";
    case FPP_ERR_UNSUPPORTED: return "unsupported";
    case FPP_ERR_INSUFFICIENT_SAMPLES: return "insufficient_samples";
    case FPP_ERR_ZERO_VARIANCE: return "zero_variance";
    case FPP_ERR_CONFIG: return "config";
    case FPP_ERR_IO: return "io";
    case FPP_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case FPP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* fpp_version(void) { return "1.0.0"; }

void fpp_string_free(char* s) { std::free(s); }

// ---- theory ----------------------------------------------------------------

fpp_status fpp_gs(double s, double x, double* out) {
  return guard([&] { *need(out, "out") = fpp::gs(fpp::Disorder(s), x); });
}

fpp_status fpp_special_point(int j, double* out) {
  return guard([&] { *need(out, "out") = fpp::special_point(j); });
}

fpp_status fpp_k_star(double s, fpp_hop_minimizer* out) {
  return guard([&] {
    need(out, "out");
    const fpp::HopMinimizer h = fpp::k_star(fpp::Disorder(s));
    out->k_star = h.k_star;
    out->g_star = h.g_star;
    out->is_special = h.is_special ? 1 : 0;
    out->pair_lo = h.pair ? h.pair->first : 0;
    out->pair_hi = h.pair ? h.pair->second : 0;
  });
}

fpp_status fpp_a_coeff(double s, int k, double* out) {
  return guard([&] { *need(out, "out") = fpp::a_coeff(fpp::Disorder(s), k); });
}

fpp_status fpp_log_fk_tail_asymptotic(double s, int k, double z, double* out) {
  return guard([&] { *need(out, "out") = fpp::log_fk_tail_asymptotic(fpp::Disorder(s), k, z); });
}

fpp_status fpp_centering_z(double s, int k, long long n, double t, double* out) {
  return guard([&] { *need(out, "out") = fpp::centering_z(fpp::Disorder(s), k, n, t); });
}

fpp_status fpp_standardize_weight(double s, int k, long long n, double weight, double* out) {
  return guard(
      [&] { *need(out, "out") = fpp::standardize_weight(fpp::Disorder(s), k, n, weight); });
}

fpp_status fpp_gumbel_rate(double s, int k, double t, double* out) {
  return guard([&] { *need(out, "out") = fpp::gumbel_rate(fpp::Disorder(s), k, t); });
}

fpp_status fpp_gumbel_sf(double s, int k, double t, double* out) {
  return guard([&] { *need(out, "out") = fpp::gumbel_sf(fpp::Disorder(s), k, t); });
}

fpp_status fpp_independent_min_sf(double s, int k, double t, double* out) {
  return guard([&] { *need(out, "out") = fpp::independent_min_sf(fpp::Disorder(s), k, t); });
}

fpp_status fpp_correlated_tail_exponent(double s, int k, int j, double* out) {
  return guard(
      [&] { *need(out, "out") = fpp::correlated_tail_exponent(fpp::Disorder(s), k, j); });
}

fpp_status fpp_poisson_condition(double s, int k, int j, int* holds, double* margin) {
  return guard([&] {
    const fpp::PoissonCondition pc = fpp::poisson_condition(fpp::Disorder(s), k, j);
    if (holds) *holds = pc.holds ? 1 : 0;
    if (margin) *margin = pc.margin;
  });
}

// ---- numerics ----------------------------------------------------------------

void fpp_quadrature_default(fpp_quadrature* q) {
  if (q == nullptr) return;
  const fpp::QuadratureSpec spec;
  q->node_count = spec.node_count;
  q->tolerance = spec.tolerance;
  q->transform = FPP_TRANSFORM_LOG;
}

fpp_status fpp_log_fk_numeric(double s, int k, double z, const fpp_quadrature* q, double* out) {
  return guard([&] { *need(out, "out") = fpp::fk_numeric(fpp::Disorder(s), k, z, to_spec(q)); });
}

fpp_status fpp_min_quantile(double s, int k, double log_m, double u, const fpp_quadrature* q,
                            double* out) {
  return guard([&] {
    *need(out, "out") = fpp::min_quantile(fpp::Disorder(s), k, log_m, u, to_spec(q));
  });
}

fpp_status fpp_log_joint_tail(double s, int len1, int len2, int shared, double z1, double z2,
                              const fpp_quadrature* q, double* out) {
  return guard([&] {
    *need(out, "out") = fpp::joint_tail_numeric(fpp::Disorder(s), fpp::JointShape{len1, len2, shared},
                                                z1, z2, to_spec(q));
  });
}

fpp_status fpp_hop_split_probability(double s, int ordered, double* p_floor, double* p_ceil) {
  return guard([&] {
    const fpp::HopSplit h = fpp::hop_split_probability(
        s, ordered ? fpp::PathCount::ordered : fpp::PathCount::binomial);
    if (p_floor) *p_floor = h.p_floor;
    if (p_ceil) *p_ceil = h.p_ceil;
  });
}

// ---- simulation ----------------------------------------------------------------

fpp_status fpp_weight_model_create(double s, uint64_t seed, fpp_weight_model** out) {
  return guard([&] {
    need(out, "out");
    *out = new fpp_weight_model{fpp::WeightModel(fpp::Disorder(s), seed)};
  });
}

void fpp_weight_model_destroy(fpp_weight_model* m) { delete m; }

fpp_status fpp_edge_weight(const fpp_weight_model* m, int i, int j, double* out) {
  return guard([&] { *need(out, "out") = need(m, "model")->model.edge_weight(i, j); });
}

fpp_status fpp_shortest_path(const fpp_weight_model* m, int n, int src, int dst, fpp_path** out) {
  return guard([&] {
    need(out, "out");
    *out = new fpp_path{fpp::shortest_path(need(m, "model")->model, n, src, dst)};
  });
}

void fpp_path_destroy(fpp_path* p) { delete p; }

double fpp_path_weight(const fpp_path* p) { return p ? p->path.weight : std::nan(""); }

int fpp_path_hopcount(const fpp_path* p) { return p ? p->path.hopcount : 0; }

size_t fpp_path_vertex_count(const fpp_path* p) { return p ? p->path.vertices.size() : 0; }

fpp_status fpp_path_vertices(const fpp_path* p, int* buf, size_t cap) {
  return guard([&] {
    need(p, "path");
    if (cap > 0) need(buf, "buf");
    const auto& v = p->path.vertices;
    for (size_t i = 0; i < v.size() && i < cap; ++i) buf[i] = v[i];
  });
}

fpp_status fpp_min_two_edge(const fpp_weight_model* m, int n, double* out) {
  return guard([&] { *need(out, "out") = fpp::min_two_edge(need(m, "model")->model, n); });
}

fpp_status fpp_count_paths_below(const fpp_weight_model* m, int n, int k, double z, uint64_t* out) {
  return guard([&] {
    *need(out, "out") = fpp::count_k_edge_paths_below(need(m, "model")->model, n, k, z).count;
  });
}

fpp_status fpp_multipoint_weights(const fpp_weight_model* model, int n, int m, double* weights,
                                  int* hopcounts) {
  return guard([&] {
    const auto res = fpp::multipoint_weights(need(model, "model")->model, n, m);
    for (size_t i = 0; i < res.size(); ++i) {
      if (weights) weights[i] = res[i].weight;
      if (hopcounts) hopcounts[i] = res[i].hopcount;
    }
  });
}

fpp_status fpp_sample_min_independent(double s, int k, double log_n, uint64_t seed,
                                      uint64_t stream, size_t count, double* out) {
  return guard([&] {
    if (count > 0) need(out, "out");
    const fpp::Disorder d(s);
    fpp::Stream rng(seed, stream);
    for (size_t i = 0; i < count; ++i) out[i] = fpp::sample_min_independent(d, k, log_n, rng);
  });
}

// ---- statistics ----------------------------------------------------------------

fpp_status fpp_ks_gumbel(const double* t, size_t count, double s, int k, double* out) {
  return guard([&] {
    need(out, "out");
    if (count > 0) need(t, "t");
    const std::vector<double> v(t, t + count);
    *out = fpp::ks_against_gumbel(v, fpp::Disorder(s), k, 1.0).statistic;
  });
}

fpp_status fpp_poisson_tv(const uint64_t* counts, size_t count, double mean, double* out) {
  return guard([&] {
    need(out, "out");
    if (count > 0) need(counts, "counts");
    *out = fpp::poisson_tv(std::vector<std::uint64_t>(counts, counts + count), mean);
  });
}

fpp_status fpp_pairwise_correlation(const double* x, const double* y, size_t count, double* out) {
  return guard([&] {
    need(out, "out");
    if (count > 0) {
      need(x, "x");
      need(y, "y");
    }
    std::vector<std::pair<double, double>> pairs(count);
    for (size_t i = 0; i < count; ++i) pairs[i] = {x[i], y[i]};
    *out = fpp::pairwise_correlation(pairs);
  });
}

// ---- run configuration ----------------------------------------------------------------

fpp_status fpp_config_create(fpp_config** out) {
  return guard([&] { *need(out, "out") = new fpp_config{}; });
}

fpp_status fpp_config_from_json(const char* text, fpp_config** out) {
  return guard([&] {
    need(out, "out");
    *out = new fpp_config{fpp::RunConfig::from_json(need(text, "text"))};
  });
}

fpp_status fpp_config_load(const char* path, fpp_config** out) {
  return guard([&] {
    need(out, "out");
    *out = new fpp_config{fpp::RunConfig::load(need(path, "path"))};
  });
}

void fpp_config_destroy(fpp_config* c) { delete c; }

fpp_status fpp_config_to_json(const fpp_config* c, char** out) {
  return guard([&] { *need(out, "out") = dup_string(need(c, "config")->config.to_json()); });
}

fpp_status fpp_config_set_s_values(fpp_config* c, const double* s, size_t count) {
  return guard([&] {
    need(c, "config");
    if (count > 0) need(s, "s");
    c->config.s_values.assign(s, s + count);
  });
}

fpp_status fpp_config_set_n_values(fpp_config* c, const long long* n, size_t count) {
  return guard([&] {
    need(c, "config");
    if (count > 0) need(n, "n");
    c->config.n_values.assign(n, n + count);
  });
}

fpp_status fpp_config_set_replications(fpp_config* c, int reps) {
  return guard([&] { need(c, "config")->config.replications = reps; });
}

fpp_status fpp_config_set_seed(fpp_config* c, uint64_t seed) {
  return guard([&] { need(c, "config")->config.master_seed = seed; });
}

fpp_status fpp_config_set_output_path(fpp_config* c, const char* path) {
  return guard([&] { need(c, "config")->config.output_path = need(path, "path"); });
}

fpp_status fpp_config_set_jobs(fpp_config* c, unsigned jobs) {
  return guard([&] { need(c, "config")->config.jobs = jobs; });
}

fpp_status fpp_config_set_format(fpp_config* c, fpp_format format) {
  return guard([&] {
    need(c, "config");
    switch (format) {
      case FPP_FORMAT_CSV:
        c->config.format = fpp::OutputFormat::csv;
        break;
      case FPP_FORMAT_JSON:
        c->config.format = fpp::OutputFormat::json;
        break;
      default:
        throw InvalidArgument{"unknown output format"};
    }
  });
}

fpp_status fpp_config_set_quadrature(fpp_config* c, const fpp_quadrature* q) {
  return guard([&] { need(c, "config")->config.quadrature = to_spec(need(q, "quadrature")); });
}

fpp_status fpp_config_validate(const fpp_config* c) {
  return guard([&] { need(c, "config")->config.validate(); });
}

fpp_status fpp_run_simulate(const fpp_config* c, size_t* records) {
  return guard([&] {
    const auto outcome = fpp::run_simulate(need(c, "config")->config);
    if (records) *records = outcome.record_count;
  });
}

fpp_status fpp_run_sweep(const fpp_config* c, size_t* records) {
  return guard([&] {
    const auto outcome = fpp::run_sweep(need(c, "config")->config);
    if (records) *records = outcome.record_count;
  });
}

// ---- acceptance suite ----------------------------------------------------------------

const char* fpp_suite_name(size_t i) {
  static const std::vector<std::string> names = fpp::suite_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

uint64_t fpp_default_validation_seed(void) { return fpp::kValidationSeed; }

fpp_status fpp_validate(const char* suite, uint64_t seed, unsigned jobs, const char* out_dir,
                        fpp_report_set** out) {
  return guard([&] {
    need(out, "out");
    auto set = std::make_unique<fpp_report_set>();
    set->suite = need(suite, "suite");
    set->results = fpp::run_suite(set->suite, fpp::ValidationOptions{seed, jobs});
    if (out_dir) fpp::write_results(out_dir, set->suite, set->results);
    *out = set.release();
  });
}

fpp_status fpp_validate_criterion(int id, uint64_t seed, unsigned jobs, fpp_report_set** out) {
  return guard([&] {
    need(out, "out");
    auto set = std::make_unique<fpp_report_set>();
    set->suite = "criterion " + std::to_string(id);
    set->results.push_back(fpp::run_criterion(id, fpp::ValidationOptions{seed, jobs}));
    *out = set.release();
  });
}

void fpp_report_set_destroy(fpp_report_set* r) { delete r; }

int fpp_report_set_pass(const fpp_report_set* r) {
  if (r == nullptr || r->results.empty()) return 0;
  for (const auto& c : r->results) {
    if (!c.pass()) return 0;
  }
  return 1;
}

size_t fpp_report_set_criterion_count(const fpp_report_set* r) {
  return r ? r->results.size() : 0;
}

fpp_status fpp_report_set_criterion(const fpp_report_set* r, size_t i, int* id, const char** title,
                                    int* pass, double* seconds, size_t* report_count) {
  return guard([&] {
    need(r, "report set");
    if (i >= r->results.size()) throw fpp::DomainError("criterion index out of range");
    const auto& c = r->results[i];
    if (id) *id = c.id;
    if (title) *title = c.title.c_str();
    if (pass) *pass = c.pass() ? 1 : 0;
    if (seconds) *seconds = c.seconds;
    if (report_count) *report_count = c.reports.size();
  });
}

fpp_status fpp_report_set_report(const fpp_report_set* r, size_t i, size_t j, fpp_report* out) {
  return guard([&] {
    need(r, "report set");
    need(out, "out");
    if (i >= r->results.size() || j >= r->results[i].reports.size()) {
      throw fpp::DomainError("report index out of range");
    }
    const auto& rep = r->results[i].reports[j];
    out->test_name = rep.test_name.c_str();
    out->statistic = rep.statistic;
    out->threshold = rep.threshold;
    out->pass = rep.pass ? 1 : 0;
    out->sample_size = rep.sample_size;
    out->note = rep.note.c_str();
  });
}

fpp_status fpp_report_set_to_json(const fpp_report_set* r, char** out) {
  return guard([&] {
    need(r, "report set");
    *need(out, "out") = dup_string(fpp::results_to_json(r->suite, r->results));
  });
}

}  // extern "C"
