#include "aoikit.h"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/analytic.hpp"
#include "core/chain.hpp"
#include "core/params.hpp"
#include "core/service_dist.hpp"
#include "core/sim.hpp"

struct aoi_service {
  aoikit::ServiceDistribution dist;
  std::string json;
};

struct aoi_params {
  aoikit::SystemParams params;
};

struct aoi_joint {
  aoikit::JointStateTable table;
  aoikit::chain::StationaryReport report;
  std::string provenance;
};

struct aoi_dist {
  aoikit::AoiDistribution dist;
};

struct aoi_sim_result {
  aoikit::sim::SimulationResult result;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return AOI_OK;
  } catch (const aoikit::analytic::degenerate_error& e) {
    g_last_error = e.what();
    return AOI_ERR_DEGENERATE;
  } catch (const aoikit::analytic::convergence_error& e) {
    g_last_error = e.what();
    return AOI_ERR_CONVERGENCE;
  } catch (const aoikit::chain::convergence_error& e) {
    g_last_error = e.what();
    return AOI_ERR_CONVERGENCE;
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return AOI_ERR_UNREACHABLE;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return AOI_ERR_INVALID;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AOI_ERR_INTERNAL;
  }
}

int require_out(const void* out) {
  if (out) return AOI_OK;
  g_last_error = "null output pointer";
  return AOI_ERR_INVALID;
}

aoi_service* wrap(aoikit::ServiceDistribution d) {
  auto* s = new aoi_service{std::move(d), {}};
  s->json = s->dist.to_json();
  return s;
}

}  // namespace

extern "C" {

const char* aoi_last_error(void) { return g_last_error.c_str(); }

const char* aoi_version(void) { return "0.1.0"; }

/* ---- service ---- */

int aoi_service_geometric(double gamma, aoi_service** out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] {
    *out = wrap(aoikit::ServiceDistribution::geometric(gamma));
  });
}

int aoi_service_deterministic(int k, aoi_service** out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] {
    *out = wrap(aoikit::ServiceDistribution::deterministic(k));
  });
}

int aoi_service_table(const double* pmf, int len, double tail_tol,
                      aoi_service** out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] {
    if (!pmf || len < 1) throw std::invalid_argument("table service: no pmf");
    *out = wrap(aoikit::ServiceDistribution::table(
        std::vector<double>(pmf, pmf + len), tail_tol));
  });
}

int aoi_service_from_json(const char* json, aoi_service** out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] {
    if (!json) throw std::invalid_argument("service descriptor: null");
    *out = wrap(aoikit::ServiceDistribution::from_json(json));
  });
}

void aoi_service_free(aoi_service* s) { delete s; }

const char* aoi_service_json(const aoi_service* s) { return s->json.c_str(); }

double aoi_service_pmf(const aoi_service* s, int j) { return s->dist.pmf(j); }

double aoi_service_survival(const aoi_service* s, int m) {
  return m >= 0 ? s->dist.survival(m) : 0.0;
}

double aoi_service_mean(const aoi_service* s) { return s->dist.mean(); }

int aoi_service_cond(const aoi_service* s, int m, double* cont, double* fin) {
  return guarded([&] {
    const double c = s->dist.cond_continue(m);
    if (cont) *cont = c;
    if (fin) *fin = 1.0 - c;
  });
}

/* ---- params ---- */

int aoi_params_create(double p, const aoi_service* service, int n_max,
                      double tol, int kernel, aoi_params** out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] {
    if (!service) throw std::invalid_argument("params: null service");
    if (kernel != AOI_KERNEL_PAPER && kernel != AOI_KERNEL_NATURAL)
      throw std::invalid_argument("params: unknown kernel convention");
    aoikit::SystemParams params;
    params.p = p;
    params.service = service->dist;
    params.n_max = n_max > 0
                       ? n_max
                       : aoikit::SystemParams::default_n_max(p, service->dist);
    params.tol = tol > 0.0 ? tol : 1e-9;
    params.kernel = kernel == AOI_KERNEL_PAPER
                        ? aoikit::KernelConvention::Paper
                        : aoikit::KernelConvention::Natural;
    params.validate();
    *out = new aoi_params{std::move(params)};
  });
}

void aoi_params_free(aoi_params* params) { delete params; }

int aoi_params_n_max(const aoi_params* params) { return params->params.n_max; }

/* ---- analytic ---- */

int aoi_f_poly(const aoi_params* params, int n, double* out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] {
    *out = aoikit::analytic::f_poly(params->params.p, params->params.service, n);
  });
}

int aoi_g_poly(const aoi_params* params, int n, double* out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] {
    *out = aoikit::analytic::g_poly(params->params.p, params->params.service, n);
  });
}

int aoi_analytic_joint(const aoi_params* params, aoi_joint** out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] {
    auto table = aoikit::analytic::stationary_general(params->params);
    *out = new aoi_joint{std::move(table), {}, "analytic"};
  });
}

int aoi_analytic_dist(const aoi_params* params, aoi_dist** out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] {
    *out = new aoi_dist{aoikit::analytic::aoi_pmf_general(params->params)};
  });
}

int aoi_service_age_marginal(const aoi_params* params, int m_max,
                             double* pmf_out, double* busy_out) {
  return guarded([&] {
    auto marginal = aoikit::analytic::service_age_marginal(params->params, m_max);
    if (pmf_out)
      std::memcpy(pmf_out, marginal.pmf.data(), sizeof(double) * m_max);
    if (busy_out) *busy_out = marginal.busy;
  });
}

/* ---- geo closed forms ---- */

int aoi_pmf_geo(double p, double gamma, int n, double* out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] { *out = aoikit::analytic::aoi_pmf_geo(p, gamma, n); });
}

int aoi_cdf_geo(double p, double gamma, int k, double* out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] { *out = aoikit::analytic::aoi_cdf_geo(p, gamma, k); });
}

int aoi_mean_geo(double p, double gamma, double* out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] { *out = aoikit::analytic::mean_aoi_geo(p, gamma); });
}

int aoi_mean_mm11(double lambda, double mu, double* out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] { *out = aoikit::analytic::mean_aoi_mm11(lambda, mu); });
}

/* ---- chain ---- */

int aoi_chain_solve(const aoi_params* params, int chain_n, aoi_joint** out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] {
    aoikit::chain::KernelSpec spec{params->params, chain_n};
    auto kernel = aoikit::chain::Kernel::build(spec);
    auto [table, report] = aoikit::chain::solve_stationary(kernel);
    *out = new aoi_joint{std::move(table), std::move(report), "chain"};
  });
}

int aoi_chain_kernel(const aoi_params* params, int chain_n, int* count,
                     int* from_n, int* from_m, int* to_n, int* to_m,
                     double* prob) {
  if (int rc = require_out(count)) return rc;
  return guarded([&] {
    aoikit::chain::KernelSpec spec{params->params, chain_n};
    auto entries = aoikit::chain::Kernel::build(spec).entries();
    if (from_n && from_m && to_n && to_m && prob) {
      const int cap = *count;
      const int n = std::min<int>(cap, static_cast<int>(entries.size()));
      for (int i = 0; i < n; ++i) {
        from_n[i] = entries[i].from_n;
        from_m[i] = entries[i].from_m;
        to_n[i] = entries[i].to_n;
        to_m[i] = entries[i].to_m;
        prob[i] = entries[i].prob;
      }
    }
    *count = static_cast<int>(entries.size());
  });
}

/* ---- joint ---- */

int aoi_joint_n_max(const aoi_joint* joint) { return joint->table.n_max; }

double aoi_joint_at(const aoi_joint* joint, int n, int m) {
  return joint->table.at(n, m);
}

double aoi_joint_tail_mass(const aoi_joint* joint) {
  return joint->table.tail_mass;
}

long aoi_joint_iterations(const aoi_joint* joint) {
  return joint->report.iterations;
}

double aoi_joint_residual(const aoi_joint* joint) {
  return joint->report.residual;
}

double aoi_joint_boundary_mass(const aoi_joint* joint) {
  return joint->report.boundary_mass;
}

const char* aoi_joint_method(const aoi_joint* joint) {
  return joint->report.method.c_str();
}

int aoi_joint_aoi_dist(const aoi_joint* joint, aoi_dist** out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] {
    if (joint->provenance == "chain")
      *out = new aoi_dist{aoikit::chain::aoi_marginal(joint->table)};
    else
      *out = new aoi_dist{
          aoikit::analytic::aoi_from_joint(joint->table, joint->provenance)};
  });
}

void aoi_joint_free(aoi_joint* joint) { delete joint; }

/* ---- dist ---- */

int aoi_dist_n_max(const aoi_dist* dist) { return dist->dist.n_max(); }

double aoi_dist_pmf(const aoi_dist* dist, int n) { return dist->dist.pmf_at(n); }

double aoi_dist_cdf(const aoi_dist* dist, int k) { return dist->dist.cdf_at(k); }

double aoi_dist_mean(const aoi_dist* dist) { return dist->dist.mean; }

double aoi_dist_tail(const aoi_dist* dist) { return dist->dist.tail; }

const char* aoi_dist_provenance(const aoi_dist* dist) {
  return dist->dist.provenance.c_str();
}

void aoi_dist_free(aoi_dist* dist) { delete dist; }

/* ---- sim ---- */

int aoi_sim_run(const aoi_params* params, long long slots, uint64_t seed,
                int replications, long long warmup, int threads,
                aoi_sim_result** out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] {
    aoikit::sim::SimulationConfig cfg;
    cfg.params = params->params;
    cfg.slots = slots;
    cfg.seed = seed;
    cfg.replications = replications;
    cfg.warmup = warmup;
    *out = new aoi_sim_result{aoikit::sim::run(cfg, std::max(1, threads))};
  });
}

int aoi_sim_merge(const aoi_sim_result* const* results, int count,
                  aoi_sim_result** out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] {
    if (!results || count < 1)
      throw std::invalid_argument("merge: no results");
    std::vector<aoikit::sim::SimulationResult> inputs;
    inputs.reserve(count);
    for (int i = 0; i < count; ++i) inputs.push_back(results[i]->result);
    *out = new aoi_sim_result{aoikit::sim::merge(inputs)};
  });
}

void aoi_sim_free(aoi_sim_result* result) { delete result; }

int aoi_sim_max_observed(const aoi_sim_result* result) {
  return result->result.max_observed();
}

uint64_t aoi_sim_count(const aoi_sim_result* result, int n) {
  if (n < 1 || n > result->result.max_observed()) return 0;
  return result->result.histogram[n - 1];
}

double aoi_sim_mean(const aoi_sim_result* result) { return result->result.mean; }

long long aoi_sim_t_effective(const aoi_sim_result* result) {
  return result->result.t_effective;
}

uint64_t aoi_sim_seed(const aoi_sim_result* result) {
  return result->result.seed;
}

const char* aoi_sim_generator(const aoi_sim_result* result) {
  return result->result.generator.c_str();
}

int aoi_sim_replications(const aoi_sim_result* result) {
  return static_cast<int>(result->result.replication_means.size());
}

double aoi_sim_replication_mean(const aoi_sim_result* result, int index) {
  const auto& means = result->result.replication_means;
  if (index < 0 || index >= static_cast<int>(means.size())) return 0.0;
  return means[index];
}

int aoi_sim_dist(const aoi_sim_result* result, aoi_dist** out) {
  if (int rc = require_out(out)) return rc;
  return guarded([&] { *out = new aoi_dist{result->result.empirical()}; });
}

}  // extern "C"
