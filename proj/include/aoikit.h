/* aoikit — discrete-time AoI toolkit for bufferless Ber/G/1/1 status
 * updating: closed-form stationary distributions, a truncated Markov-chain
 * solver, and a slot-level Monte Carlo simulator behind one C API.
 *
 * All functions returning int yield AOI_OK (0) on success; on failure they
 * return a nonzero status and aoi_last_error() carries a message for the
 * calling thread. Handles are freed with their matching *_free function.
 */
#ifndef AOIKIT_H
#define AOIKIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct aoi_service aoi_service;
typedef struct aoi_params aoi_params;
typedef struct aoi_joint aoi_joint;
typedef struct aoi_dist aoi_dist;
typedef struct aoi_sim_result aoi_sim_result;

enum aoi_status {
  AOI_OK = 0,
  AOI_ERR_INVALID = 2,     /* bad arguments / configuration */
  AOI_ERR_CONVERGENCE = 3, /* tolerance or iteration budget exceeded */
  AOI_ERR_DEGENERATE = 5,  /* geo closed form with gamma - p ~ 0 or p >= gamma */
  AOI_ERR_UNREACHABLE = 6, /* conditional query on an unreachable state */
  AOI_ERR_INTERNAL = 7
};

enum aoi_kernel_convention { AOI_KERNEL_PAPER = 0, AOI_KERNEL_NATURAL = 1 };

const char *aoi_last_error(void);
const char *aoi_version(void);

/* ---- service-time distributions ------------------------------------- */

int aoi_service_geometric(double gamma, aoi_service **out);
int aoi_service_deterministic(int k, aoi_service **out);
/* pmf[0] = Pr{B=1}; sum must lie in [1 - tail_tol, 1]. */
int aoi_service_table(const double *pmf, int len, double tail_tol,
                      aoi_service **out);
/* {"kind":"geometric","gamma":0.5} | {"kind":"deterministic","k":2}
 * | {"kind":"table","pmf":[...]} */
int aoi_service_from_json(const char *json, aoi_service **out);
void aoi_service_free(aoi_service *s);

/* Serialized descriptor; valid until the handle is freed. */
const char *aoi_service_json(const aoi_service *s);
double aoi_service_pmf(const aoi_service *s, int j);
double aoi_service_survival(const aoi_service *s, int m); /* Pr{B>m} */
double aoi_service_mean(const aoi_service *s);
/* Pr{B>m|B>m-1} and Pr{B=m|B>m-1}; either out pointer may be NULL. */
int aoi_service_cond(const aoi_service *s, int m, double *cont, double *fin);

/* ---- system parameters ---------------------------------------------- */

/* n_max <= 0 selects the default horizon. The service handle is copied. */
int aoi_params_create(double p, const aoi_service *service, int n_max,
                      double tol, int kernel, aoi_params **out);
void aoi_params_free(aoi_params *params);
int aoi_params_n_max(const aoi_params *params);

/* ---- analytic path (general-service closed forms) -------------------- */

/* F(p,n) with F(p,1)=1; fails with AOI_ERR_INVALID when q_1 = 0. */
int aoi_f_poly(const aoi_params *params, int n, double *out);
/* Rescaled G(p,n) = q_1 F(p,n); finite for any q_1. */
int aoi_g_poly(const aoi_params *params, int n, double *out);

int aoi_analytic_joint(const aoi_params *params, aoi_joint **out);
int aoi_analytic_dist(const aoi_params *params, aoi_dist **out);

/* Marginal of the in-service age: fills pmf_out[0..m_max-1] with Pr{M=m}
 * for m = 1..m_max and *busy_out with Pr{system not idle}. */
int aoi_service_age_marginal(const aoi_params *params, int m_max,
                             double *pmf_out, double *busy_out);

/* ---- Ber/Geo/1/1 closed forms --------------------------------------- */

int aoi_pmf_geo(double p, double gamma, int n, double *out);
int aoi_cdf_geo(double p, double gamma, int k, double *out);
int aoi_mean_geo(double p, double gamma, double *out);
/* Continuous-time M/M/1/1 mean AoI. */
int aoi_mean_mm11(double lambda, double mu, double *out);

/* ---- chain oracle ---------------------------------------------------- */

/* Builds the truncated kernel (bound N on the AoI component) and solves for
 * the stationary vector. Solve diagnostics are read off the joint handle. */
int aoi_chain_solve(const aoi_params *params, int chain_n, aoi_joint **out);

/* Kernel dump for external verification. Two-call pattern: pass NULL arrays
 * to obtain the entry count. */
int aoi_chain_kernel(const aoi_params *params, int chain_n, int *count,
                     int *from_n, int *from_m, int *to_n, int *to_m,
                     double *prob);

/* ---- joint state table ----------------------------------------------- */

int aoi_joint_n_max(const aoi_joint *joint);
double aoi_joint_at(const aoi_joint *joint, int n, int m);
double aoi_joint_tail_mass(const aoi_joint *joint);
/* Chain-solve diagnostics; zero/empty for analytic joints. */
long aoi_joint_iterations(const aoi_joint *joint);
double aoi_joint_residual(const aoi_joint *joint);
double aoi_joint_boundary_mass(const aoi_joint *joint);
const char *aoi_joint_method(const aoi_joint *joint);
/* Row-sum AoI marginal of the table. */
int aoi_joint_aoi_dist(const aoi_joint *joint, aoi_dist **out);
void aoi_joint_free(aoi_joint *joint);

/* ---- AoI distributions ----------------------------------------------- */

int aoi_dist_n_max(const aoi_dist *dist);
double aoi_dist_pmf(const aoi_dist *dist, int n);
double aoi_dist_cdf(const aoi_dist *dist, int k);
double aoi_dist_mean(const aoi_dist *dist);
double aoi_dist_tail(const aoi_dist *dist);
const char *aoi_dist_provenance(const aoi_dist *dist);
void aoi_dist_free(aoi_dist *dist);

/* ---- simulator -------------------------------------------------------- */

/* threads <= 0 means single-threaded. Identical (params, slots, seed,
 * replications, warmup) produce a bit-identical result. */
int aoi_sim_run(const aoi_params *params, long long slots, uint64_t seed,
                int replications, long long warmup, int threads,
                aoi_sim_result **out);
int aoi_sim_merge(const aoi_sim_result *const *results, int count,
                  aoi_sim_result **out);
void aoi_sim_free(aoi_sim_result *result);

int aoi_sim_max_observed(const aoi_sim_result *result);
uint64_t aoi_sim_count(const aoi_sim_result *result, int n);
double aoi_sim_mean(const aoi_sim_result *result);
long long aoi_sim_t_effective(const aoi_sim_result *result);
uint64_t aoi_sim_seed(const aoi_sim_result *result);
const char *aoi_sim_generator(const aoi_sim_result *result);
int aoi_sim_replications(const aoi_sim_result *result);
double aoi_sim_replication_mean(const aoi_sim_result *result, int index);
/* Empirical AoI distribution (provenance "empirical"). */
int aoi_sim_dist(const aoi_sim_result *result, aoi_dist **out);

#ifdef __cplusplus
}
#endif

#endif /* AOIKIT_H */
