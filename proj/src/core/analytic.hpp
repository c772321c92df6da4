#ifndef AOIKIT_ANALYTIC_HPP
#define AOIKIT_ANALYTIC_HPP

#include <vector>

#include "aoi_types.hpp"
#include "params.hpp"

namespace aoikit {
namespace analytic {

// Closed-form geo formulas divide by (gamma - p); below this gap callers are
// redirected to the general path, which has no such singularity.
inline constexpr double kDegenerateEps = 1e-9;

// F(p,1) = 1; F(p,n) = (1-p) F(p,n-1) + ((1-q1)/q1) q_{n-1}. Requires q1 > 0.
double f_poly(double p, const ServiceDistribution& service, int n);

// Rescaled G(p,n) := q1 F(p,n), well defined and continuous at q1 = 0.
// G(p,1) = q1; G(p,n) = (1-p) G(p,n-1) + (1-q1) q_{n-1}.
double g_poly(double p, const ServiceDistribution& service, int n);

// G(p,1..n_max) in one O(n_max) pass.
std::vector<double> g_poly_prefix(double p, const ServiceDistribution& service,
                                  int n_max);

// Normalization constant D = 1 + p (1-q1) E[B].
double normalization(double p, const ServiceDistribution& service);

// Stationary probabilities pi_(n,0) = p G(p,n) / D and
// pi_(n,m) = p^2 (1-q1) G(p,n-m) Pr{B>m-1} / D, filled for n <= n_max.
// Throws convergence_error if the tail mass at n_max exceeds params.tol.
JointStateTable stationary_general(const SystemParams& params);

// Row-sums of the joint table: Pr{AoI=n} = sum_m pi_(n,m).
AoiDistribution aoi_pmf_general(const SystemParams& params);
AoiDistribution aoi_from_joint(const JointStateTable& table,
                               const std::string& provenance);

// Ber/Geo/1/1 closed forms. All require 0 < p < gamma < 1 with
// gamma - p >= kDegenerateEps; otherwise degenerate_error is thrown.
double aoi_pmf_geo(double p, double gamma, int n);
double aoi_cdf_geo(double p, double gamma, int k);
double mean_aoi_geo(double p, double gamma);

// Continuous-time M/M/1/1 mean AoI, for the discrete-to-continuous sweep.
double mean_aoi_mm11(double lambda, double mu);

struct ServiceAgeMarginal {
  std::vector<double> pmf;  // pmf[i] = Pr{M = i+1}
  double busy = 0.0;        // Pr{system is not idle}
};

// Marginal of the in-service age M: Pr{M=m} = p (1-q1) Pr{B>m-1} / D,
// busy = 1 - 1/D. Closed form, no truncation beyond m_max.
ServiceAgeMarginal service_age_marginal(const SystemParams& params, int m_max);

struct degenerate_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace analytic
}  // namespace aoikit

#endif
