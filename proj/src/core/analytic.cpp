#include "analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace aoikit {
namespace analytic {

std::vector<double> g_poly_prefix(double p, const ServiceDistribution& service,
                                  int n_max) {
  if (n_max < 1) throw std::invalid_argument("g_poly: n must be >= 1");
  const double q1 = service.q1();
  std::vector<double> g(n_max);
  g[0] = q1;
  for (int n = 2; n <= n_max; ++n)
    g[n - 1] = (1.0 - p) * g[n - 2] + (1.0 - q1) * service.pmf(n - 1);
  return g;
}

double g_poly(double p, const ServiceDistribution& service, int n) {
  return g_poly_prefix(p, service, n).back();
}

double f_poly(double p, const ServiceDistribution& service, int n) {
  const double q1 = service.q1();
  if (q1 == 0.0)
    throw std::invalid_argument(
        "f_poly: q_1 = 0, use the rescaled g_poly instead");
  return g_poly(p, service, n) / q1;
}

double normalization(double p, const ServiceDistribution& service) {
  return 1.0 + p * (1.0 - service.q1()) * service.mean();
}

JointStateTable stationary_general(const SystemParams& params) {
  params.validate();
  const double p = params.p;
  const ServiceDistribution& svc = params.service;
  const double q1 = svc.q1();
  const double d = normalization(p, svc);

  const std::vector<double> g = g_poly_prefix(p, svc, params.n_max);

  JointStateTable table;
  table.resize(params.n_max);
  for (int n = 1; n <= params.n_max; ++n) {
    table.ref(n, 0) = p * g[n - 1] / d;
    for (int m = 1; m < n; ++m) {
      const double surv = svc.survival(m - 1);
      if (surv == 0.0) continue;
      table.ref(n, m) = p * p * (1.0 - q1) * g[n - m - 1] * surv / d;
    }
  }
  table.tail_mass = std::max(0.0, 1.0 - table.total_mass());
  if (table.tail_mass > params.tol)
    throw convergence_error("stationary_general: tail mass " +
                            std::to_string(table.tail_mass) +
                            " exceeds tol at n_max=" +
                            std::to_string(params.n_max) +
                            "; increase n_max");
  return table;
}

AoiDistribution aoi_from_joint(const JointStateTable& table,
                               const std::string& provenance) {
  AoiDistribution dist;
  dist.provenance = provenance;
  dist.pmf.resize(table.n_max);
  dist.cdf.resize(table.n_max);
  double cum = 0.0;
  double mean = 0.0;
  for (int n = 1; n <= table.n_max; ++n) {
    const double pn = table.row_sum(n);
    dist.pmf[n - 1] = pn;
    cum += pn;
    dist.cdf[n - 1] = cum;
    mean += n * pn;
  }
  dist.tail = std::max(0.0, 1.0 - cum);
  dist.mean = mean;
  return dist;
}

AoiDistribution aoi_pmf_general(const SystemParams& params) {
  return aoi_from_joint(stationary_general(params), "analytic");
}

namespace {

void check_geo_args(double p, double gamma) {
  if (!(p > 0.0) || !(p < 1.0) || !(gamma > 0.0) || !(gamma < 1.0))
    throw std::invalid_argument("geo closed form: need p, gamma in (0,1)");
  if (gamma - p < kDegenerateEps)
    throw degenerate_error(
        "geo closed form: gamma - p < 1e-9 makes the (gamma-p) denominator "
        "degenerate; use the general path");
}

}  // namespace

double aoi_pmf_geo(double p, double gamma, int n) {
  check_geo_args(p, gamma);
  if (n < 1) return 0.0;
  const double denom = p + gamma - p * gamma;
  const double gp = gamma - p;
  const double a = std::pow(1.0 - p, n);
  const double b = std::pow(1.0 - gamma, n);
  return p * (1.0 - p) * gamma * gamma * gamma * (a - b) / (denom * gp * gp) -
         p * p * gamma * gamma * n * b / (denom * gp);
}

double aoi_cdf_geo(double p, double gamma, int k) {
  check_geo_args(p, gamma);
  if (k < 1) return 0.0;
  const double denom = p + gamma - p * gamma;
  const double gp = gamma - p;
  const double a = std::pow(1.0 - p, k + 1);
  const double b = std::pow(1.0 - gamma, k + 1);
  return 1.0 -
         (1.0 - p) * gamma * gamma * (a * gamma - p * b) / (denom * gp * gp) +
         p * p * (1.0 + k * gamma) * b / (denom * gp);
}

double mean_aoi_geo(double p, double gamma) {
  check_geo_args(p, gamma);
  const double rho = p / gamma;
  return (1.0 / gamma) *
         ((1.0 - gamma) + 1.0 / rho + rho / (1.0 / (1.0 - gamma) + rho));
}

double mean_aoi_mm11(double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0))
    throw std::invalid_argument("mm11 mean: rates must be positive");
  const double rho = lambda / mu;
  return (1.0 / mu) * (1.0 + 1.0 / rho + rho / (1.0 + rho));
}

ServiceAgeMarginal service_age_marginal(const SystemParams& params, int m_max) {
  params.validate();
  if (m_max < 1) throw std::invalid_argument("marginal: m_max must be >= 1");
  const double p = params.p;
  const ServiceDistribution& svc = params.service;
  const double q1 = svc.q1();
  const double d = normalization(p, svc);

  // Summing pi_(n,m) over n > m telescopes to p (1-q1) Pr{B>m-1} sum_n pi_(n,0)
  // and sum_n pi_(n,0) = 1/D.
  ServiceAgeMarginal out;
  out.busy = 1.0 - 1.0 / d;
  out.pmf.resize(m_max);
  for (int m = 1; m <= m_max; ++m)
    out.pmf[m - 1] = p * (1.0 - q1) * svc.survival(m - 1) / d;
  return out;
}

}  // namespace analytic
}  // namespace aoikit
