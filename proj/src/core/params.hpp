#ifndef AOIKIT_PARAMS_HPP
#define AOIKIT_PARAMS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "service_dist.hpp"

namespace aoikit {

// Two readings of the per-slot service-completion conditioning. Identical for
// memoryless service; shifted by one slot otherwise.
enum class KernelConvention { Paper, Natural };

struct SystemParams {
  double p = 0.0;  // Bernoulli arrival probability per slot
  ServiceDistribution service = ServiceDistribution::geometric(0.5);
  int n_max = 0;       // truncation horizon for emitted pmf
  double tol = 1e-9;   // tail-mass tolerance
  KernelConvention kernel = KernelConvention::Paper;

  void validate() const {
    if (!(p > 0.0) || !(p < 1.0))
      throw std::invalid_argument("params: p must be in (0,1)");
    if (n_max < 1) throw std::invalid_argument("params: n_max must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("params: tol must be > 0");
  }

  static int default_n_max(double p, const ServiceDistribution& service) {
    const double horizon = 10.0 * service.mean() / std::min(p, 1.0 - p);
    return std::max(200, static_cast<int>(std::ceil(horizon)));
  }
};

}  // namespace aoikit

#endif
