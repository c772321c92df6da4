// Test-only oracles, independent of the implementation paths they check.
#ifndef AOIKIT_TESTS_ORACLES_HPP
#define AOIKIT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/analytic.hpp"
#include "core/aoi_types.hpp"
#include "core/params.hpp"

namespace aoikit::test {

// Substitutes a joint table into each line of the stationary system of the
// Paper kernel and returns the largest per-state residual over n <= n_check.
// Infinite sums are truncated at the table horizon.
inline double balance_residual(const JointStateTable& table,
                               const SystemParams& params, int n_check) {
  const ServiceDistribution& svc = params.service;
  const double p = params.p;
  double worst = 0.0;
  auto track = [&](double r) { worst = std::max(worst, std::fabs(r)); };

  double total_m0 = 0.0;
  for (int n = 1; n <= table.n_max; ++n) total_m0 += table.at(n, 0);

  for (int n = 2; n <= n_check; ++n) {
    // line 1: pi_(n,m) = pi_(n-1,m-1) Pr{B>m-1|B>m-2}, n > m >= 2
    for (int m = 2; m < n; ++m) {
      const double expected = svc.survival(m - 2) > 0.0
                                  ? table.at(n - 1, m - 1) * svc.cond_continue(m - 1)
                                  : 0.0;
      track(table.at(n, m) - expected);
    }
    // line 2: pi_(n,1) = pi_(n-1,0) p Pr{B>1}
    track(table.at(n, 1) - table.at(n - 1, 0) * p * svc.survival(1));
    // line 3: pi_(n,0) = pi_(n-1,0)(1-p) + (sum_{k>=n} pi_(k,n-1)) Pr{B=n-1|B>n-2}
    double inflow = table.at(n - 1, 0) * (1.0 - p);
    if (svc.survival(n - 2) > 0.0) {
      double col = 0.0;
      for (int k = n; k <= table.n_max; ++k) col += table.at(k, n - 1);
      inflow += col * svc.cond_finish(n - 1);
    }
    track(table.at(n, 0) - inflow);
  }
  // line 4: pi_(1,0) = (sum_k pi_(k,0)) p q_1
  track(table.at(1, 0) - total_m0 * p * svc.q1());
  return worst;
}

// Total-variation distance between two pmfs given as 1-based-from-index-0
// vectors; mass beyond either support counts fully.
inline double tv_distance(const std::vector<double>& a,
                          const std::vector<double>& b) {
  const std::size_t len = std::max(a.size(), b.size());
  double tv = 0.0, mass_a = 0.0, mass_b = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double pa = i < a.size() ? a[i] : 0.0;
    const double pb = i < b.size() ? b[i] : 0.0;
    tv += std::fabs(pa - pb);
    mass_a += pa;
    mass_b += pb;
  }
  tv += (1.0 - mass_a) + (1.0 - mass_b);
  return tv / 2.0;
}

}  // namespace aoikit::test

#endif
