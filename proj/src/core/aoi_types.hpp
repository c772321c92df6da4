#ifndef AOIKIT_AOI_TYPES_HPP
#define AOIKIT_AOI_TYPES_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace aoikit {

// Stationary probabilities pi_(n,m) over age-states (n,m), 1 <= n <= n_max,
// 0 <= m < n, stored as a row-major triangle in lexicographic (n,m) order.
struct JointStateTable {
  int n_max = 0;
  std::vector<double> values;
  double tail_mass = 0.0;

  static std::size_t index(int n, int m) {
    // row n starts at 0 + 1 + ... + (n-1) = n(n-1)/2
    return static_cast<std::size_t>(n) * (n - 1) / 2 + m;
  }

  double at(int n, int m) const {
    if (n < 1 || n > n_max || m < 0 || m >= n) return 0.0;
    return values[index(n, m)];
  }

  double& ref(int n, int m) { return values[index(n, m)]; }

  void resize(int nmax) {
    n_max = nmax;
    values.assign(static_cast<std::size_t>(nmax) * (nmax + 1) / 2, 0.0);
  }

  double row_sum(int n) const {
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += values[index(n, m)];
    return s;
  }

  double total_mass() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
};

// Stationary AoI distribution: pmf[i] = Pr{AoI = i+1}.
struct AoiDistribution {
  std::vector<double> pmf;
  std::vector<double> cdf;
  double mean = 0.0;
  double tail = 0.0;
  std::string provenance;  // "analytic" | "chain" | "empirical"

  int n_max() const { return static_cast<int>(pmf.size()); }
  double pmf_at(int n) const {
    return (n >= 1 && n <= n_max()) ? pmf[n - 1] : 0.0;
  }
  double cdf_at(int k) const {
    if (k < 1) return 0.0;
    return k <= n_max() ? cdf[k - 1] : cdf.back();
  }
};

}  // namespace aoikit

#endif
