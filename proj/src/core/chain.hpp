#ifndef AOIKIT_CHAIN_HPP
#define AOIKIT_CHAIN_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aoi_types.hpp"
#include "params.hpp"

namespace aoikit {
namespace chain {

struct KernelSpec {
  SystemParams params;
  int N = 0;  // truncation bound on the AoI component

  void validate() const {
    params.validate();
    if (N < 2) throw std::invalid_argument("kernel: N must be >= 2");
  }
};

struct KernelEntry {
  int from_n, from_m, to_n, to_m;
  double prob;
};

// Sparse row-stochastic kernel over the truncated age-state space
// {(n,m): 1 <= n <= N, 0 <= m < n}, unreachable-m rows pruned. States are
// enumerated in lexicographic (n,m) order; transitions that would advance n
// past N are clamped to n = N so mass is conserved at the boundary.
class Kernel {
 public:
  static Kernel build(const KernelSpec& spec);

  int N() const { return N_; }
  int state_count() const { return static_cast<int>(states_.size()); }

  int index_of(int n, int m) const;  // -1 if not a state
  std::pair<int, int> state_at(int idx) const { return states_[idx]; }

  std::vector<KernelEntry> entries() const;

  // y = x P
  void apply(const std::vector<double>& x, std::vector<double>& y) const;

  double row_sum(int idx) const;

 private:
  int N_ = 0;
  int m_cap_ = -1;  // largest valid m; -1 = bounded only by n
  std::vector<int> row_offset_;              // row_offset_[n] = index of (n,0)
  std::vector<std::pair<int, int>> states_;  // index -> (n,m)
  std::vector<int> edge_start_;              // CSR offsets, size states+1
  std::vector<int> col_;                     // target state index
  std::vector<double> prob_;
};

struct StationaryReport {
  long iterations = 0;
  double residual = 0.0;       // L1 distance of pi vs pi P
  double boundary_mass = 0.0;  // stationary mass at n = N
  std::string method;          // "power" | "sparse-lu"
};

struct SolveOptions {
  double target_residual = 1e-13;
  long max_iterations = 200000;
  // Below this state count the stationary vector comes from a direct sparse
  // solve of (P^T - I) pi = 0 with normalization.
  int direct_solve_limit = 10000;
};

struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<JointStateTable, StationaryReport> solve_stationary(
    const Kernel& kernel, const SolveOptions& opts = {});

// Row-sum marginal Pr{AoI=n} = sum_m pi_(n,m), provenance "chain".
AoiDistribution aoi_marginal(const JointStateTable& table);

}  // namespace chain
}  // namespace aoikit

#endif
