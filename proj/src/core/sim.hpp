#ifndef AOIKIT_SIM_HPP
#define AOIKIT_SIM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aoi_types.hpp"
#include "params.hpp"

namespace aoikit {
namespace sim {

struct SimulationConfig {
  SystemParams params;  // n_max/tol unused here; p, service, kernel matter
  long long slots = 0;  // T, per replication
  std::uint64_t seed = 0;
  int replications = 1;
  long long warmup = 0;  // slots discarded per replication

  void validate() const;
};

struct SimulationResult {
  std::vector<std::uint64_t> histogram;  // histogram[i] = |{k: a(k) = i+1}|
  double mean = 0.0;
  long long t_effective = 0;
  std::uint64_t seed = 0;
  std::vector<double> replication_means;
  std::string generator;

  // retained for merge compatibility checks
  double p = 0.0;
  std::string service_json;
  KernelConvention kernel = KernelConvention::Paper;

  int max_observed() const { return static_cast<int>(histogram.size()); }
  AoiDistribution empirical() const;
};

// Runs `replications` independent streams derived from (seed, index) and
// pools them. Deterministic for a fixed config regardless of thread count.
SimulationResult run(const SimulationConfig& config, int threads = 1);

SimulationResult merge(std::span<const SimulationResult> results);

}  // namespace sim
}  // namespace aoikit

#endif
