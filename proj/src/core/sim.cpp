#include "sim.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace aoikit {
namespace sim {

namespace {

// splitmix64: per-replication streams come from disjoint counter offsets.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double u01() { return (next() >> 11) * 0x1.0p-53; }
};

std::uint64_t stream_seed(std::uint64_t seed, int replication) {
  SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL *
                         static_cast<std::uint64_t>(replication + 1)));
  return mix.next();
}

class ServiceSampler {
 public:
  explicit ServiceSampler(const ServiceDistribution& svc) : svc_(svc) {
    if (svc.kind() == ServiceKind::Table) {
      cdf_.reserve(svc.support_max());
      double cum = 0.0;
      for (int j = 1; j <= svc.support_max(); ++j) {
        cum += svc.pmf(j);
        cdf_.push_back(cum);
      }
    }
    if (svc.kind() != ServiceKind::Geometric) {
      finish_.assign(svc.support_max() + 1, 1.0);
      for (int m = 1; m <= svc.support_max(); ++m)
        finish_[m] = svc.survival(m - 1) > 0.0 ? svc.cond_finish(m) : 1.0;
    }
  }

  // Pr{B = m | B > m-1}
  double finish(int m) const {
    if (svc_.kind() == ServiceKind::Geometric) return svc_.gamma();
    return m < static_cast<int>(finish_.size()) ? finish_[m] : 1.0;
  }

  int draw(SplitMix64& rng) const {
    switch (svc_.kind()) {
      case ServiceKind::Geometric: {
        const double u = rng.u01();
        return 1 + static_cast<int>(std::log1p(-u) /
                                    std::log1p(-svc_.gamma()));
      }
      case ServiceKind::Deterministic:
        return svc_.det_k();
      case ServiceKind::Table: {
        const double u = rng.u01() * cdf_.back();
        int lo = 0, hi = static_cast<int>(cdf_.size()) - 1;
        while (lo < hi) {
          const int mid = (lo + hi) / 2;
          if (u < cdf_[mid]) hi = mid; else lo = mid + 1;
        }
        return lo + 1;
      }
    }
    return 1;
  }

 private:
  const ServiceDistribution& svc_;
  std::vector<double> cdf_;
  std::vector<double> finish_;
};

struct RepOutcome {
  std::vector<std::uint64_t> histogram;
  double mean = 0.0;
};

RepOutcome run_replication(const SimulationConfig& cfg,
                           const ServiceSampler& sampler,
                           std::uint64_t rep_seed) {
  SplitMix64 rng(rep_seed);
  const double p = cfg.params.p;
  const double q1 = cfg.params.service.q1();
  const bool paper = cfg.params.kernel == KernelConvention::Paper;

  RepOutcome out;
  out.histogram.reserve(64);
  long long aoi_sum = 0;

  // a(0) = 1, system empty.
  long long n = 1;
  int m = 0;          // Paper: recorded in-service age
  bool busy = false;  // Natural: packet present
  int srv_age = 0, srv_total = 0;

  for (long long k = 0; k < cfg.slots; ++k) {
    if (paper) {
      if (m == 0) {
        if (rng.u01() < p) {
          if (rng.u01() < q1) {
            n = 1;
          } else {
            ++n;
            m = 1;
          }
        } else {
          ++n;
        }
      } else {
        if (rng.u01() < sampler.finish(m)) {
          n = m + 1;
          m = 0;
        } else {
          ++n;
          ++m;
        }
      }
    } else {
      if (!busy && rng.u01() < p) {
        busy = true;
        srv_total = sampler.draw(rng);
        srv_age = 0;
      }
      if (busy) {
        ++srv_age;
        if (srv_age == srv_total) {
          n = srv_age;
          busy = false;
        } else {
          ++n;
        }
      } else {
        ++n;
      }
    }
    if (k < cfg.warmup) continue;
    if (n > static_cast<long long>(out.histogram.size()))
      out.histogram.resize(n, 0);
    ++out.histogram[n - 1];
    aoi_sum += n;
  }
  const long long t_eff = cfg.slots - cfg.warmup;
  out.mean = static_cast<double>(aoi_sum) / static_cast<double>(t_eff);
  return out;
}

}  // namespace

void SimulationConfig::validate() const {
  if (!(params.p > 0.0) || !(params.p < 1.0))
    throw std::invalid_argument("sim: p must be in (0,1)");
  if (slots < 1) throw std::invalid_argument("sim: T must be >= 1");
  if (warmup < 0 || warmup >= slots)
    throw std::invalid_argument("sim: need 0 <= warmup < T");
  if (replications < 1)
    throw std::invalid_argument("sim: replications must be >= 1");
}

AoiDistribution SimulationResult::empirical() const {
  AoiDistribution dist;
  dist.provenance = "empirical";
  dist.pmf.resize(histogram.size());
  dist.cdf.resize(histogram.size());
  double cum = 0.0;
  for (std::size_t i = 0; i < histogram.size(); ++i) {
    dist.pmf[i] = static_cast<double>(histogram[i]) /
                  static_cast<double>(t_effective);
    cum += dist.pmf[i];
    dist.cdf[i] = cum;
  }
  dist.tail = 0.0;
  dist.mean = mean;
  return dist;
}

SimulationResult run(const SimulationConfig& config, int threads) {
  config.validate();
  const ServiceSampler sampler(config.params.service);
  const int reps = config.replications;

  std::vector<RepOutcome> outcomes(reps);
  auto work = [&](int first, int step) {
    for (int r = first; r < reps; r += step)
      outcomes[r] =
          run_replication(config, sampler, stream_seed(config.seed, r));
  };
  const int nthreads = std::max(1, std::min(threads, reps));
  if (nthreads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t, nthreads);
    for (auto& th : pool) th.join();
  }

  SimulationResult result;
  result.seed = config.seed;
  result.generator = "splitmix64";
  result.p = config.params.p;
  result.service_json = config.params.service.to_json();
  result.kernel = config.params.kernel;
  const long long t_eff = config.slots - config.warmup;
  for (const RepOutcome& o : outcomes) {
    if (o.histogram.size() > result.histogram.size())
      result.histogram.resize(o.histogram.size(), 0);
    for (std::size_t i = 0; i < o.histogram.size(); ++i)
      result.histogram[i] += o.histogram[i];
    result.replication_means.push_back(o.mean);
    result.t_effective += t_eff;
  }
  long double weighted = 0.0;
  for (std::size_t i = 0; i < result.histogram.size(); ++i)
    weighted += static_cast<long double>(i + 1) * result.histogram[i];
  result.mean = static_cast<double>(weighted / result.t_effective);
  return result;
}

SimulationResult merge(std::span<const SimulationResult> results) {
  if (results.empty()) throw std::invalid_argument("merge: no results");
  SimulationResult out = results.front();
  for (std::size_t i = 1; i < results.size(); ++i) {
    const SimulationResult& r = results[i];
    if (r.p != out.p || r.service_json != out.service_json ||
        r.kernel != out.kernel)
      throw std::invalid_argument("merge: mismatched simulation parameters");
    if (r.histogram.size() > out.histogram.size())
      out.histogram.resize(r.histogram.size(), 0);
    for (std::size_t j = 0; j < r.histogram.size(); ++j)
      out.histogram[j] += r.histogram[j];
    out.replication_means.insert(out.replication_means.end(),
                                 r.replication_means.begin(),
                                 r.replication_means.end());
    out.t_effective += r.t_effective;
  }
  long double weighted = 0.0;
  for (std::size_t i = 0; i < out.histogram.size(); ++i)
    weighted += static_cast<long double>(i + 1) * out.histogram[i];
  out.mean = static_cast<double>(weighted / out.t_effective);
  return out;
}

}  // namespace sim
}  // namespace aoikit
