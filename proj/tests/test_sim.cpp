#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "core/analytic.hpp"
#include "core/sim.hpp"
#include "support/oracles.hpp"

using namespace aoikit;
using namespace aoikit::sim;

namespace {

SimulationConfig make_config(double p, ServiceDistribution svc, long long slots,
                             std::uint64_t seed,
                             KernelConvention kernel = KernelConvention::Paper) {
  SimulationConfig cfg;
  cfg.params.p = p;
  cfg.params.service = std::move(svc);
  cfg.params.n_max = 100;
  cfg.params.kernel = kernel;
  cfg.slots = slots;
  cfg.seed = seed;
  return cfg;
}

std::vector<double> analytic_pmf(double p, ServiceDistribution svc) {
  SystemParams params;
  params.p = p;
  params.service = std::move(svc);
  params.n_max = 400;
  params.tol = 1e-9;
  return analytic::aoi_pmf_general(params).pmf;
}

}  // namespace

TEST_CASE("identical config and seed give a bit-identical result") {
  auto cfg = make_config(0.25, ServiceDistribution::geometric(0.5), 50000, 7);
  cfg.replications = 4;
  auto a = run(cfg, 1);
  auto b = run(cfg, 1);
  CHECK(a.histogram == b.histogram);
  CHECK(a.replication_means == b.replication_means);
  CHECK(a.mean == b.mean);

  SUBCASE("thread count does not change the result") {
    auto c = run(cfg, 3);
    CHECK(a.histogram == c.histogram);
    CHECK(a.replication_means == c.replication_means);
  }
  SUBCASE("a different seed does") {
    cfg.seed = 8;
    CHECK(run(cfg, 1).histogram != a.histogram);
  }
}

TEST_CASE("near-saturated deterministic(1) pins the AoI at 1") {
  auto cfg = make_config(0.999, ServiceDistribution::deterministic(1), 20000, 3);
  auto result = run(cfg);
  CHECK(result.mean == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(result.histogram[0] > 19900u);
}

TEST_CASE("merge identity, pooling, and mismatch checks") {
  auto cfg = make_config(0.25, ServiceDistribution::geometric(0.5), 30000, 11);
  auto r1 = run(cfg);
  cfg.seed = 12;
  auto r2 = run(cfg);

  auto identity = merge(std::array{r1});
  CHECK(identity.histogram == r1.histogram);
  CHECK(identity.mean == r1.mean);

  auto pooled = merge(std::array{r1, r2});
  CHECK(pooled.t_effective == r1.t_effective + r2.t_effective);
  CHECK(pooled.replication_means.size() == 2);
  const double weighted = (r1.mean * r1.t_effective + r2.mean * r2.t_effective) /
                          pooled.t_effective;
  CHECK(pooled.mean == doctest::Approx(weighted).epsilon(1e-12));

  auto other = make_config(0.3, ServiceDistribution::geometric(0.5), 30000, 11);
  auto r3 = run(other);
  CHECK_THROWS_AS(merge(std::array{r1, r3}), std::invalid_argument);
}

TEST_CASE("empirical distribution approaches the analytic pmf") {
  const auto expected = analytic_pmf(0.25, ServiceDistribution::geometric(0.5));
  auto cfg = make_config(0.25, ServiceDistribution::geometric(0.5), 100000, 5);
  const double tv_small = test::tv_distance(run(cfg).empirical().pmf, expected);
  cfg.slots = 1000000;
  const double tv_big = test::tv_distance(run(cfg).empirical().pmf, expected);

  CHECK(tv_small < 3.0 * std::sqrt(std::log(1e5) / 1e5));
  CHECK(tv_big < 3.0 * std::sqrt(std::log(1e6) / 1e6));
  CHECK(tv_big < tv_small);  // O(T^{-1/2}) shrink over a 10x gap

  auto result = run(cfg);
  CHECK(result.mean == doctest::Approx(5.4).epsilon(0.02));
  CHECK(result.empirical().pmf[0] == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("conventions coincide for geometric, shift for deterministic") {
  const long long T = 500000;
  auto geo_paper =
      run(make_config(0.25, ServiceDistribution::geometric(0.5), T, 21));
  auto geo_natural = run(make_config(0.25, ServiceDistribution::geometric(0.5),
                                     T, 22, KernelConvention::Natural));
  CHECK(test::tv_distance(geo_paper.empirical().pmf,
                          geo_natural.empirical().pmf) < 0.01);

  auto det_paper_cfg =
      make_config(0.25, ServiceDistribution::deterministic(2), T, 23);
  auto det_natural_cfg =
      make_config(0.25, ServiceDistribution::deterministic(2), T, 24,
                  KernelConvention::Natural);
  // Discard the start-up transient: the initial age 1 passes through 2 once.
  det_paper_cfg.warmup = 100;
  det_natural_cfg.warmup = 100;
  auto det_paper = run(det_paper_cfg);
  auto det_natural = run(det_natural_cfg);
  // Paper convention never delivers AoI 2; slot-accurate reading does.
  CHECK(det_paper.histogram[1] == 0u);
  CHECK(det_natural.histogram[1] > 0u);
  CHECK(det_paper.histogram[0] == 0u);
  CHECK(det_natural.histogram[0] == 0u);
}

TEST_CASE("warmup discards slots and is validated") {
  auto cfg = make_config(0.25, ServiceDistribution::geometric(0.5), 10000, 9);
  cfg.warmup = 1000;
  auto result = run(cfg);
  CHECK(result.t_effective == 9000);
  std::uint64_t total = 0;
  for (auto c : result.histogram) total += c;
  CHECK(total == 9000u);

  cfg.warmup = 10000;
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
  cfg.warmup = 0;
  cfg.slots = 0;
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
  cfg.slots = 100;
  cfg.replications = 0;
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
}

TEST_CASE("histogram mass equals effective slots and mean matches histogram") {
  auto cfg = make_config(0.4, ServiceDistribution::table({0.3, 0.3, 0.4}),
                         40000, 17);
  cfg.replications = 3;
  auto result = run(cfg);
  std::uint64_t total = 0;
  long double weighted = 0.0;
  for (std::size_t i = 0; i < result.histogram.size(); ++i) {
    total += result.histogram[i];
    weighted += static_cast<long double>(i + 1) * result.histogram[i];
  }
  CHECK(total == static_cast<std::uint64_t>(result.t_effective));
  CHECK(result.mean ==
        doctest::Approx(static_cast<double>(weighted / total)).epsilon(1e-12));
  CHECK(result.generator == "splitmix64");
}
