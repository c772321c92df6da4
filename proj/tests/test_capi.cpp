#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <aoikit.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace {

struct Handles {
  aoi_service* svc = nullptr;
  aoi_params* params = nullptr;
  ~Handles() {
    aoi_params_free(params);
    aoi_service_free(svc);
  }
};

}  // namespace

TEST_CASE("service handles: create, query, serialize") {
  Handles h;
  REQUIRE(aoi_service_geometric(0.5, &h.svc) == AOI_OK);
  CHECK(aoi_service_survival(h.svc, 2) == doctest::Approx(0.25));
  CHECK(aoi_service_mean(h.svc) == doctest::Approx(2.0));
  CHECK(aoi_service_pmf(h.svc, 1) == doctest::Approx(0.5));

  double cont = 0, fin = 0;
  REQUIRE(aoi_service_cond(h.svc, 3, &cont, &fin) == AOI_OK);
  CHECK(cont + fin == 1.0);
  CHECK(fin == doctest::Approx(0.5));

  const std::string json = aoi_service_json(h.svc);
  aoi_service* copy = nullptr;
  REQUIRE(aoi_service_from_json(json.c_str(), &copy) == AOI_OK);
  CHECK(aoi_service_mean(copy) == aoi_service_mean(h.svc));
  aoi_service_free(copy);
}

TEST_CASE("error codes and messages cross the boundary") {
  aoi_service* svc = nullptr;
  CHECK(aoi_service_geometric(1.5, &svc) == AOI_ERR_INVALID);
  CHECK(std::strlen(aoi_last_error()) > 0);

  double out = 0;
  CHECK(aoi_pmf_geo(0.5, 0.5, 1, &out) == AOI_ERR_DEGENERATE);
  CHECK(aoi_mean_geo(0.7, 0.5, &out) == AOI_ERR_DEGENERATE);

  aoi_service* det = nullptr;
  REQUIRE(aoi_service_deterministic(2, &det) == AOI_OK);
  CHECK(aoi_service_cond(det, 3, &out, nullptr) == AOI_ERR_UNREACHABLE);

  aoi_params* params = nullptr;
  CHECK(aoi_params_create(1.5, det, 0, 1e-9, AOI_KERNEL_PAPER, &params) ==
        AOI_ERR_INVALID);
  CHECK(aoi_params_create(0.25, det, 0, 1e-9, 42, &params) == AOI_ERR_INVALID);
  aoi_service_free(det);

  CHECK(aoi_service_table(nullptr, 0, 1e-12, &svc) == AOI_ERR_INVALID);
  CHECK(aoi_service_geometric(0.5, nullptr) == AOI_ERR_INVALID);
}

TEST_CASE("analytic path through the C surface") {
  Handles h;
  REQUIRE(aoi_service_geometric(0.5, &h.svc) == AOI_OK);
  REQUIRE(aoi_params_create(0.25, h.svc, 300, 1e-9, AOI_KERNEL_PAPER,
                            &h.params) == AOI_OK);
  CHECK(aoi_params_n_max(h.params) == 300);

  double g = 0, f = 0;
  REQUIRE(aoi_g_poly(h.params, 2, &g) == AOI_OK);
  CHECK(g == doctest::Approx(0.625));
  REQUIRE(aoi_f_poly(h.params, 2, &f) == AOI_OK);
  CHECK(f == doctest::Approx(1.25));

  aoi_joint* joint = nullptr;
  REQUIRE(aoi_analytic_joint(h.params, &joint) == AOI_OK);
  CHECK(aoi_joint_n_max(joint) == 300);
  CHECK(aoi_joint_at(joint, 1, 0) == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(aoi_joint_at(joint, 2, 1) == doctest::Approx(0.0125).epsilon(1e-13));
  CHECK(aoi_joint_at(joint, 2, 5) == 0.0);
  CHECK(aoi_joint_tail_mass(joint) < 1e-12);

  aoi_dist* dist = nullptr;
  REQUIRE(aoi_joint_aoi_dist(joint, &dist) == AOI_OK);
  CHECK(std::string(aoi_dist_provenance(dist)) == "analytic");
  CHECK(aoi_dist_pmf(dist, 2) == doctest::Approx(0.1375).epsilon(1e-13));
  CHECK(aoi_dist_mean(dist) == doctest::Approx(5.4).epsilon(1e-9));
  aoi_dist_free(dist);
  aoi_joint_free(joint);

  std::vector<double> marginal(10);
  double busy = 0;
  REQUIRE(aoi_service_age_marginal(h.params, 10, marginal.data(), &busy) ==
          AOI_OK);
  CHECK(busy == doctest::Approx(0.2).epsilon(1e-13));
  CHECK(marginal[0] == doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("closed forms through the C surface") {
  double v = 0;
  REQUIRE(aoi_pmf_geo(0.25, 0.5, 1, &v) == AOI_OK);
  CHECK(v == doctest::Approx(0.1).epsilon(1e-13));
  REQUIRE(aoi_cdf_geo(0.25, 0.5, 1, &v) == AOI_OK);
  CHECK(v == doctest::Approx(0.1).epsilon(1e-12));
  REQUIRE(aoi_mean_geo(0.25, 0.5, &v) == AOI_OK);
  CHECK(v == doctest::Approx(5.4).epsilon(1e-13));
  REQUIRE(aoi_mean_mm11(0.5, 1.0, &v) == AOI_OK);
  CHECK(v == doctest::Approx(10.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("chain solve and kernel dump through the C surface") {
  Handles h;
  REQUIRE(aoi_service_geometric(0.5, &h.svc) == AOI_OK);
  REQUIRE(aoi_params_create(0.25, h.svc, 0, 1e-9, AOI_KERNEL_PAPER,
                            &h.params) == AOI_OK);

  aoi_joint* joint = nullptr;
  REQUIRE(aoi_chain_solve(h.params, 200, &joint) == AOI_OK);
  CHECK(aoi_joint_residual(joint) < 1e-12);
  CHECK(aoi_joint_boundary_mass(joint) < 1e-12);
  CHECK(std::string(aoi_joint_method(joint)) == "power");
  CHECK(aoi_joint_at(joint, 1, 0) == doctest::Approx(0.1).epsilon(1e-9));
  aoi_joint_free(joint);

  int count = 0;
  REQUIRE(aoi_chain_kernel(h.params, 10, &count, nullptr, nullptr, nullptr,
                           nullptr, nullptr) == AOI_OK);
  REQUIRE(count > 0);
  std::vector<int> fn(count), fm(count), tn(count), tm(count);
  std::vector<double> prob(count);
  REQUIRE(aoi_chain_kernel(h.params, 10, &count, fn.data(), fm.data(),
                           tn.data(), tm.data(), prob.data()) == AOI_OK);
  double from_30 = 0.0;
  for (int i = 0; i < count; ++i) {
    CHECK(prob[i] > 0.0);
    if (fn[i] == 3 && fm[i] == 0) from_30 += prob[i];
  }
  CHECK(from_30 == 1.0);
}

TEST_CASE("simulation through the C surface is reproducible") {
  Handles h;
  REQUIRE(aoi_service_geometric(0.5, &h.svc) == AOI_OK);
  REQUIRE(aoi_params_create(0.25, h.svc, 0, 1e-9, AOI_KERNEL_PAPER,
                            &h.params) == AOI_OK);

  aoi_sim_result* a = nullptr;
  aoi_sim_result* b = nullptr;
  REQUIRE(aoi_sim_run(h.params, 50000, 99, 2, 0, 1, &a) == AOI_OK);
  REQUIRE(aoi_sim_run(h.params, 50000, 99, 2, 0, 2, &b) == AOI_OK);

  CHECK(aoi_sim_mean(a) == aoi_sim_mean(b));
  CHECK(aoi_sim_t_effective(a) == 100000);
  CHECK(aoi_sim_replications(a) == 2);
  CHECK(aoi_sim_seed(a) == 99u);
  CHECK(std::string(aoi_sim_generator(a)) == "splitmix64");
  for (int n = 1; n <= aoi_sim_max_observed(a); ++n)
    CHECK(aoi_sim_count(a, n) == aoi_sim_count(b, n));

  const aoi_sim_result* inputs[] = {a, b};
  aoi_sim_result* pooled = nullptr;
  REQUIRE(aoi_sim_merge(inputs, 2, &pooled) == AOI_OK);
  CHECK(aoi_sim_t_effective(pooled) == 200000);

  aoi_dist* dist = nullptr;
  REQUIRE(aoi_sim_dist(pooled, &dist) == AOI_OK);
  CHECK(std::string(aoi_dist_provenance(dist)) == "empirical");
  CHECK(aoi_dist_pmf(dist, 1) == doctest::Approx(0.1).epsilon(0.2));

  aoi_dist_free(dist);
  aoi_sim_free(pooled);
  aoi_sim_free(a);
  aoi_sim_free(b);
}

TEST_CASE("version string") {
  CHECK(std::string(aoi_version()) == "0.1.0");
}
