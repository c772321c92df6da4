#include "service_dist.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace aoikit {

ServiceDistribution ServiceDistribution::geometric(double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw std::invalid_argument("geometric service: gamma must be in (0,1)");
  ServiceDistribution d;
  d.kind_ = ServiceKind::Geometric;
  d.gamma_ = gamma;
  d.mean_ = 1.0 / gamma;
  d.support_max_ = -1;
  return d;
}

ServiceDistribution ServiceDistribution::deterministic(int k) {
  if (k < 1)
    throw std::invalid_argument("deterministic service: k must be >= 1");
  ServiceDistribution d;
  d.kind_ = ServiceKind::Deterministic;
  d.det_k_ = k;
  d.mean_ = static_cast<double>(k);
  d.support_max_ = k;
  return d;
}

ServiceDistribution ServiceDistribution::table(std::vector<double> pmf,
                                               double tail_tol) {
  if (pmf.empty())
    throw std::invalid_argument("table service: empty pmf");
  for (double q : pmf)
    if (!(q >= 0.0) || q > 1.0)
      throw std::invalid_argument("table service: pmf entries must be in [0,1]");
  while (pmf.size() > 1 && pmf.back() == 0.0) pmf.pop_back();

  ServiceDistribution d;
  d.kind_ = ServiceKind::Table;
  d.pmf_ = std::move(pmf);
  d.support_max_ = static_cast<int>(d.pmf_.size());

  // Suffix sums accumulated backwards: surv_[m] = Pr{B>m}.
  const int J = d.support_max_;
  d.surv_.assign(J + 1, 0.0);
  for (int m = J - 1; m >= 0; --m) d.surv_[m] = d.surv_[m + 1] + d.pmf_[m];

  const double total = d.surv_[0];
  if (total > 1.0 + 1e-15 || total < 1.0 - tail_tol)
    throw std::invalid_argument(
        "table service: pmf mass " + std::to_string(total) +
        " outside [1-tail_tol, 1]");
  d.tail_deficit_ = std::max(0.0, 1.0 - total);

  // E[B] = sum_{m=1}^{J} Pr{B >= m} = sum_{m=0}^{J-1} surv_[m].
  double mean = 0.0;
  for (int m = J - 1; m >= 0; --m) mean += d.surv_[m];
  d.mean_ = mean;
  return d;
}

double ServiceDistribution::pmf(int j) const {
  if (j < 1) return 0.0;
  switch (kind_) {
    case ServiceKind::Geometric:
      return std::pow(1.0 - gamma_, j - 1) * gamma_;
    case ServiceKind::Deterministic:
      return j == det_k_ ? 1.0 : 0.0;
    case ServiceKind::Table:
      return j <= support_max_ ? pmf_[j - 1] : 0.0;
  }
  return 0.0;
}

double ServiceDistribution::survival(int m) const {
  if (m < 0) throw std::invalid_argument("survival: m must be >= 0");
  switch (kind_) {
    case ServiceKind::Geometric:
      return std::pow(1.0 - gamma_, m);
    case ServiceKind::Deterministic:
      return m < det_k_ ? 1.0 : 0.0;
    case ServiceKind::Table:
      return m <= support_max_ ? surv_[m] : 0.0;
  }
  return 0.0;
}

double ServiceDistribution::mean() const { return mean_; }

double ServiceDistribution::cond_continue(int m) const {
  if (m < 1) throw std::invalid_argument("cond_continue: m must be >= 1");
  const double prev = survival(m - 1);
  if (prev == 0.0)
    throw std::domain_error("cond_continue: state unreachable, Pr{B>" +
                            std::to_string(m - 1) + "} = 0");
  if (kind_ == ServiceKind::Geometric) return 1.0 - gamma_;
  return survival(m) / prev;
}

double ServiceDistribution::cond_finish(int m) const {
  return 1.0 - cond_continue(m);
}

std::string ServiceDistribution::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case ServiceKind::Geometric:
      j = {{"kind", "geometric"}, {"gamma", gamma_}};
      break;
    case ServiceKind::Deterministic:
      j = {{"kind", "deterministic"}, {"k", det_k_}};
      break;
    case ServiceKind::Table:
      j = {{"kind", "table"}, {"pmf", pmf_}};
      break;
  }
  return j.dump();
}

ServiceDistribution ServiceDistribution::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("service descriptor: ") + e.what());
  }
  const std::string kind = j.value("kind", "");
  if (kind == "geometric") return geometric(j.at("gamma").get<double>());
  if (kind == "deterministic") return deterministic(j.at("k").get<int>());
  if (kind == "table") {
    double tol = j.value("tail_tol", 1e-12);
    return table(j.at("pmf").get<std::vector<double>>(), tol);
  }
  throw std::invalid_argument("service descriptor: unknown kind '" + kind + "'");
}

bool ServiceDistribution::operator==(const ServiceDistribution& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case ServiceKind::Geometric: return gamma_ == other.gamma_;
    case ServiceKind::Deterministic: return det_k_ == other.det_k_;
    case ServiceKind::Table: return pmf_ == other.pmf_;
  }
  return false;
}

}  // namespace aoikit
