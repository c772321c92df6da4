#ifndef AOIKIT_SERVICE_DIST_HPP
#define AOIKIT_SERVICE_DIST_HPP

#include <string>
#include <vector>

namespace aoikit {

enum class ServiceKind { Geometric, Deterministic, Table };

// Discrete service-time distribution B on {1,2,...}.
// Immutable after construction; safe to share across threads.
class ServiceDistribution {
 public:
  static ServiceDistribution geometric(double gamma);
  static ServiceDistribution deterministic(int k);
  // pmf[0] = Pr{B=1}, pmf[1] = Pr{B=2}, ... Sum must lie in [1-tail_tol, 1].
  static ServiceDistribution table(std::vector<double> pmf,
                                   double tail_tol = 1e-12);
  static ServiceDistribution from_json(const std::string& text);

  ServiceKind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  int det_k() const { return det_k_; }

  // Pr{B=j}, j >= 1.
  double pmf(int j) const;
  double q1() const { return pmf(1); }

  // Pr{B>m}, m >= 0. Exact for Geometric/Deterministic, suffix sum for Table.
  double survival(int m) const;

  // E[B] = sum_{m>=1} Pr{B>=m}. For a Table with mass deficit this is the
  // truncated estimate; the unaccounted tail mass is tail_deficit().
  double mean() const;
  double tail_deficit() const { return tail_deficit_; }

  // Pr{B>m|B>m-1} and Pr{B=m|B>m-1}, m >= 1. Computed as survival ratios so
  // the pair sums to 1 exactly. Throws std::domain_error when the state is
  // unreachable (survival(m-1) == 0).
  double cond_continue(int m) const;
  double cond_finish(int m) const;

  // Largest j with pmf(j) > 0; -1 when unbounded (Geometric).
  int support_max() const { return support_max_; }

  std::string to_json() const;

  bool operator==(const ServiceDistribution& other) const;

 private:
  ServiceDistribution() = default;

  ServiceKind kind_ = ServiceKind::Geometric;
  double gamma_ = 0.0;
  int det_k_ = 0;
  std::vector<double> pmf_;   // Table only
  std::vector<double> surv_;  // Table only: surv_[m] = Pr{B>m}, m = 0..J
  double mean_ = 0.0;
  double tail_deficit_ = 0.0;
  int support_max_ = -1;
};

}  // namespace aoikit

#endif
