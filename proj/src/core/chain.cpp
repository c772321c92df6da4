#include "chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace aoikit {
namespace chain {

namespace {

struct RowEntry {
  int to;
  double prob;
};

// The largest entry absorbs the rounding residual so the row sums to 1
// exactly; table-kind mass deficit (<= tail_tol) lands there too.
void close_row(std::vector<RowEntry>& row) {
  if (row.empty()) return;
  double sum = 0.0;
  std::size_t biggest = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    sum += row[i].prob;
    if (row[i].prob > row[biggest].prob) biggest = i;
  }
  row[biggest].prob += 1.0 - sum;
}

}  // namespace

Kernel Kernel::build(const KernelSpec& spec) {
  spec.validate();
  if (spec.N > 5000)
    throw std::invalid_argument("kernel: N > 5000 needs O(N^2) states; "
                                "reduce N");
  const SystemParams& params = spec.params;
  const ServiceDistribution& svc = params.service;
  const double p = params.p;
  const double q1 = svc.q1();
  const bool natural = params.kernel == KernelConvention::Natural;

  Kernel k;
  k.N_ = spec.N;
  // Valid in-service ages: under the Paper reading state (n,m) conditions on
  // B>m-1, under Natural on B>m.
  if (svc.support_max() < 0) {
    k.m_cap_ = spec.N - 1;
  } else {
    k.m_cap_ = natural ? svc.support_max() - 1 : svc.support_max();
  }

  k.row_offset_.assign(spec.N + 2, 0);
  for (int n = 1; n <= spec.N; ++n) {
    const int m_hi = std::min(n - 1, k.m_cap_);
    k.row_offset_[n + 1] = k.row_offset_[n] + m_hi + 1;
    for (int m = 0; m <= m_hi; ++m) k.states_.emplace_back(n, m);
  }

  const int S = static_cast<int>(k.states_.size());
  k.edge_start_.reserve(S + 1);
  k.edge_start_.push_back(0);

  const double surv1 = svc.survival(1);
  for (int idx = 0; idx < S; ++idx) {
    const auto [n, m] = k.states_[idx];
    const int n_up = std::min(n + 1, spec.N);
    std::vector<RowEntry> row;
    if (m == 0) {
      row.push_back({k.index_of(n_up, 0), 1.0 - p});
      if (q1 > 0.0) row.push_back({k.index_of(1, 0), p * q1});
      if (surv1 > 0.0)
        row.push_back({k.index_of(n_up, 1), p * surv1});
    } else {
      const double cont = natural ? (svc.survival(m) > 0.0
                                         ? svc.survival(m + 1) / svc.survival(m)
                                         : 0.0)
                                  : svc.cond_continue(m);
      const double fin = 1.0 - cont;
      if (fin > 0.0) row.push_back({k.index_of(m + 1, 0), fin});
      if (cont > 0.0) {
        const int m_up = std::min(m + 1, n_up - 1);
        row.push_back({k.index_of(n_up, m_up), cont});
      }
    }
    close_row(row);
    for (const RowEntry& e : row) {
      k.col_.push_back(e.to);
      k.prob_.push_back(e.prob);
    }
    k.edge_start_.push_back(static_cast<int>(k.col_.size()));
  }
  return k;
}

int Kernel::index_of(int n, int m) const {
  if (n < 1 || n > N_ || m < 0 || m >= n) return -1;
  if (m_cap_ >= 0 && m > m_cap_) return -1;
  return row_offset_[n] + m;
}

std::vector<KernelEntry> Kernel::entries() const {
  std::vector<KernelEntry> out;
  out.reserve(prob_.size());
  for (int idx = 0; idx < state_count(); ++idx) {
    const auto [n, m] = states_[idx];
    for (int e = edge_start_[idx]; e < edge_start_[idx + 1]; ++e) {
      const auto [tn, tm] = states_[col_[e]];
      out.push_back({n, m, tn, tm, prob_[e]});
    }
  }
  return out;
}

void Kernel::apply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(x.size(), 0.0);
  for (int idx = 0; idx < state_count(); ++idx) {
    const double xi = x[idx];
    if (xi == 0.0) continue;
    for (int e = edge_start_[idx]; e < edge_start_[idx + 1]; ++e)
      y[col_[e]] += xi * prob_[e];
  }
}

double Kernel::row_sum(int idx) const {
  double s = 0.0;
  for (int e = edge_start_[idx]; e < edge_start_[idx + 1]; ++e) s += prob_[e];
  return s;
}

namespace {

std::vector<double> solve_direct(const Kernel& kernel) {
  const int S = kernel.state_count();
  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> trips;
  trips.reserve(static_cast<std::size_t>(S) * 4);
  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  for (const KernelEntry& e : kernel.entries()) {
    const int from = kernel.index_of(e.from_n, e.from_m);
    const int to = kernel.index_of(e.to_n, e.to_m);
    if (to == S - 1) continue;
    trips.emplace_back(to, from, e.prob);
  }
  for (int i = 0; i < S - 1; ++i) trips.emplace_back(i, i, -1.0);
  for (int i = 0; i < S; ++i) trips.emplace_back(S - 1, i, 1.0);

  Eigen::SparseMatrix<double> a(S, S);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) return {};  // caller falls back to power

  Eigen::VectorXd b = Eigen::VectorXd::Zero(S);
  b[S - 1] = 1.0;
  Eigen::VectorXd pi = lu.solve(b);
  if (lu.info() != Eigen::Success) return {};

  std::vector<double> out(pi.data(), pi.data() + S);
  for (double& v : out) v = std::max(v, 0.0);
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& v : out) v /= total;
  return out;
}

}  // namespace

std::pair<JointStateTable, StationaryReport> solve_stationary(
    const Kernel& kernel, const SolveOptions& opts) {
  const int S = kernel.state_count();
  StationaryReport report;

  std::vector<double> pi;
  if (S < opts.direct_solve_limit) {
    pi = solve_direct(kernel);
    report.method = "sparse-lu";
  }
  if (pi.empty()) {
    report.method = "power";
    pi.assign(S, 1.0 / S);
    std::vector<double> next(S);
    double residual = 1.0;
    long it = 0;
    for (; it < opts.max_iterations; ++it) {
      kernel.apply(pi, next);
      residual = 0.0;
      double mass = 0.0;
      for (int i = 0; i < S; ++i) {
        residual += std::abs(next[i] - pi[i]);
        mass += next[i];
      }
      for (double& v : next) v /= mass;
      pi.swap(next);
      if (residual < opts.target_residual) break;
    }
    report.iterations = it + 1;
    if (residual >= opts.target_residual)
      throw convergence_error(
          "solve_stationary: power iteration stalled at residual " +
          std::to_string(residual));
  }

  // Residual of the returned vector, whichever method produced it.
  {
    std::vector<double> check(S);
    kernel.apply(pi, check);
    double r = 0.0;
    for (int i = 0; i < S; ++i) r += std::abs(check[i] - pi[i]);
    report.residual = r;
  }

  JointStateTable table;
  table.resize(kernel.N());
  for (int i = 0; i < S; ++i) {
    const auto [n, m] = kernel.state_at(i);
    table.ref(n, m) = pi[i];
    if (n == kernel.N()) report.boundary_mass += pi[i];
  }
  table.tail_mass = report.boundary_mass;
  return {std::move(table), report};
}

AoiDistribution aoi_marginal(const JointStateTable& table) {
  AoiDistribution dist;
  dist.provenance = "chain";
  dist.pmf.resize(table.n_max);
  dist.cdf.resize(table.n_max);
  double cum = 0.0, mean = 0.0;
  for (int n = 1; n <= table.n_max; ++n) {
    const double pn = table.row_sum(n);
    dist.pmf[n - 1] = pn;
    cum += pn;
    dist.cdf[n - 1] = cum;
    mean += n * pn;
  }
  dist.tail = std::max(0.0, 1.0 - cum);
  dist.mean = mean;
  return dist;
}

}  // namespace chain
}  // namespace aoikit
