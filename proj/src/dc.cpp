#include "gridred/dc.hpp"

#include <algorithm>
#include <cmath>

#include "gridred/errors.hpp"

namespace gridred {

namespace {

void require_connected(const GridCase& c, const char* op) {
  auto comp = connected_components(c);
  if (*std::max_element(comp.begin(), comp.end()) != 0)
    throw StructuralError(std::string(op) +
                          ": network is islanded, DC system is singular");
}

void require_slack(const GridCase& c, int slack) {
  if (slack < 0 || slack >= c.n_buses())
    throw DomainError("slack index out of range");
}

// Solves the slack-reduced system for a set of right-hand sides and embeds
// the result as full-size angle vectors (slack row zero).
Eigen::MatrixXd solve_reduced(const Eigen::MatrixXd& bus_matrix, int slack,
                              const Eigen::MatrixXd& rhs_reduced) {
  const int n = static_cast<int>(bus_matrix.rows());
  Eigen::MatrixXd reduced(n - 1, n - 1);
  int ri = 0;
  for (int i = 0; i < n; ++i) {
    if (i == slack) continue;
    int rj = 0;
    for (int j = 0; j < n; ++j) {
      if (j == slack) continue;
      reduced(ri, rj) = bus_matrix(i, j);
      ++rj;
    }
    ++ri;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(reduced);
  Eigen::MatrixXd x = lu.solve(rhs_reduced);
  if (!(x.allFinite()) ||
      (reduced * x - rhs_reduced).cwiseAbs().maxCoeff() >
          1e-6 * std::max(1.0, rhs_reduced.cwiseAbs().maxCoeff()))
    throw StructuralError("slack-reduced susceptance matrix is singular");
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, x.cols());
  ri = 0;
  for (int i = 0; i < n; ++i) {
    if (i == slack) continue;
    full.row(i) = x.row(ri++);
  }
  return full;
}

}  // namespace

SusceptanceSystem build_susceptance(const GridCase& c, int slack) {
  require_slack(c, slack);
  const int n = c.n_buses();
  const int nl = c.n_branches();
  SusceptanceSystem s;
  s.slack = slack;
  s.bus_matrix = Eigen::MatrixXd::Zero(n, n);
  s.branch_incidence = Eigen::MatrixXd::Zero(nl, n);
  for (int l = 0; l < nl; ++l) {
    const auto& br = c.branches[l];
    if (!br.in_service) continue;
    const double b = 1.0 / br.reactance;
    s.bus_matrix(br.from, br.from) += b;
    s.bus_matrix(br.to, br.to) += b;
    s.bus_matrix(br.from, br.to) -= b;
    s.bus_matrix(br.to, br.from) -= b;
    s.branch_incidence(l, br.from) = 1.0;
    s.branch_incidence(l, br.to) = -1.0;
  }
  return s;
}

DcSolution dc_power_flow(const GridCase& c,
                         const Eigen::VectorXd& injections_mw, int slack) {
  require_slack(c, slack);
  require_connected(c, "dc_power_flow");
  const int n = c.n_buses();
  if (injections_mw.size() != n)
    throw DomainError("injection vector size does not match bus count");

  auto sys = build_susceptance(c, slack);
  Eigen::VectorXd p = injections_mw / c.base_mva;
  p(slack) -= p.sum();  // the slack absorbs any declared imbalance

  Eigen::VectorXd rhs(n - 1);
  int ri = 0;
  for (int i = 0; i < n; ++i)
    if (i != slack) rhs(ri++) = p(i);

  Eigen::MatrixXd theta = solve_reduced(sys.bus_matrix, slack, rhs);

  DcSolution sol;
  sol.angles_rad = theta.col(0);
  sol.flows_mw = Eigen::VectorXd::Zero(c.n_branches());
  for (int l = 0; l < c.n_branches(); ++l) {
    const auto& br = c.branches[l];
    if (!br.in_service) continue;
    sol.flows_mw(l) = (sol.angles_rad(br.from) - sol.angles_rad(br.to)) /
                      br.reactance * c.base_mva;
  }
  return sol;
}

PtdfMatrix compute_ptdf(const GridCase& c, int slack) {
  require_slack(c, slack);
  require_connected(c, "compute_ptdf");
  const int n = c.n_buses();
  auto sys = build_susceptance(c, slack);

  Eigen::MatrixXd theta =
      solve_reduced(sys.bus_matrix, slack,
                    Eigen::MatrixXd::Identity(n - 1, n - 1));
  // theta: column j is the angle response to a unit injection at the j-th
  // non-slack bus (withdrawn at the slack).

  PtdfMatrix p;
  p.slack = slack;
  p.values = Eigen::MatrixXd::Zero(c.n_branches(), n);
  for (int l = 0; l < c.n_branches(); ++l) {
    const auto& br = c.branches[l];
    if (!br.in_service) continue;
    int cj = 0;
    for (int j = 0; j < n; ++j) {
      if (j == slack) continue;
      p.values(l, j) =
          (theta(br.from, cj) - theta(br.to, cj)) / br.reactance;
      ++cj;
    }
  }
  return p;
}

ImpedanceTable bus_impedance(const GridCase& c) {
  require_connected(c, "bus_impedance");
  const int n = c.n_buses();
  auto sys = build_susceptance(c, 0);
  // For a connected network ker(B) = span(1), so the pseudo-inverse is
  // (B + J/n)^{-1} - J/n with J the all-ones matrix.
  Eigen::MatrixXd shift = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  Eigen::MatrixXd shifted = sys.bus_matrix + shift;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
  Eigen::MatrixXd inv = lu.solve(Eigen::MatrixXd::Identity(n, n));
  if (!inv.allFinite())
    throw StructuralError("bus_impedance: singular shifted susceptance");
  ImpedanceTable z;
  z.values = inv - shift;
  // symmetrize away factorization round-off
  z.values = 0.5 * (z.values + z.values.transpose()).eval();
  return z;
}

}  // namespace gridred
