#pragma once

#include <Eigen/Dense>

#include "gridred/grid_case.hpp"

namespace gridred {

// Nodal susceptance (DC) system: bus_matrix is the weighted Laplacian with
// b_l = 1/x_l summed per branch; branch_incidence has one +1 (from) and one
// -1 (to) per in-service branch row, zero rows for out-of-service branches.
struct SusceptanceSystem {
  Eigen::MatrixXd bus_matrix;        // N x N, per-unit
  Eigen::MatrixXd branch_incidence;  // L x N
  int slack = 0;
};

struct DcSolution {
  Eigen::VectorXd angles_rad;  // per bus, slack pinned to zero
  Eigen::VectorXd flows_mw;    // per branch, from -> to positive
};

// Branch x node sensitivity of flows to single-node injections withdrawn at
// the slack. The slack column is identically zero; only pair entries
// pair(l, g, d) are slack-free quantities.
struct PtdfMatrix {
  Eigen::MatrixXd values;  // L x N
  int slack = 0;
  double pair(int line, int g, int d) const {
    return values(line, g) - values(line, d);
  }
};

// DC bus impedance: Moore-Penrose pseudo-inverse of the bus susceptance
// matrix. pair(g, d) is the effective two-port impedance between g and d.
struct ImpedanceTable {
  Eigen::MatrixXd values;  // N x N, per-unit
  double pair(int g, int d) const {
    return values(g, g) + values(d, d) - 2.0 * values(g, d);
  }
};

SusceptanceSystem build_susceptance(const GridCase& c, int slack);

// Solves B*theta = p with theta(slack) = 0; any injection imbalance is
// absorbed at the slack bus. Throws StructuralError on an islanded network.
DcSolution dc_power_flow(const GridCase& c,
                         const Eigen::VectorXd& injections_mw, int slack);

PtdfMatrix compute_ptdf(const GridCase& c, int slack);

ImpedanceTable bus_impedance(const GridCase& c);

}  // namespace gridred
