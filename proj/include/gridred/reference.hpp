#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gridred/centrality.hpp"
#include "gridred/dc.hpp"
#include "gridred/grid_case.hpp"

namespace gridred::reference {

// Plain serial implementations of the data-parallel kernels, kept as the
// baseline for correctness tests and the benchmark. They follow the same
// summation order as the parallel kernels, so results match bit-for-bit.

Eigen::MatrixXd all_pairs_distances(const GridCase& c, bool weighted);

std::vector<double> betweenness_scores(const GridCase& c, bool weighted);

TransmissionCapacityTable transmission_capacity(const GridCase& c,
                                                const PtdfMatrix& ptdf);

std::vector<double> extended_betweenness_scores(
    const GridCase& c, const PtdfMatrix& ptdf,
    const TransmissionCapacityTable& kappa);

std::vector<double> net_ability_scores(const GridCase& c);

}  // namespace gridred::reference
