#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <vector>

#include "gridred/dc.hpp"
#include "gridred/exec.hpp"
#include "gridred/grid_case.hpp"

namespace gridred {

enum class Criterion {
  ClassicalBetweenness,
  ExtendedBetweenness,
  NetAbility,
  Congestion,
  Comprehensive,
};

std::string_view criterion_name(Criterion c);

struct NodeScoreVector {
  Criterion criterion = Criterion::ClassicalBetweenness;
  std::vector<double> scores;  // per internal bus index
  std::vector<int> ranks;      // 1 = most important, permutation of 1..N
};

// Descending ranks with deterministic tie handling: scores within a relative
// 1e-9 band are treated as tied and ordered by ascending external bus id.
std::vector<int> ranks_from_scores(const std::vector<double>& scores,
                                   const std::vector<int>& external_ids);

// kappa(g, d): the largest transfer between generator g and load d before the
// first line hits its rating. Entries with g == d are NaN and skipped by all
// consumers; binding_line holds the limiting branch index (-1 where unset).
struct TransmissionCapacityTable {
  std::vector<int> generator_nodes;  // internal indices
  std::vector<int> load_nodes;
  Eigen::MatrixXd values_mw;
  Eigen::MatrixXi binding_line;
};

NodeScoreVector classical_betweenness(const GridCase& c, bool weighted,
                                      Exec exec = Exec::Parallel);

TransmissionCapacityTable transmission_capacity(const GridCase& c,
                                                const PtdfMatrix& ptdf,
                                                Exec exec = Exec::Parallel);

NodeScoreVector extended_betweenness(const GridCase& c, const PtdfMatrix& ptdf,
                                     const TransmissionCapacityTable& kappa,
                                     Exec exec = Exec::Parallel);

double global_efficiency(const GridCase& c, bool weighted);

double electrical_efficiency(const GridCase& c,
                             const TransmissionCapacityTable& kappa,
                             const ImpedanceTable& z);

// Electrical efficiency of an arbitrary (possibly disconnected) network:
// per-component tables, cross-component pairs contribute zero, normalization
// by the network's own generator and load counts.
double electrical_efficiency_of_case(const GridCase& c);

NodeScoreVector net_ability(const GridCase& c, Exec exec = Exec::Parallel);

// Base-dispatch congestion: node score is the worst |flow|/rating over its
// in-service incident lines.
NodeScoreVector congestion_criterion(const GridCase& c);

}  // namespace gridred
