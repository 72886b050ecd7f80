#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gridred/exec.hpp"
#include "gridred/grid_case.hpp"

namespace gridred {

// Simple (multigraph-collapsed) view of a case for topology metrics. Parallel
// in-service branches collapse to one edge keeping the minimum reactance.
struct SimpleGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;  // (neighbor, weight)
  int edge_count = 0;
};

enum class EdgeWeight {
  Unit,                 // hop metrics
  Reactance,            // raw x
  NormalizedReactance,  // x / max x of the network under evaluation
  MeanNormalizedReactance,  // x / mean x
};

SimpleGraph collapse_to_graph(const GridCase& c, EdgeWeight weight);

// Distances from one source; unreachable nodes get +inf.
std::vector<double> shortest_distances(const SimpleGraph& g, int source,
                                       bool weighted);

// n x n matrix of pairwise distances (weighted or hop counts).
Eigen::MatrixXd all_pairs_distances(const SimpleGraph& g, bool weighted,
                                    Exec exec = Exec::Parallel);

// Per-node betweenness over unordered pairs with endpoints excluded and
// fractional credit among equal-length shortest paths.
std::vector<double> betweenness_scores(const SimpleGraph& g, bool weighted,
                                       Exec exec = Exec::Parallel);

// Brandes dependency accumulation for a single source (ordered-pair scale).
std::vector<double> betweenness_source_contribution(const SimpleGraph& g,
                                                    int source, bool weighted);

std::vector<int> graph_components(const SimpleGraph& g);

}  // namespace gridred
