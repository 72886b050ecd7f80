#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridred/case_io.hpp"
#include "gridred/centrality.hpp"
#include "gridred/grid_case.hpp"

namespace gridred {

struct NodePartition {
  std::vector<int> retained;    // internal indices of the full case, ascending
  std::vector<int> eliminated;  // ascending
  // Set when the retained nodes do not induce a connected subgraph over the
  // original branches; Ward equivalent branches restore connectivity.
  bool connectivity_warning = false;
};

struct PrunedBranch {
  int from_id = 0;  // external ids
  int to_id = 0;
  double x_eq = 0.0;
};

struct ReducedCase {
  GridCase grid;  // the equivalent network; every bus is a retained original
  std::vector<int> equivalent_branch_indices;  // indices into grid.branches
  std::map<int, int> generator_map;        // original gen id -> retained id
  std::vector<double> load_adjustments_mw;  // per grid bus vs the original
  std::vector<int> original_bus_index;      // grid bus -> full-case index
  std::vector<int> eliminated_ids;          // external ids
  std::vector<PrunedBranch> pruned;
  bool connectivity_warning = false;

  CaseProvenance provenance() const;
};

// The k lowest-ranked nodes are marked for elimination; 1 <= k <= N-2.
NodePartition select_nodes(const NodeScoreVector& ranking, const GridCase& c,
                           int eliminate_count);

// Kron reduction of the nodal susceptance matrix over the eliminated set.
// Original retained-retained branches are preserved; every off-diagonal
// increment of the reduced matrix becomes an equivalent branch (parallel to
// the originals where one exists). Eliminated net injections are shifted to
// retained buses as load deltas via the exact Ward distribution; the
// redistribute_loads step later overwrites them. An empty eliminated set
// returns the case unchanged.
ReducedCase ward_eliminate(const GridCase& c, const NodePartition& partition);

// Drops equivalent branches with x_eq < 0 or |x_eq| > x_max. Originals are
// never touched. If the removals disconnect the network, removed branches
// are rolled back in descending |x_eq| order (re-adding only bridging ones)
// until it reconnects.
ReducedCase prune_abnormal_branches(ReducedCase reduced, double x_max);

// Moves each eliminated generator's output to the retained bus at minimum
// reactance-weighted distance in the full network; ties go to the lower
// external id.
ReducedCase relocate_generators(const GridCase& full, ReducedCase reduced);

// Exact angle-matching load construction: solves the full model, computes the
// retained injections the reduced matrix requires to reproduce those angles,
// and sets equivalent loads accordingly. The full case's declared imbalance
// stays attached to the slack bus so total generation and load are both
// preserved.
ReducedCase redistribute_loads(const GridCase& full, ReducedCase reduced,
                               int slack_full_index);

struct ReductionConfig {
  double x_max = 1e3;             // abnormal-reactance prune threshold, pu
  bool retain_generators = true;  // extend the retained set with all gens
  std::optional<int> slack;       // full-case internal index; default: the
                                  // generator bus with the lowest id
};

struct ReductionReport {
  std::vector<int> eliminated_ids;
  std::vector<PrunedBranch> pruned;
  std::map<int, int> generator_map;
  std::vector<std::array<double, 3>> equivalent_branches;  // from,to,x_eq
  double max_angle_mismatch_rad = 0.0;
  double max_flow_mismatch_mw = 0.0;
  bool connectivity_warning = false;
};

// select -> ward -> prune -> (generator retention re-run | relocation) ->
// redistribute. The ranking must belong to the given case.
ReducedCase reduce_pipeline(const GridCase& c, const NodeScoreVector& ranking,
                            int eliminate_count, const ReductionConfig& config,
                            ReductionReport* report = nullptr);

}  // namespace gridred
