#pragma once

#include <array>
#include <string_view>

#include "gridred/exec.hpp"
#include "gridred/grid_case.hpp"

namespace gridred {

// Topological properties of one network. Weighted variants use edge weight
// x / x_norm; parallel branches are collapsed (minimum reactance kept) and
// only in-service branches count.
struct TopologyReport {
  double e_glob = 0.0;                // unweighted global efficiency
  double density = 0.0;               // |E| / C(N,2)
  double avg_path_weighted = 0.0;     // l_w
  double avg_path_unweighted = 0.0;   // l_0
  double closeness_weighted = 0.0;    // mean over nodes of 1/sum d(v,t)
  double closeness_unweighted = 0.0;
  double betweenness_weighted = 0.0;  // mean node betweenness
  double betweenness_unweighted = 0.0;
  double avg_degree = 0.0;
};

inline constexpr int kMetricCount = 9;

// Table-order metric keys.
const std::array<std::string_view, kMetricCount>& metric_names();
std::array<double, kMetricCount> metric_values(const TopologyReport& r);

enum class ReactanceNormalization { MaxReactance, MeanReactance };

TopologyReport topology_report(
    const GridCase& c,
    ReactanceNormalization norm = ReactanceNormalization::MaxReactance,
    Exec exec = Exec::Parallel);

// Per-metric |reduced - full| / |full|; NaN marks a metric whose full-model
// value is zero (undefined relative error, excluded from summaries).
struct ErrorIndex {
  std::array<double, kMetricCount> errors{};
};

ErrorIndex relative_errors(const TopologyReport& full,
                           const TopologyReport& reduced);

}  // namespace gridred
