#include "gridred/metrics.hpp"

#include <cmath>
#include <limits>

#include "gridred/graph.hpp"

namespace gridred {

const std::array<std::string_view, kMetricCount>& metric_names() {
  static const std::array<std::string_view, kMetricCount> names = {
      "E_glob", "rho", "l_w", "l_0", "C_w", "C_0", "B_w", "B_0", "d_avg"};
  return names;
}

std::array<double, kMetricCount> metric_values(const TopologyReport& r) {
  return {r.e_glob,
          r.density,
          r.avg_path_weighted,
          r.avg_path_unweighted,
          r.closeness_weighted,
          r.closeness_unweighted,
          r.betweenness_weighted,
          r.betweenness_unweighted,
          r.avg_degree};
}

namespace {

struct PathStats {
  double avg_path = 0.0;
  double closeness = 0.0;  // mean over nodes of 1 / sum_t d(v,t)
};

PathStats path_stats(const SimpleGraph& g, bool weighted, Exec exec) {
  auto d = all_pairs_distances(g, weighted, exec);
  const int n = g.n;
  double sum_d = 0.0;
  long pair_count = 0;
  double closeness_sum = 0.0;
  for (int v = 0; v < n; ++v) {
    double row = 0.0;
    for (int t = 0; t < n; ++t) {
      if (t == v || !std::isfinite(d(v, t))) continue;
      row += d(v, t);
      sum_d += d(v, t);
      ++pair_count;
    }
    if (row > 0.0) closeness_sum += 1.0 / row;
  }
  PathStats s;
  s.avg_path = pair_count > 0 ? sum_d / pair_count : 0.0;
  s.closeness = n > 0 ? closeness_sum / n : 0.0;
  return s;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

TopologyReport topology_report(const GridCase& c, ReactanceNormalization norm,
                               Exec exec) {
  const int n = c.n_buses();
  auto unit = collapse_to_graph(c, EdgeWeight::Unit);
  auto wgraph = collapse_to_graph(
      c, norm == ReactanceNormalization::MaxReactance
             ? EdgeWeight::NormalizedReactance
             : EdgeWeight::MeanNormalizedReactance);

  TopologyReport r;
  r.density = unit.edge_count / (n * (n - 1) / 2.0);
  r.avg_degree = 2.0 * unit.edge_count / n;

  auto d0 = all_pairs_distances(unit, /*weighted=*/false, exec);
  double eff = 0.0;
  for (int f = 0; f < n; ++f)
    for (int t = 0; t < n; ++t) {
      if (f == t || !std::isfinite(d0(f, t)) || d0(f, t) == 0.0) continue;
      eff += 1.0 / d0(f, t);
    }
  r.e_glob = eff / (static_cast<double>(n) * (n - 1));

  {
    double sum_d = 0.0, closeness_sum = 0.0;
    long pair_count = 0;
    for (int v = 0; v < n; ++v) {
      double row = 0.0;
      for (int t = 0; t < n; ++t) {
        if (t == v || !std::isfinite(d0(v, t))) continue;
        row += d0(v, t);
        sum_d += d0(v, t);
        ++pair_count;
      }
      if (row > 0.0) closeness_sum += 1.0 / row;
    }
    r.avg_path_unweighted = pair_count > 0 ? sum_d / pair_count : 0.0;
    r.closeness_unweighted = closeness_sum / n;
  }
  {
    auto sw = path_stats(wgraph, /*weighted=*/true, exec);
    r.avg_path_weighted = sw.avg_path;
    r.closeness_weighted = sw.closeness;
  }
  r.betweenness_unweighted = mean(betweenness_scores(unit, false, exec));
  r.betweenness_weighted = mean(betweenness_scores(wgraph, true, exec));
  return r;
}

ErrorIndex relative_errors(const TopologyReport& full,
                           const TopologyReport& reduced) {
  auto f = metric_values(full);
  auto r = metric_values(reduced);
  ErrorIndex e;
  for (int i = 0; i < kMetricCount; ++i) {
    if (f[i] == 0.0)
      e.errors[i] = std::numeric_limits<double>::quiet_NaN();
    else
      e.errors[i] = std::abs(r[i] - f[i]) / std::abs(f[i]);
  }
  return e;
}

}  // namespace gridred
