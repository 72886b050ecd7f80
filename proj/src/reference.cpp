#include "gridred/reference.hpp"

#include <cmath>
#include <limits>

#include "gridred/errors.hpp"
#include "gridred/graph.hpp"

namespace gridred::reference {

Eigen::MatrixXd all_pairs_distances(const GridCase& c, bool weighted) {
  auto g = collapse_to_graph(
      c, weighted ? EdgeWeight::Reactance : EdgeWeight::Unit);
  Eigen::MatrixXd d(g.n, g.n);
  for (int s = 0; s < g.n; ++s) {
    auto row = shortest_distances(g, s, weighted);
    for (int t = 0; t < g.n; ++t) d(s, t) = row[t];
  }
  return d;
}

std::vector<double> betweenness_scores(const GridCase& c, bool weighted) {
  auto g = collapse_to_graph(
      c, weighted ? EdgeWeight::Reactance : EdgeWeight::Unit);
  std::vector<double> b(g.n, 0.0);
  for (int s = 0; s < g.n; ++s) {
    auto contrib = betweenness_source_contribution(g, s, weighted);
    for (int v = 0; v < g.n; ++v) b[v] += contrib[v];
  }
  for (double& x : b) x *= 0.5;
  return b;
}

TransmissionCapacityTable transmission_capacity(const GridCase& c,
                                                const PtdfMatrix& ptdf) {
  TransmissionCapacityTable t;
  t.generator_nodes = c.generator_indices();
  t.load_nodes = c.load_indices();
  const int ng = static_cast<int>(t.generator_nodes.size());
  const int nd = static_cast<int>(t.load_nodes.size());
  t.values_mw = Eigen::MatrixXd::Constant(
      ng, nd, std::numeric_limits<double>::quiet_NaN());
  t.binding_line = Eigen::MatrixXi::Constant(ng, nd, -1);
  for (int gi = 0; gi < ng; ++gi) {
    for (int di = 0; di < nd; ++di) {
      const int g = t.generator_nodes[gi];
      const int d = t.load_nodes[di];
      if (g == d) continue;
      double best = std::numeric_limits<double>::infinity();
      int arg = -1;
      for (int l = 0; l < c.n_branches(); ++l) {
        if (!c.branches[l].in_service) continue;
        const double tau = std::abs(ptdf.pair(l, g, d));
        if (tau < 1e-9) continue;
        const double v = c.branches[l].capacity_mw / tau;
        if (v < best) {
          best = v;
          arg = l;
        }
      }
      if (arg < 0)
        throw StructuralError("reference kappa: all-zero sensitivities");
      t.values_mw(gi, di) = best;
      t.binding_line(gi, di) = arg;
    }
  }
  return t;
}

std::vector<double> extended_betweenness_scores(
    const GridCase& c, const PtdfMatrix& ptdf,
    const TransmissionCapacityTable& kappa) {
  const int n = c.n_buses();
  std::vector<std::vector<int>> lv(n);
  for (int l = 0; l < c.n_branches(); ++l) {
    if (!c.branches[l].in_service) continue;
    lv[c.branches[l].from].push_back(l);
    lv[c.branches[l].to].push_back(l);
  }
  std::vector<double> scores(n, 0.0);
  const int ng = static_cast<int>(kappa.generator_nodes.size());
  const int nd = static_cast<int>(kappa.load_nodes.size());
  for (int v = 0; v < n; ++v) {
    double sum = 0.0;
    for (int gi = 0; gi < ng; ++gi) {
      const int g = kappa.generator_nodes[gi];
      if (g == v) continue;
      for (int di = 0; di < nd; ++di) {
        const int d = kappa.load_nodes[di];
        if (d == v || d == g) continue;
        const double k = kappa.values_mw(gi, di);
        if (std::isnan(k)) continue;
        double through = 0.0;
        for (int l : lv[v]) through += std::abs(ptdf.pair(l, g, d));
        sum += k * through;
      }
    }
    scores[v] = 0.5 * sum;
  }
  return scores;
}

std::vector<double> net_ability_scores(const GridCase& c) {
  const int n = c.n_buses();
  const double a_ori = electrical_efficiency_of_case(c);
  std::vector<double> scores(n, 0.0);
  for (int v = 0; v < n; ++v) {
    std::vector<int> keep;
    keep.reserve(n - 1);
    for (int i = 0; i < n; ++i)
      if (i != v) keep.push_back(i);
    const double a_re = electrical_efficiency_of_case(induced_subcase(c, keep));
    scores[v] = std::abs(a_ori - a_re) / a_ori;
  }
  return scores;
}

}  // namespace gridred::reference
