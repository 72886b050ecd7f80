#include "gridred/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gridred/errors.hpp"
#include "gridred/graph.hpp"

namespace gridred {

namespace {
constexpr double kPtdfZero = 1e-9;  // lines below this sensitivity never bind
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::vector<int>> incident_in_service(const GridCase& c) {
  std::vector<std::vector<int>> lv(c.n_buses());
  for (int l = 0; l < c.n_branches(); ++l) {
    if (!c.branches[l].in_service) continue;
    lv[c.branches[l].from].push_back(l);
    lv[c.branches[l].to].push_back(l);
  }
  return lv;
}

std::vector<int> external_ids(const GridCase& c) {
  std::vector<int> ids(c.n_buses());
  for (int i = 0; i < c.n_buses(); ++i) ids[i] = c.buses[i].id;
  return ids;
}

}  // namespace

std::string_view criterion_name(Criterion c) {
  switch (c) {
    case Criterion::ClassicalBetweenness: return "classical_betweenness";
    case Criterion::ExtendedBetweenness: return "extended_betweenness";
    case Criterion::NetAbility: return "net_ability";
    case Criterion::Congestion: return "congestion";
    case Criterion::Comprehensive: return "comprehensive";
  }
  return "unknown";
}

std::vector<int> ranks_from_scores(const std::vector<double>& scores,
                                   const std::vector<int>& external_ids) {
  const int n = static_cast<int>(scores.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return external_ids[a] < external_ids[b];
  });
  auto tied = [&](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
  };
  // Group near-equal scores and order each group by external id.
  std::vector<int> ranks(n, 0);
  int pos = 0;
  while (pos < n) {
    int end = pos + 1;
    while (end < n && tied(scores[order[pos]], scores[order[end]])) ++end;
    std::sort(order.begin() + pos, order.begin() + end,
              [&](int a, int b) { return external_ids[a] < external_ids[b]; });
    for (int k = pos; k < end; ++k) ranks[order[k]] = k + 1;
    pos = end;
  }
  return ranks;
}

NodeScoreVector classical_betweenness(const GridCase& c, bool weighted,
                                      Exec exec) {
  auto g = collapse_to_graph(
      c, weighted ? EdgeWeight::Reactance : EdgeWeight::Unit);
  NodeScoreVector out;
  out.criterion = Criterion::ClassicalBetweenness;
  out.scores = betweenness_scores(g, weighted, exec);
  out.ranks = ranks_from_scores(out.scores, external_ids(c));
  return out;
}

TransmissionCapacityTable transmission_capacity(const GridCase& c,
                                                const PtdfMatrix& ptdf,
                                                Exec exec) {
  TransmissionCapacityTable t;
  t.generator_nodes = c.generator_indices();
  t.load_nodes = c.load_indices();
  const int ng = static_cast<int>(t.generator_nodes.size());
  const int nd = static_cast<int>(t.load_nodes.size());
  t.values_mw = Eigen::MatrixXd::Constant(ng, nd, kNaN);
  t.binding_line = Eigen::MatrixXi::Constant(ng, nd, -1);

  const int n_pairs = ng * nd;
  auto eval_pair = [&](int pair) {
    const int gi = pair / nd;
    const int di = pair % nd;
    const int g = t.generator_nodes[gi];
    const int d = t.load_nodes[di];
    if (g == d) return;
    double best = std::numeric_limits<double>::infinity();
    int arg = -1;
    for (int l = 0; l < c.n_branches(); ++l) {
      if (!c.branches[l].in_service) continue;
      const double tau = std::abs(ptdf.pair(l, g, d));
      if (tau < kPtdfZero) continue;
      const double v = c.branches[l].capacity_mw / tau;
      if (v < best) {
        best = v;
        arg = l;
      }
    }
    if (arg < 0)
      throw StructuralError("transmission_capacity: pair " +
                            std::to_string(c.buses[g].id) + "->" +
                            std::to_string(c.buses[d].id) +
                            " has all-zero sensitivities");
    t.values_mw(gi, di) = best;
    t.binding_line(gi, di) = arg;
  };

  if (exec == Exec::Parallel) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int pair = 0; pair < n_pairs; ++pair) {
      try {
        eval_pair(pair);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (int pair = 0; pair < n_pairs; ++pair) eval_pair(pair);
  }
  return t;
}

NodeScoreVector extended_betweenness(const GridCase& c, const PtdfMatrix& ptdf,
                                     const TransmissionCapacityTable& kappa,
                                     Exec exec) {
  const auto lv = incident_in_service(c);
  const int n = c.n_buses();
  const int ng = static_cast<int>(kappa.generator_nodes.size());
  const int nd = static_cast<int>(kappa.load_nodes.size());

  NodeScoreVector out;
  out.criterion = Criterion::ExtendedBetweenness;
  out.scores.assign(n, 0.0);

  auto score_node = [&](int v) {
    double sum = 0.0;
    for (int gi = 0; gi < ng; ++gi) {
      const int g = kappa.generator_nodes[gi];
      if (g == v) continue;  // the node's own injection is not transit
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
    return 0.5 * sum;
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int v = 0; v < n; ++v) out.scores[v] = score_node(v);
  } else {
    for (int v = 0; v < n; ++v) out.scores[v] = score_node(v);
  }
  out.ranks = ranks_from_scores(out.scores, external_ids(c));
  return out;
}

double global_efficiency(const GridCase& c, bool weighted) {
  const int n = c.n_buses();
  if (n < 2) throw DomainError("global_efficiency needs at least two buses");
  auto g = collapse_to_graph(
      c, weighted ? EdgeWeight::Reactance : EdgeWeight::Unit);
  auto d = all_pairs_distances(g, weighted, Exec::Serial);
  double sum = 0.0;
  for (int f = 0; f < n; ++f)
    for (int t = 0; t < n; ++t) {
      if (f == t) continue;
      const double dist = d(f, t);
      if (std::isfinite(dist) && dist > 0.0) sum += 1.0 / dist;
    }
  return sum / (static_cast<double>(n) * (n - 1));
}

double electrical_efficiency(const GridCase& c,
                             const TransmissionCapacityTable& kappa,
                             const ImpedanceTable& z) {
  (void)c;
  const int ng = static_cast<int>(kappa.generator_nodes.size());
  const int nd = static_cast<int>(kappa.load_nodes.size());
  if (ng == 0 || nd == 0) return 0.0;
  double sum = 0.0;
  for (int gi = 0; gi < ng; ++gi) {
    for (int di = 0; di < nd; ++di) {
      const int g = kappa.generator_nodes[gi];
      const int d = kappa.load_nodes[di];
      if (g == d) continue;
      const double k = kappa.values_mw(gi, di);
      if (std::isnan(k)) continue;
      sum += k / z.pair(g, d);
    }
  }
  return sum / (static_cast<double>(ng) * nd);
}

double electrical_efficiency_of_case(const GridCase& c) {
  const int n = c.n_buses();
  const auto gens = c.generator_indices();
  const auto loads = c.load_indices();
  if (gens.empty() || loads.empty()) return 0.0;

  auto comp = connected_components(c);
  const int n_comp = n == 0 ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  double sum = 0.0;
  for (int k = 0; k < n_comp; ++k) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (comp[i] == k) members.push_back(i);
    if (members.size() < 2) continue;
    auto sub = induced_subcase(c, members);
    bool has_gen = false, has_load = false;
    for (const auto& b : sub.buses) {
      has_gen = has_gen || b.is_generator;
      has_load = has_load || b.is_load;
    }
    if (!has_gen || !has_load) continue;
    auto ptdf = compute_ptdf(sub, 0);
    auto kappa = transmission_capacity(sub, ptdf, Exec::Serial);
    auto z = bus_impedance(sub);
    const int ng = static_cast<int>(kappa.generator_nodes.size());
    const int nd = static_cast<int>(kappa.load_nodes.size());
    for (int gi = 0; gi < ng; ++gi)
      for (int di = 0; di < nd; ++di) {
        const int g = kappa.generator_nodes[gi];
        const int d = kappa.load_nodes[di];
        if (g == d) continue;
        sum += kappa.values_mw(gi, di) / z.pair(g, d);
      }
  }
  return sum / (static_cast<double>(gens.size()) * loads.size());
}

NodeScoreVector net_ability(const GridCase& c, Exec exec) {
  const int n = c.n_buses();
  const double a_ori = electrical_efficiency_of_case(c);
  if (!(a_ori > 0.0))
    throw ConfigError("net_ability: original efficiency is zero");

  NodeScoreVector out;
  out.criterion = Criterion::NetAbility;
  out.scores.assign(n, 0.0);

  auto eval_node = [&](int v) {
    std::vector<int> keep;
    keep.reserve(n - 1);
    for (int i = 0; i < n; ++i)
      if (i != v) keep.push_back(i);
    const double a_re = electrical_efficiency_of_case(induced_subcase(c, keep));
    return std::abs(a_ori - a_re) / a_ori;
  };

  if (exec == Exec::Parallel) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int v = 0; v < n; ++v) {
      try {
        out.scores[v] = eval_node(v);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (int v = 0; v < n; ++v) out.scores[v] = eval_node(v);
  }
  out.ranks = ranks_from_scores(out.scores, external_ids(c));
  return out;
}

NodeScoreVector congestion_criterion(const GridCase& c) {
  if (c.total_generation_mw() <= 0.0 || c.total_load_mw() <= 0.0)
    throw ConfigError("congestion_criterion: case carries no base dispatch");
  const auto gens = c.generator_indices();
  const int slack = *std::min_element(
      gens.begin(), gens.end(),
      [&](int a, int b) { return c.buses[a].id < c.buses[b].id; });

  auto inj = c.injections_mw();
  Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(inj.data(),
                                                        c.n_buses());
  auto sol = dc_power_flow(c, p, slack);

  const auto lv = incident_in_service(c);
  NodeScoreVector out;
  out.criterion = Criterion::Congestion;
  out.scores.assign(c.n_buses(), 0.0);
  for (int v = 0; v < c.n_buses(); ++v) {
    double worst = 0.0;
    for (int l : lv[v])
      worst = std::max(worst,
                       std::abs(sol.flows_mw(l)) / c.branches[l].capacity_mw);
    out.scores[v] = worst;
  }
  out.ranks = ranks_from_scores(out.scores, external_ids(c));
  return out;
}

}  // namespace gridred
