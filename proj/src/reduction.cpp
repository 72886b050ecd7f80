#include "gridred/reduction.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "gridred/dc.hpp"
#include "gridred/errors.hpp"
#include "gridred/graph.hpp"

namespace gridred {

namespace {
constexpr double kFillTol = 1e-10;  // susceptance below this is no branch

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

bool subgraph_connected(const GridCase& c, const std::vector<int>& nodes) {
  std::vector<char> in(c.n_buses(), 0);
  for (int v : nodes) in[v] = 1;
  UnionFind uf(c.n_buses());
  int parts = static_cast<int>(nodes.size());
  for (const auto& br : c.branches) {
    if (!br.in_service || !in[br.from] || !in[br.to]) continue;
    if (uf.unite(br.from, br.to)) --parts;
  }
  return parts <= 1;
}

}  // namespace

CaseProvenance ReducedCase::provenance() const {
  CaseProvenance p;
  p.eliminated = eliminated_ids;
  p.generator_map = generator_map;
  for (int idx : equivalent_branch_indices) {
    const auto& br = grid.branches[idx];
    p.equivalent_branches.push_back({static_cast<double>(grid.buses[br.from].id),
                                     static_cast<double>(grid.buses[br.to].id),
                                     br.reactance});
  }
  for (const auto& pr : pruned)
    p.pruned.push_back({static_cast<double>(pr.from_id),
                        static_cast<double>(pr.to_id), pr.x_eq});
  return p;
}

NodePartition select_nodes(const NodeScoreVector& ranking, const GridCase& c,
                           int eliminate_count) {
  const int n = c.n_buses();
  if (static_cast<int>(ranking.ranks.size()) != n)
    throw DomainError("select_nodes: ranking size does not match case");
  if (eliminate_count < 1 || eliminate_count > n - 2)
    throw DomainError("select_nodes: eliminate count must lie in 1..N-2");

  NodePartition p;
  for (int i = 0; i < n; ++i) {
    if (ranking.ranks[i] > n - eliminate_count)
      p.eliminated.push_back(i);
    else
      p.retained.push_back(i);
  }
  p.connectivity_warning = !subgraph_connected(c, p.retained);
  return p;
}

ReducedCase ward_eliminate(const GridCase& c, const NodePartition& partition) {
  const int n = c.n_buses();
  ReducedCase out;
  out.connectivity_warning = partition.connectivity_warning;

  if (partition.eliminated.empty()) {
    out.grid = c;
    out.load_adjustments_mw.assign(n, 0.0);
    out.original_bus_index.resize(n);
    std::iota(out.original_bus_index.begin(), out.original_bus_index.end(), 0);
    return out;
  }

  std::vector<char> is_elim(n, 0);
  for (int v : partition.eliminated) is_elim[v] = 1;
  const auto& ret = partition.retained;
  const auto& elim = partition.eliminated;
  if (ret.empty()) throw DomainError("ward_eliminate: empty retained set");

  // Every eliminated component must touch a retained bus, otherwise the
  // eliminated block is singular.
  {
    UnionFind uf(n);
    for (const auto& br : c.branches) {
      if (!br.in_service || !is_elim[br.from] || !is_elim[br.to]) continue;
      uf.unite(br.from, br.to);
    }
    std::set<int> anchored;
    for (const auto& br : c.branches) {
      if (!br.in_service) continue;
      if (is_elim[br.from] != is_elim[br.to])
        anchored.insert(uf.find(is_elim[br.from] ? br.from : br.to));
    }
    for (int v : elim) {
      if (!anchored.count(uf.find(v))) {
        std::ostringstream os;
        os << "ward_eliminate: floating eliminated island {";
        bool first = true;
        for (int u : elim) {
          if (uf.find(u) != uf.find(v)) continue;
          if (!first) os << ",";
          os << c.buses[u].id;
          first = false;
        }
        os << "} has no tie to a retained bus";
        throw StructuralError(os.str());
      }
    }
  }

  auto sys = build_susceptance(c, 0);
  const int nr = static_cast<int>(ret.size());
  const int ne = static_cast<int>(elim.size());
  Eigen::MatrixXd b_rr(nr, nr), b_re(nr, ne), b_ee(ne, ne);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nr; ++j) b_rr(i, j) = sys.bus_matrix(ret[i], ret[j]);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < ne; ++j) b_re(i, j) = sys.bus_matrix(ret[i], elim[j]);
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < ne; ++j) b_ee(i, j) = sys.bus_matrix(elim[i], elim[j]);

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(b_ee);
  Eigen::MatrixXd m = lu.solve(b_re.transpose());  // B_ee^{-1} B_er
  if (!m.allFinite() ||
      (b_ee * m - b_re.transpose()).cwiseAbs().maxCoeff() > 1e-6)
    throw StructuralError("ward_eliminate: singular eliminated block");
  Eigen::MatrixXd b_red = b_rr - b_re * m;

  // Reduced case skeleton: retained buses, original retained branches.
  out.grid.name = c.name;
  out.grid.base_mva = c.base_mva;
  std::vector<int> remap(n, -1);
  for (int i = 0; i < nr; ++i) {
    remap[ret[i]] = i;
    out.grid.buses.push_back(c.buses[ret[i]]);
    out.original_bus_index.push_back(ret[i]);
  }
  Eigen::MatrixXd b_orig = Eigen::MatrixXd::Zero(nr, nr);
  double interface_rating = 0.0;
  for (const auto& br : c.branches) {
    const bool f_ret = remap[br.from] >= 0, t_ret = remap[br.to] >= 0;
    if (f_ret && t_ret) {
      Branch nb = br;
      nb.from = remap[br.from];
      nb.to = remap[br.to];
      out.grid.branches.push_back(nb);
      if (br.in_service) {
        b_orig(nb.from, nb.to) += 1.0 / br.reactance;
        b_orig(nb.to, nb.from) += 1.0 / br.reactance;
      }
    } else if (br.in_service && (f_ret != t_ret)) {
      interface_rating += br.capacity_mw;
    }
  }

  // Fill-in increments become equivalent branches; a pair that already has
  // original branches gets a parallel equivalent for the increment only.
  for (int i = 0; i < nr; ++i) {
    for (int j = i + 1; j < nr; ++j) {
      const double b_add = -b_red(i, j) - b_orig(i, j);
      if (std::abs(b_add) <= kFillTol) continue;
      Branch eq;
      eq.from = i;
      eq.to = j;
      eq.reactance = 1.0 / b_add;
      eq.capacity_mw = interface_rating;  // synthetic rating, see provenance
      eq.in_service = true;
      out.equivalent_branch_indices.push_back(
          static_cast<int>(out.grid.branches.size()));
      out.grid.branches.push_back(eq);
    }
  }

  // Ward injection shift: P_r' = P_r - B_re B_ee^{-1} P_e, realized as load
  // deltas on the retained buses (diagnostic; redistribute_loads overwrites).
  Eigen::VectorXd p_e(ne);
  for (int j = 0; j < ne; ++j)
    p_e(j) = c.buses[elim[j]].generation_mw - c.buses[elim[j]].load_mw;
  Eigen::VectorXd shift = m.transpose() * p_e;  // B_re B_ee^{-1} P_e
  out.load_adjustments_mw.assign(nr, 0.0);
  for (int i = 0; i < nr; ++i) {
    const double delta_inj = -shift(i);
    out.grid.buses[i].load_mw -= delta_inj;
    out.load_adjustments_mw[i] = -delta_inj;
    out.grid.buses[i].is_load = out.grid.buses[i].load_mw > 0.0;
  }

  for (int v : elim) out.eliminated_ids.push_back(c.buses[v].id);

  auto comp = connected_components(out.grid);
  if (*std::max_element(comp.begin(), comp.end()) != 0)
    out.connectivity_warning = true;
  return out;
}

ReducedCase prune_abnormal_branches(ReducedCase reduced, double x_max) {
  auto& grid = reduced.grid;
  std::vector<char> is_eq(grid.branches.size(), 0);
  for (int idx : reduced.equivalent_branch_indices) is_eq[idx] = 1;

  std::vector<int> removable;
  for (int idx : reduced.equivalent_branch_indices) {
    const double x = grid.branches[idx].reactance;
    if (x < 0.0 || std::abs(x) > x_max) removable.push_back(idx);
  }
  if (removable.empty()) return reduced;

  std::vector<char> removed(grid.branches.size(), 0);
  for (int idx : removable) removed[idx] = 1;

  // Connectivity over what stays; roll back bridging removals, worst |x|
  // first, until the network reconnects.
  UnionFind uf(grid.n_buses());
  int parts = grid.n_buses();
  for (size_t l = 0; l < grid.branches.size(); ++l) {
    if (removed[l] || !grid.branches[l].in_service) continue;
    if (uf.unite(grid.branches[l].from, grid.branches[l].to)) --parts;
  }
  if (parts > 1) {
    std::sort(removable.begin(), removable.end(), [&](int a, int b) {
      const double xa = std::abs(grid.branches[a].reactance);
      const double xb = std::abs(grid.branches[b].reactance);
      if (xa != xb) return xa > xb;
      return a < b;
    });
    for (int idx : removable) {
      if (parts <= 1) break;
      if (uf.unite(grid.branches[idx].from, grid.branches[idx].to)) {
        removed[idx] = 0;
        --parts;
      }
    }
    reduced.connectivity_warning = true;  // pruning had to be partially undone
  }

  // Rebuild the branch list without the removed equivalents.
  std::vector<Branch> kept;
  std::vector<int> new_eq_indices;
  for (size_t l = 0; l < grid.branches.size(); ++l) {
    if (removed[l]) {
      reduced.pruned.push_back({grid.buses[grid.branches[l].from].id,
                                grid.buses[grid.branches[l].to].id,
                                grid.branches[l].reactance});
      continue;
    }
    if (is_eq[l]) new_eq_indices.push_back(static_cast<int>(kept.size()));
    kept.push_back(grid.branches[l]);
  }
  grid.branches = std::move(kept);
  reduced.equivalent_branch_indices = std::move(new_eq_indices);
  return reduced;
}

ReducedCase relocate_generators(const GridCase& full, ReducedCase reduced) {
  std::vector<char> retained_full(full.n_buses(), 0);
  for (int orig : reduced.original_bus_index) retained_full[orig] = 1;

  auto graph = collapse_to_graph(full, EdgeWeight::Reactance);
  for (int g : full.generator_indices()) {
    if (retained_full[g]) continue;
    auto dist = shortest_distances(graph, g, /*weighted=*/true);
    int best = -1;
    for (int i = 0; i < static_cast<int>(reduced.original_bus_index.size());
         ++i) {
      const int cand = reduced.original_bus_index[i];
      if (!std::isfinite(dist[cand])) continue;
      if (best < 0 || dist[cand] < dist[reduced.original_bus_index[best]] ||
          (dist[cand] == dist[reduced.original_bus_index[best]] &&
           full.buses[cand].id <
               full.buses[reduced.original_bus_index[best]].id))
        best = i;
    }
    if (best < 0)
      throw StructuralError("relocate_generators: no reachable retained bus");
    reduced.grid.buses[best].generation_mw += full.buses[g].generation_mw;
    reduced.grid.buses[best].is_generator = true;
    reduced.generator_map[full.buses[g].id] =
        full.buses[reduced.original_bus_index[best]].id;
  }
  return reduced;
}

ReducedCase redistribute_loads(const GridCase& full, ReducedCase reduced,
                               int slack_full_index) {
  const int nr = reduced.grid.n_buses();
  int slack_red = -1;
  for (int i = 0; i < nr; ++i)
    if (reduced.original_bus_index[i] == slack_full_index) slack_red = i;
  if (slack_red < 0)
    throw DomainError("redistribute_loads: slack bus is not retained");

  auto inj_full = full.injections_mw();
  Eigen::VectorXd p_full =
      Eigen::Map<const Eigen::VectorXd>(inj_full.data(), full.n_buses());
  auto sol = dc_power_flow(full, p_full, slack_full_index);

  auto sys_red = build_susceptance(reduced.grid, slack_red);
  Eigen::VectorXd theta_r(nr);
  for (int i = 0; i < nr; ++i)
    theta_r(i) = sol.angles_rad(reduced.original_bus_index[i]);

  Eigen::VectorXd p_required =
      (sys_red.bus_matrix * theta_r) * reduced.grid.base_mva;
  const double residual = p_full.sum();  // declared full-case imbalance

  for (int i = 0; i < nr; ++i) {
    auto& bus = reduced.grid.buses[i];
    bus.load_mw = bus.generation_mw - p_required(i);
    if (i == slack_red) bus.load_mw -= residual;
    bus.is_load = bus.load_mw > 0.0;
    reduced.load_adjustments_mw[i] =
        bus.load_mw - full.buses[reduced.original_bus_index[i]].load_mw;
  }
  return reduced;
}

ReducedCase reduce_pipeline(const GridCase& c, const NodeScoreVector& ranking,
                            int eliminate_count, const ReductionConfig& config,
                            ReductionReport* report) {
  auto partition = select_nodes(ranking, c, eliminate_count);
  auto reduced =
      prune_abnormal_branches(ward_eliminate(c, partition), config.x_max);

  if (config.retain_generators) {
    std::vector<char> is_gen(c.n_buses(), 0);
    for (int g : c.generator_indices()) is_gen[g] = 1;
    bool any_gen_eliminated = false;
    for (int v : partition.eliminated) any_gen_eliminated |= is_gen[v] != 0;
    if (any_gen_eliminated) {
      NodePartition extended;
      for (int v = 0; v < c.n_buses(); ++v) {
        const bool elim = ranking.ranks[v] > c.n_buses() - eliminate_count &&
                          !is_gen[v];
        (elim ? extended.eliminated : extended.retained).push_back(v);
      }
      extended.connectivity_warning =
          !subgraph_connected(c, extended.retained);
      reduced = prune_abnormal_branches(ward_eliminate(c, extended),
                                        config.x_max);
    }
  } else {
    reduced = relocate_generators(c, reduced);
  }

  int slack = -1;
  if (config.slack) {
    slack = *config.slack;
  } else {
    // Default slack: the generating retained bus with the lowest id.
    int best_red = -1;
    for (int i = 0; i < reduced.grid.n_buses(); ++i) {
      if (!reduced.grid.buses[i].is_generator) continue;
      if (best_red < 0 ||
          reduced.grid.buses[i].id < reduced.grid.buses[best_red].id)
        best_red = i;
    }
    if (best_red < 0) best_red = 0;
    slack = reduced.original_bus_index[best_red];
  }
  reduced = redistribute_loads(c, reduced, slack);

  if (report) {
    report->eliminated_ids = reduced.eliminated_ids;
    report->pruned = reduced.pruned;
    report->generator_map = reduced.generator_map;
    report->equivalent_branches.clear();
    for (int idx : reduced.equivalent_branch_indices) {
      const auto& br = reduced.grid.branches[idx];
      report->equivalent_branches.push_back(
          {static_cast<double>(reduced.grid.buses[br.from].id),
           static_cast<double>(reduced.grid.buses[br.to].id), br.reactance});
    }
    report->connectivity_warning = reduced.connectivity_warning;

    // Flow-consistency summary against the full model.
    auto inj_full = c.injections_mw();
    Eigen::VectorXd p_full =
        Eigen::Map<const Eigen::VectorXd>(inj_full.data(), c.n_buses());
    auto sol_full = dc_power_flow(c, p_full, slack);
    auto inj_red = reduced.grid.injections_mw();
    Eigen::VectorXd p_red =
        Eigen::Map<const Eigen::VectorXd>(inj_red.data(), reduced.grid.n_buses());
    int slack_red = 0;
    for (int i = 0; i < reduced.grid.n_buses(); ++i)
      if (reduced.original_bus_index[i] == slack) slack_red = i;
    auto sol_red = dc_power_flow(reduced.grid, p_red, slack_red);
    double max_angle = 0.0;
    for (int i = 0; i < reduced.grid.n_buses(); ++i)
      max_angle = std::max(
          max_angle, std::abs(sol_red.angles_rad(i) -
                              sol_full.angles_rad(reduced.original_bus_index[i])));
    // match original retained branches by construction order
    std::vector<char> is_eq(reduced.grid.branches.size(), 0);
    for (int idx : reduced.equivalent_branch_indices) is_eq[idx] = 1;
    double max_flow = 0.0;
    {
      std::vector<int> full_retained_branches;
      std::vector<char> retained_full(c.n_buses(), 0);
      for (int orig : reduced.original_bus_index) retained_full[orig] = 1;
      for (int l = 0; l < c.n_branches(); ++l)
        if (retained_full[c.branches[l].from] && retained_full[c.branches[l].to])
          full_retained_branches.push_back(l);
      int rl = 0;
      for (size_t l = 0; l < reduced.grid.branches.size(); ++l) {
        if (is_eq[l]) continue;
        max_flow = std::max(
            max_flow,
            std::abs(sol_red.flows_mw(l) -
                     sol_full.flows_mw(full_retained_branches[rl])));
        ++rl;
      }
    }
    report->max_angle_mismatch_rad = max_angle;
    report->max_flow_mismatch_mw = max_flow;
  }
  return reduced;
}

}  // namespace gridred
