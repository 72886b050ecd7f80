#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "gridred/centrality.hpp"
#include "gridred/dc.hpp"
#include "gridred/errors.hpp"
#include "gridred/graph.hpp"
#include "test_helpers.hpp"

using namespace gridred;

namespace {

std::vector<int> bottom_k_ids(const GridCase& c, const NodeScoreVector& sv,
                              int k) {
  std::vector<int> ids(c.n_buses());
  for (int i = 0; i < c.n_buses(); ++i) ids[sv.ranks[i] - 1] = c.buses[i].id;
  return {ids.end() - k, ids.end()};
}

// Exact betweenness of a tree: count node pairs whose unique path crosses v.
std::vector<double> tree_betweenness_bruteforce(const GridCase& c) {
  auto g = collapse_to_graph(c, EdgeWeight::Unit);
  const int n = g.n;
  std::vector<double> b(n, 0.0);
  for (int f = 0; f < n; ++f) {
    for (int t = f + 1; t < n; ++t) {
      // BFS path from f to t (unique in a tree)
      std::vector<int> parent(n, -1);
      std::vector<int> queue{f};
      parent[f] = f;
      for (size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        for (auto [v, w] : g.adj[u]) {
          (void)w;
          if (parent[v] < 0) {
            parent[v] = u;
            queue.push_back(v);
          }
        }
      }
      for (int v = parent[t]; v != f; v = parent[v]) b[v] += 1.0;
    }
  }
  return b;
}

GridCase random_tree(std::mt19937& rng, int n) {
  GridCase c;
  c.name = "tree";
  std::uniform_real_distribution<double> ux(0.05, 0.4);
  for (int i = 0; i < n; ++i) c.buses.push_back({i + 1, false, false, 0, 0});
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> up(0, i - 1);
    c.branches.push_back({up(rng), i, ux(rng), 50.0, true});
  }
  c.buses[0].is_generator = true;
  c.buses[0].generation_mw = 10.0;
  c.buses[n - 1].is_load = true;
  c.buses[n - 1].load_mw = 10.0;
  return c;
}

}  // namespace

TEST_CASE("classical betweenness: path and cycle") {
  GridCase path;
  path.buses = {{1, true, false, 5, 0}, {2, false, false, 0, 0},
                {3, false, true, 0, 5}};
  path.branches = {{0, 1, 0.1, 10, true}, {1, 2, 0.1, 10, true}};
  auto b = classical_betweenness(path, false);
  CHECK(b.scores[0] == doctest::Approx(0.0));
  CHECK(b.scores[1] == doctest::Approx(1.0));
  CHECK(b.scores[2] == doctest::Approx(0.0));
  CHECK(b.ranks[1] == 1);

  GridCase cyc;
  for (int i = 0; i < 4; ++i) cyc.buses.push_back({i + 1, i == 0, i == 2,
                                                   i == 0 ? 5.0 : 0.0,
                                                   i == 2 ? 5.0 : 0.0});
  for (int i = 0; i < 4; ++i)
    cyc.branches.push_back({i, (i + 1) % 4, 0.1, 10, true});
  auto bc = classical_betweenness(cyc, false);
  for (int v = 0; v < 4; ++v) CHECK(bc.scores[v] == doctest::Approx(0.5));
}

TEST_CASE("classical betweenness: ieee30 mean matches the reference value") {
  auto c = testutil::ieee30();
  auto b = classical_betweenness(c, false);
  double mean = 0.0;
  for (double s : b.scores) mean += s;
  mean /= c.n_buses();
  CHECK(mean == doctest::Approx(33.43).epsilon(0.01));
}

TEST_CASE("classical betweenness on trees equals pair counting") {
  std::mt19937 rng(17);
  for (int iter = 0; iter < 8; ++iter) {
    auto c = random_tree(rng, 8);
    auto b = classical_betweenness(c, false);
    auto oracle = tree_betweenness_bruteforce(c);
    for (int v = 0; v < c.n_buses(); ++v)
      CHECK(b.scores[v] == doctest::Approx(oracle[v]).epsilon(1e-12));
  }
}

TEST_CASE("transmission capacity: two-bus and triangle") {
  auto c2 = testutil::two_bus(0.5, 50.0);
  auto k2 = transmission_capacity(c2, compute_ptdf(c2, 0));
  CHECK(k2.values_mw(0, 0) == doctest::Approx(50.0));
  CHECK(k2.binding_line(0, 0) == 0);

  auto ct = testutil::triangle(1.0, 90.0);
  auto kt = transmission_capacity(ct, compute_ptdf(ct, 0));
  CHECK(kt.values_mw(0, 0) == doctest::Approx(135.0));
}

TEST_CASE("kappa loads the binding line to its rating and nothing above") {
  auto c = testutil::ieee30();
  auto ptdf = compute_ptdf(c, 0);
  auto kappa = transmission_capacity(c, ptdf);
  const auto gens = kappa.generator_nodes;
  const auto loads = kappa.load_nodes;
  for (size_t gi = 0; gi < gens.size(); ++gi) {
    for (size_t di = 0; di < loads.size(); ++di) {
      if (gens[gi] == loads[di]) continue;
      const double k = kappa.values_mw(gi, di);
      Eigen::VectorXd p = Eigen::VectorXd::Zero(c.n_buses());
      p(gens[gi]) = k;
      p(loads[di]) = -k;
      auto sol = dc_power_flow(c, p, 0);
      double worst = 0.0;
      int at_cap = 0;
      for (int l = 0; l < c.n_branches(); ++l) {
        const double loading = std::abs(sol.flows_mw(l)) /
                               c.branches[l].capacity_mw;
        worst = std::max(worst, loading);
        if (std::abs(loading - 1.0) <= 1e-6) ++at_cap;
      }
      CHECK(worst == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(at_cap >= 1);
    }
  }
}

TEST_CASE("extended betweenness: series path carries kappa") {
  // one generator, one load, a middle transit node
  GridCase c;
  c.buses = {{1, true, false, 10, 0}, {2, false, false, 0, 0},
             {3, false, true, 0, 10}};
  c.branches = {{0, 1, 0.1, 40, true}, {1, 2, 0.2, 20, true}};
  auto ptdf = compute_ptdf(c, 0);
  auto kappa = transmission_capacity(c, ptdf);
  auto b = extended_betweenness(c, ptdf, kappa);
  CHECK(b.scores[1] == doctest::Approx(20.0));  // kappa = min(40, 20)
  // endpoints score zero: every pair touches them
  CHECK(b.scores[0] == doctest::Approx(0.0));
  CHECK(b.scores[2] == doctest::Approx(0.0));
}

TEST_CASE("extended betweenness: empty incident line set scores zero") {
  GridCase c;
  c.buses = {{1, true, false, 10, 0}, {2, false, true, 0, 10},
             {3, false, false, 0, 0}};
  c.branches = {{0, 1, 0.1, 40, true}, {1, 2, 0.3, 20, false}};
  // bus 3's only branch is out of service; fabricate tables directly
  PtdfMatrix ptdf;
  ptdf.slack = 0;
  ptdf.values = Eigen::MatrixXd::Zero(2, 3);
  ptdf.values(0, 1) = -1.0;
  TransmissionCapacityTable kappa;
  kappa.generator_nodes = {0};
  kappa.load_nodes = {1};
  kappa.values_mw = Eigen::MatrixXd::Constant(1, 1, 40.0);
  kappa.binding_line = Eigen::MatrixXi::Constant(1, 1, 0);
  auto b = extended_betweenness(c, ptdf, kappa);
  CHECK(b.scores[2] == 0.0);
}

TEST_CASE("extended betweenness: ieee30 regression and bottom-ten order") {
  auto c = testutil::ieee30();
  auto ptdf = compute_ptdf(c, 0);
  auto kappa = transmission_capacity(c, ptdf);
  auto b = extended_betweenness(c, ptdf, kappa);
  double mean = 0.0;
  for (double s : b.scores) mean += s;
  mean /= c.n_buses();
  // brute-force value cross-checked against an independent implementation
  CHECK(mean == doctest::Approx(686.2156594407).epsilon(1e-8));
  auto bottom = bottom_k_ids(c, b, 10);
  CHECK(bottom == std::vector<int>{23, 1, 7, 14, 8, 29, 30, 11, 13, 26});
}

TEST_CASE("extended betweenness is invariant under uniform reactance scaling") {
  std::mt19937 rng(23);
  auto c = testutil::random_case(rng, 10);
  auto scaled = c;
  for (auto& br : scaled.branches) br.reactance *= 3.7;
  auto score = [](const GridCase& g) {
    auto ptdf = compute_ptdf(g, 0);
    auto kappa = transmission_capacity(g, ptdf);
    return extended_betweenness(g, ptdf, kappa).scores;
  };
  auto a = score(c);
  auto b = score(scaled);
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
}

TEST_CASE("global efficiency: closed forms") {
  auto c2 = testutil::two_bus(0.25);
  CHECK(global_efficiency(c2, true) == doctest::Approx(4.0));
  CHECK(global_efficiency(c2, false) == doctest::Approx(1.0));

  // complete graph on 4 nodes
  GridCase k4;
  for (int i = 0; i < 4; ++i)
    k4.buses.push_back({i + 1, i == 0, i == 1, i == 0 ? 5.0 : 0.0,
                        i == 1 ? 5.0 : 0.0});
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      k4.branches.push_back({i, j, 0.2, 30, true});
  CHECK(global_efficiency(k4, false) == doctest::Approx(1.0));
}

TEST_CASE("global efficiency: ieee30 unweighted value") {
  CHECK(global_efficiency(testutil::ieee30(), false) ==
        doctest::Approx(0.3780).epsilon(0.01));
}

TEST_CASE("global efficiency grows when an edge is added") {
  std::mt19937 rng(31);
  for (int iter = 0; iter < 6; ++iter) {
    auto c = testutil::random_case(rng, 9, 0.3);
    double before = global_efficiency(c, false);
    // add a fresh edge
    for (int a = 0; a < c.n_buses(); ++a) {
      bool added = false;
      for (int b = a + 1; b < c.n_buses(); ++b) {
        bool exists = false;
        for (const auto& br : c.branches)
          exists |= (std::minmax(br.from, br.to) == std::minmax(a, b));
        if (!exists) {
          c.branches.push_back({a, b, 0.1, 30, true});
          added = true;
          break;
        }
      }
      if (added) break;
    }
    CHECK(global_efficiency(c, false) >= before - 1e-12);
  }
}

TEST_CASE("electrical efficiency: closed forms and homogeneity") {
  auto c = testutil::two_bus(0.4, 50.0);
  auto ptdf = compute_ptdf(c, 0);
  auto kappa = transmission_capacity(c, ptdf);
  auto z = bus_impedance(c);
  CHECK(electrical_efficiency(c, kappa, z) == doctest::Approx(125.0));

  auto doubled = c;
  for (auto& br : doubled.branches) br.capacity_mw *= 2.0;
  auto kd = transmission_capacity(doubled, compute_ptdf(doubled, 0));
  auto zd = bus_impedance(doubled);
  CHECK(electrical_efficiency(doubled, kd, zd) == doctest::Approx(250.0));
}

TEST_CASE("electrical efficiency: ieee30 frozen reference") {
  auto c = testutil::ieee30();
  auto ptdf = compute_ptdf(c, 0);
  auto kappa = transmission_capacity(c, ptdf);
  auto z = bus_impedance(c);
  // frozen after brute-force evaluation, cross-checked independently
  CHECK(electrical_efficiency(c, kappa, z) ==
        doctest::Approx(288.2452892012).epsilon(1e-8));
  CHECK(electrical_efficiency_of_case(c) ==
        doctest::Approx(288.2452892012).epsilon(1e-8));
}

TEST_CASE("net ability: hand-solved removal of a leaf load") {
  // path 1-2-3: gen at 1, loads at 2 and 3
  auto c = testutil::path3(0.1, 0.2, 40.0, 20.0, 10.0, 10.0);
  // A_ori = (400 + 20/0.3) / 2; removing bus 3 leaves A_re = 400
  const double a_ori = (40.0 / 0.1 + 20.0 / 0.3) / 2.0;
  const double expected = std::abs(a_ori - 400.0) / a_ori;
  auto na = net_ability(c);
  CHECK(na.scores[2] == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("net ability: articulation node removal zeroes the efficiency") {
  GridCase c;
  c.buses = {{1, true, false, 10, 0}, {2, false, false, 0, 0},
             {3, false, true, 0, 10}};
  c.branches = {{0, 1, 0.1, 40, true}, {1, 2, 0.2, 20, true}};
  auto na = net_ability(c);
  CHECK(na.scores[1] == doctest::Approx(1.0));
}

TEST_CASE("net ability: ieee30 regression, bounds, and bottom set") {
  auto c = testutil::ieee30();
  auto na = net_ability(c);
  double mean = 0.0;
  for (double s : na.scores) {
    CHECK(s >= 0.0);
    CHECK(s <= 1.0 + 1e-12);
    mean += s;
  }
  mean /= c.n_buses();
  CHECK(mean == doctest::Approx(0.1239731151).epsilon(1e-8));
  auto bottom = bottom_k_ids(c, na, 10);
  CHECK(bottom == std::vector<int>{30, 29, 14, 20, 8, 19, 17, 18, 16, 11});
}

TEST_CASE("congestion criterion: flat cases") {
  auto c = testutil::two_bus(0.1, 100.0, 50.0, 50.0);
  auto cg = congestion_criterion(c);
  CHECK(cg.scores[0] == doctest::Approx(0.5));
  CHECK(cg.scores[1] == doctest::Approx(0.5));

  // node incident only to an unloaded line scores zero
  GridCase t;
  t.buses = {{1, true, false, 10, 0}, {2, false, true, 0, 10},
             {3, false, false, 0, 0}};
  t.branches = {{0, 1, 0.1, 40, true}, {1, 2, 0.2, 20, true}};
  auto cg2 = congestion_criterion(t);
  CHECK(cg2.scores[2] == doctest::Approx(0.0));

  GridCase nodispatch = t;
  for (auto& b : nodispatch.buses) {
    b.generation_mw = 0.0;
    b.load_mw = 0.0;
  }
  CHECK_THROWS_AS(congestion_criterion(nodispatch), ConfigError);
}

TEST_CASE("rank vectors are permutations and label invariant") {
  auto c = testutil::ieee30();
  auto b = classical_betweenness(c, true);
  std::vector<int> sorted = b.ranks;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < c.n_buses(); ++i) CHECK(sorted[i] == i + 1);

  // permute storage order; ranks must follow the ids
  GridCase perm = c;
  std::mt19937 rng(41);
  std::vector<int> order(c.n_buses());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> inverse(c.n_buses());
  for (int i = 0; i < c.n_buses(); ++i) inverse[order[i]] = i;
  perm.buses.clear();
  for (int i = 0; i < c.n_buses(); ++i) perm.buses.push_back(c.buses[order[i]]);
  perm.branches = c.branches;
  for (auto& br : perm.branches) {
    br.from = inverse[br.from];
    br.to = inverse[br.to];
  }
  auto bp = classical_betweenness(perm, true);
  for (int i = 0; i < c.n_buses(); ++i)
    CHECK(bp.ranks[inverse[order[i]]] == b.ranks[order[i]]);
}
