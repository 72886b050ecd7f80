#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "CLI11.hpp"
#include "gridred/centrality.hpp"
#include "gridred/graph.hpp"
#include "gridred/reference.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace gridred;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Same generator family as the test suite: spanning ring plus chords.
GridCase synth_case(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> ux(0.02, 0.5);
  std::uniform_real_distribution<double> ur(20.0, 200.0);
  std::uniform_real_distribution<double> up(10.0, 100.0);
  GridCase c;
  c.name = "synth";
  for (int i = 0; i < n; ++i) c.buses.push_back({i + 1, false, false, 0, 0});
  std::set<std::pair<int, int>> used;
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    used.insert({std::min(i, j), std::max(i, j)});
    c.branches.push_back({i, j, ux(rng), ur(rng), true});
  }
  std::uniform_int_distribution<int> un(0, n - 1);
  for (int e = 0; e < n / 2; ++e) {
    int a = un(rng), b = un(rng);
    if (a == b) continue;
    auto key = std::minmax(a, b);
    if (!used.insert({key.first, key.second}).second) continue;
    c.branches.push_back({a, b, ux(rng), ur(rng), true});
  }
  double total = 0.0;
  for (int k = 0; k < std::max(1, n / 6); ++k) {
    int b = un(rng);
    double p = up(rng);
    c.buses[b].generation_mw += p;
    c.buses[b].is_generator = true;
    total += p;
  }
  for (int k = 0; k < std::max(1, n / 2); ++k) {
    int b = un(rng);
    c.buses[b].load_mw += total / std::max(1, n / 2);
    c.buses[b].is_load = true;
  }
  return c;
}

struct Row {
  const char* kernel;
  int n;
  double serial_ms;
  double parallel_ms;
  double max_diff;
};

void print_row(const Row& r) {
  std::printf("%-22s %6d %12.2f %12.2f %9.2fx %12.3e\n", r.kernel, r.n,
              r.serial_ms, r.parallel_ms,
              r.parallel_ms > 0 ? r.serial_ms / r.parallel_ms : 0.0,
              r.max_diff);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  std::vector<int> sizes{200, 400};
  int net_nodes = 60;
  unsigned seed = 42;
  int repeats = 3;
  app.add_option("--sizes", sizes, "graph sizes for the path/score kernels");
  app.add_option("--net-nodes", net_nodes, "size for the net-ability kernel");
  app.add_option("--seed", seed, "rng seed");
  app.add_option("--repeats", repeats, "timing repeats (best-of)");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; both columns run serial code\n");
#endif
  std::printf("%-22s %6s %12s %12s %9s %12s\n", "kernel", "n", "serial[ms]",
              "parallel[ms]", "speedup", "max|diff|");

  auto best_of = [&](auto&& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
      auto t0 = Clock::now();
      fn();
      best = std::min(best, ms_since(t0));
    }
    return best;
  };

  for (int n : sizes) {
    std::mt19937 rng(seed);
    auto c = synth_case(rng, n);
    auto g = collapse_to_graph(c, EdgeWeight::Reactance);

    {
      Eigen::MatrixXd ser, par;
      double ts = best_of([&] { ser = reference::all_pairs_distances(c, true); });
      double tp = best_of([&] { par = all_pairs_distances(g, true); });
      print_row({"all_pairs_distances", n, ts, tp,
                 (ser - par).cwiseAbs().maxCoeff()});
    }
    {
      std::vector<double> ser, par;
      double ts = best_of([&] { ser = reference::betweenness_scores(c, true); });
      auto gu = collapse_to_graph(c, EdgeWeight::Reactance);
      double tp = best_of([&] { par = betweenness_scores(gu, true); });
      double diff = 0.0;
      for (size_t i = 0; i < ser.size(); ++i)
        diff = std::max(diff, std::abs(ser[i] - par[i]));
      print_row({"betweenness", n, ts, tp, diff});
    }
    {
      auto ptdf = compute_ptdf(c, 0);
      TransmissionCapacityTable ser, par;
      double ts = best_of([&] { ser = reference::transmission_capacity(c, ptdf); });
      double tp = best_of([&] { par = transmission_capacity(c, ptdf); });
      double diff = 0.0;
      for (int i = 0; i < ser.values_mw.rows(); ++i)
        for (int j = 0; j < ser.values_mw.cols(); ++j) {
          if (std::isnan(ser.values_mw(i, j))) continue;
          diff = std::max(diff,
                          std::abs(ser.values_mw(i, j) - par.values_mw(i, j)));
        }
      print_row({"transmission_capacity", n, ts, tp, diff});

      std::vector<double> eser;
      NodeScoreVector epar;
      double tes = best_of(
          [&] { eser = reference::extended_betweenness_scores(c, ptdf, ser); });
      double tep = best_of([&] { epar = extended_betweenness(c, ptdf, par); });
      double ediff = 0.0;
      for (size_t i = 0; i < eser.size(); ++i)
        ediff = std::max(ediff, std::abs(eser[i] - epar.scores[i]));
      print_row({"extended_betweenness", n, tes, tep, ediff});
    }
  }

  {
    std::mt19937 rng(seed + 1);
    auto c = synth_case(rng, net_nodes);
    std::vector<double> ser;
    NodeScoreVector par;
    double ts = best_of([&] { ser = reference::net_ability_scores(c); });
    double tp = best_of([&] { par = net_ability(c); });
    double diff = 0.0;
    for (size_t i = 0; i < ser.size(); ++i)
      diff = std::max(diff, std::abs(ser[i] - par.scores[i]));
    print_row({"net_ability", net_nodes, ts, tp, diff});
  }
  return 0;
}
