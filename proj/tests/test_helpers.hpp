#pragma once

#include <random>
#include <set>
#include <string>

#include "gridred/case_io.hpp"
#include "gridred/grid_case.hpp"

#ifndef GRIDRED_DATA_DIR
#define GRIDRED_DATA_DIR "data"
#endif

namespace testutil {

inline gridred::GridCase two_bus(double x = 0.5, double rate = 50.0,
                                 double gen = 100.0, double load = 100.0) {
  gridred::GridCase c;
  c.name = "two_bus";
  c.buses = {{1, true, false, gen, 0.0}, {2, false, true, 0.0, load}};
  c.branches = {{0, 1, x, rate, true}};
  return c;
}

// Equal-reactance triangle, generator at bus 1, load at bus 2.
inline gridred::GridCase triangle(double x = 1.0, double rate = 90.0) {
  gridred::GridCase c;
  c.name = "triangle";
  c.buses = {{1, true, false, 60.0, 0.0},
             {2, false, true, 0.0, 60.0},
             {3, false, false, 0.0, 0.0}};
  c.branches = {{0, 1, x, rate, true},
                {0, 2, x, rate, true},
                {1, 2, x, rate, true}};
  return c;
}

// Series path 1-2-3 with a generator at one end.
inline gridred::GridCase path3(double x1 = 0.1, double x2 = 0.2,
                               double rate1 = 40.0, double rate2 = 20.0,
                               double load_mid = 20.0, double load_end = 10.0) {
  gridred::GridCase c;
  c.name = "path3";
  c.buses = {{1, true, false, load_mid + load_end, 0.0},
             {2, false, load_mid > 0.0, 0.0, load_mid},
             {3, false, load_end > 0.0, 0.0, load_end}};
  c.branches = {{0, 1, x1, rate1, true}, {1, 2, x2, rate2, true}};
  return c;
}

inline gridred::GridCase ieee30() {
  static const gridred::GridCase c =
      gridred::load_case(std::string(GRIDRED_DATA_DIR) + "/ieee30.json");
  return c;
}

// Connected random network: a spanning ring plus random chords; random
// reactances, ratings and a balanced random dispatch.
inline gridred::GridCase random_case(std::mt19937& rng, int n,
                                     double chord_factor = 0.5) {
  std::uniform_real_distribution<double> ux(0.02, 0.5);
  std::uniform_real_distribution<double> ur(20.0, 200.0);
  std::uniform_real_distribution<double> up(10.0, 100.0);
  gridred::GridCase c;
  c.name = "random";
  for (int i = 0; i < n; ++i) c.buses.push_back({i + 1, false, false, 0, 0});
  std::set<std::pair<int, int>> used;
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    used.insert({std::min(i, j), std::max(i, j)});
    c.branches.push_back({i, j, ux(rng), ur(rng), true});
  }
  const int extra = static_cast<int>(chord_factor * n);
  std::uniform_int_distribution<int> un(0, n - 1);
  for (int e = 0; e < extra; ++e) {
    int a = un(rng), b = un(rng);
    if (a == b) continue;
    auto key = std::minmax(a, b);
    if (!used.insert({key.first, key.second}).second) continue;
    c.branches.push_back({a, b, ux(rng), ur(rng), true});
  }
  const int n_gen = std::max(1, n / 6);
  const int n_load = std::max(1, n / 2);
  double total_gen = 0.0;
  for (int k = 0; k < n_gen; ++k) {
    int b = un(rng);
    double p = up(rng);
    c.buses[b].generation_mw += p;
    c.buses[b].is_generator = true;
    total_gen += p;
  }
  std::vector<double> shares;
  double share_sum = 0.0;
  std::vector<int> load_buses;
  for (int k = 0; k < n_load; ++k) {
    int b = un(rng);
    double s = up(rng);
    load_buses.push_back(b);
    shares.push_back(s);
    share_sum += s;
  }
  for (size_t k = 0; k < load_buses.size(); ++k) {
    c.buses[load_buses[k]].load_mw += total_gen * shares[k] / share_sum;
    c.buses[load_buses[k]].is_load = true;
  }
  return c;
}

}  // namespace testutil
