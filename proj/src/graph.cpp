#include "gridred/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <queue>

namespace gridred {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Equal-length detection for weighted shortest-path counting.
bool same_length(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}
}  // namespace

SimpleGraph collapse_to_graph(const GridCase& c, EdgeWeight weight) {
  std::map<std::pair<int, int>, double> edges;  // kept ordered for determinism
  double x_max = 0.0, x_sum = 0.0;
  int x_count = 0;
  for (const auto& br : c.branches) {
    if (!br.in_service) continue;
    x_max = std::max(x_max, std::abs(br.reactance));
    x_sum += std::abs(br.reactance);
    ++x_count;
  }
  const double x_mean = x_count > 0 ? x_sum / x_count : 1.0;
  for (const auto& br : c.branches) {
    if (!br.in_service) continue;
    auto key = std::minmax(br.from, br.to);
    double w = 1.0;
    switch (weight) {
      case EdgeWeight::Unit: w = 1.0; break;
      case EdgeWeight::Reactance: w = std::abs(br.reactance); break;
      case EdgeWeight::NormalizedReactance:
        w = std::abs(br.reactance) / x_max;
        break;
      case EdgeWeight::MeanNormalizedReactance:
        w = std::abs(br.reactance) / x_mean;
        break;
    }
    auto [it, inserted] = edges.emplace(std::pair{key.first, key.second}, w);
    if (!inserted) it->second = std::min(it->second, w);
  }
  SimpleGraph g;
  g.n = c.n_buses();
  g.adj.assign(g.n, {});
  g.edge_count = static_cast<int>(edges.size());
  for (const auto& [uv, w] : edges) {
    g.adj[uv.first].emplace_back(uv.second, w);
    g.adj[uv.second].emplace_back(uv.first, w);
  }
  return g;
}

std::vector<double> shortest_distances(const SimpleGraph& g, int source,
                                       bool weighted) {
  std::vector<double> dist(g.n, kInf);
  dist[source] = 0.0;
  if (!weighted) {
    std::deque<int> q{source};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (auto [v, w] : g.adj[u]) {
        (void)w;
        if (dist[v] == kInf) {
          dist[v] = dist[u] + 1.0;
          q.push_back(v);
        }
      }
    }
  } else {
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.emplace(0.0, source);
    std::vector<char> done(g.n, 0);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      done[u] = 1;
      for (auto [v, w] : g.adj[u]) {
        if (!done[v] && d + w < dist[v]) {
          dist[v] = d + w;
          pq.emplace(dist[v], v);
        }
      }
    }
  }
  return dist;
}

Eigen::MatrixXd all_pairs_distances(const SimpleGraph& g, bool weighted,
                                    Exec exec) {
  Eigen::MatrixXd d(g.n, g.n);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < g.n; ++s) {
      auto row = shortest_distances(g, s, weighted);
      for (int t = 0; t < g.n; ++t) d(s, t) = row[t];
    }
  } else {
    for (int s = 0; s < g.n; ++s) {
      auto row = shortest_distances(g, s, weighted);
      for (int t = 0; t < g.n; ++t) d(s, t) = row[t];
    }
  }
  return d;
}

std::vector<double> betweenness_source_contribution(const SimpleGraph& g,
                                                    int source,
                                                    bool weighted) {
  const int n = g.n;
  std::vector<double> dist(n, kInf), sigma(n, 0.0), delta(n, 0.0);
  std::vector<std::vector<int>> preds(n);
  std::vector<int> order;  // nodes in nondecreasing settled distance
  order.reserve(n);
  dist[source] = 0.0;
  sigma[source] = 1.0;

  if (!weighted) {
    std::deque<int> q{source};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      order.push_back(u);
      for (auto [v, w] : g.adj[u]) {
        (void)w;
        if (dist[v] == kInf) {
          dist[v] = dist[u] + 1.0;
          q.push_back(v);
        }
        if (dist[v] == dist[u] + 1.0) {
          sigma[v] += sigma[u];
          preds[v].push_back(u);
        }
      }
    }
  } else {
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.emplace(0.0, source);
    std::vector<char> done(n, 0);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      done[u] = 1;
      order.push_back(u);
      for (auto [v, w] : g.adj[u]) {
        if (done[v]) continue;
        double nd = dist[u] + w;
        if (nd < dist[v] && !same_length(nd, dist[v])) {
          dist[v] = nd;
          sigma[v] = sigma[u];
          preds[v].assign(1, u);
          pq.emplace(nd, v);
        } else if (same_length(nd, dist[v])) {
          sigma[v] += sigma[u];
          preds[v].push_back(u);
        }
      }
    }
  }

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int w = *it;
    for (int u : preds[w])
      delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
  }
  delta[source] = 0.0;
  return delta;
}

std::vector<double> betweenness_scores(const SimpleGraph& g, bool weighted,
                                       Exec exec) {
  const int n = g.n;
  // Per-source contributions land in disjoint rows and are reduced in source
  // order, so Serial and Parallel agree bit-for-bit.
  std::vector<std::vector<double>> rows(n);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < n; ++s)
      rows[s] = betweenness_source_contribution(g, s, weighted);
  } else {
    for (int s = 0; s < n; ++s)
      rows[s] = betweenness_source_contribution(g, s, weighted);
  }
  std::vector<double> b(n, 0.0);
  for (int s = 0; s < n; ++s)
    for (int v = 0; v < n; ++v) b[v] += rows[s][v];
  for (int v = 0; v < n; ++v) b[v] *= 0.5;  // unordered pairs
  return b;
}

std::vector<int> graph_components(const SimpleGraph& g) {
  std::vector<int> comp(g.n, -1);
  int next = 0;
  std::vector<int> stack;
  for (int s = 0; s < g.n; ++s) {
    if (comp[s] != -1) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (auto [v, w] : g.adj[u]) {
        (void)w;
        if (comp[v] == -1) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace gridred
