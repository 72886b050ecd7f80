#include "gridred/grid_case.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gridred/errors.hpp"

namespace gridred {

std::optional<int> GridCase::index_of(int external_id) const {
  for (int i = 0; i < n_buses(); ++i) {
    if (buses[i].id == external_id) return i;
  }
  return std::nullopt;
}

std::vector<int> GridCase::generator_indices() const {
  std::vector<int> out;
  for (int i = 0; i < n_buses(); ++i) {
    if (buses[i].is_generator) out.push_back(i);
  }
  return out;
}

std::vector<int> GridCase::load_indices() const {
  std::vector<int> out;
  for (int i = 0; i < n_buses(); ++i) {
    if (buses[i].is_load) out.push_back(i);
  }
  return out;
}

double GridCase::total_generation_mw() const {
  double s = 0.0;
  for (const auto& b : buses) s += b.generation_mw;
  return s;
}

double GridCase::total_load_mw() const {
  double s = 0.0;
  for (const auto& b : buses) s += b.load_mw;
  return s;
}

std::vector<double> GridCase::injections_mw() const {
  std::vector<double> p(buses.size());
  for (size_t i = 0; i < buses.size(); ++i)
    p[i] = buses[i].generation_mw - buses[i].load_mw;
  return p;
}

std::vector<int> connected_components(const GridCase& c) {
  const int n = c.n_buses();
  std::vector<std::vector<int>> adj(n);
  for (const auto& br : c.branches) {
    if (!br.in_service) continue;
    adj[br.from].push_back(br.to);
    adj[br.to].push_back(br.from);
  }
  std::vector<int> comp(n, -1);
  int next = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[u]) {
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

namespace {

std::string describe_islands(const GridCase& c, const std::vector<int>& comp) {
  int n_comp = *std::max_element(comp.begin(), comp.end()) + 1;
  std::ostringstream os;
  os << n_comp << " islands:";
  for (int k = 0; k < n_comp; ++k) {
    os << " {";
    bool first = true;
    for (int i = 0; i < c.n_buses(); ++i) {
      if (comp[i] != k) continue;
      if (!first) os << ",";
      os << c.buses[i].id;
      first = false;
    }
    os << "}";
  }
  return os.str();
}

}  // namespace

void validate_case(const GridCase& c, bool lenient) {
  const int n = c.n_buses();
  if (n < 2) throw ValidationError("case needs at least two buses");
  if (!(c.base_mva > 0.0))
    throw ValidationError("base_mva must be positive");

  std::unordered_set<int> seen;
  for (const auto& b : c.buses) {
    if (!seen.insert(b.id).second)
      throw ValidationError("duplicate bus id " + std::to_string(b.id));
    if (!std::isfinite(b.generation_mw) || !std::isfinite(b.load_mw))
      throw ValidationError("non-finite power at bus " + std::to_string(b.id));
    if (!lenient) {
      if (b.generation_mw < 0.0)
        throw ValidationError("negative generation at bus " +
                              std::to_string(b.id));
      if (b.load_mw < 0.0)
        throw ValidationError("negative load at bus " + std::to_string(b.id));
    }
  }

  for (size_t l = 0; l < c.branches.size(); ++l) {
    const auto& br = c.branches[l];
    if (br.from < 0 || br.from >= n || br.to < 0 || br.to >= n)
      throw ValidationError("branch " + std::to_string(l) +
                            " references a nonexistent bus");
    if (br.from == br.to)
      throw ValidationError("branch " + std::to_string(l) + " is a self-loop");
    if (!std::isfinite(br.reactance) || br.reactance == 0.0 ||
        (!lenient && br.reactance < 0.0))
      throw ValidationError("branch " + std::to_string(l) +
                            " has non-positive reactance");
    if (!std::isfinite(br.capacity_mw) || br.capacity_mw <= 0.0)
      throw ValidationError("branch " + std::to_string(l) +
                            " has non-positive capacity");
  }

  auto comp = connected_components(c);
  if (*std::max_element(comp.begin(), comp.end()) != 0)
    throw ValidationError("network is not connected: " +
                          describe_islands(c, comp));

  bool any_gen = false, any_load = false;
  for (const auto& b : c.buses) {
    any_gen = any_gen || b.is_generator;
    any_load = any_load || b.is_load;
  }
  if (!any_gen) throw ValidationError("case has no generator bus");
  if (!any_load) throw ValidationError("case has no load bus");
}

GridCase induced_subcase(const GridCase& c, const std::vector<int>& keep) {
  GridCase out;
  out.name = c.name;
  out.base_mva = c.base_mva;
  std::vector<int> remap(c.n_buses(), -1);
  out.buses.reserve(keep.size());
  for (size_t i = 0; i < keep.size(); ++i) {
    remap[keep[i]] = static_cast<int>(i);
    out.buses.push_back(c.buses[keep[i]]);
  }
  for (const auto& br : c.branches) {
    if (remap[br.from] < 0 || remap[br.to] < 0) continue;
    Branch nb = br;
    nb.from = remap[br.from];
    nb.to = remap[br.to];
    out.branches.push_back(nb);
  }
  return out;
}

}  // namespace gridred
