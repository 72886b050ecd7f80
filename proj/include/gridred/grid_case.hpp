#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gridred {

struct Bus {
  int id = 0;  // external id as given in the case file
  bool is_generator = false;
  bool is_load = false;
  double generation_mw = 0.0;
  double load_mw = 0.0;
};

struct Branch {
  int from = 0;  // internal bus index (position in GridCase::buses)
  int to = 0;
  double reactance = 0.0;  // per-unit on the system base
  double capacity_mw = 0.0;
  bool in_service = true;
};

// Full network model. Buses are stored under a dense 0..N-1 internal index
// (the vector position); original ids live in Bus::id. Branches reference
// internal indices. All per-unit quantities are on base_mva.
struct GridCase {
  std::string name;
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;

  int n_buses() const { return static_cast<int>(buses.size()); }
  int n_branches() const { return static_cast<int>(branches.size()); }

  std::optional<int> index_of(int external_id) const;
  std::vector<int> generator_indices() const;
  std::vector<int> load_indices() const;
  double total_generation_mw() const;
  double total_load_mw() const;
  // Net injection gen - load per bus, MW.
  std::vector<double> injections_mw() const;
};

// Checks the model invariants; throws ValidationError on the first failure.
// `lenient` relaxes the sign requirements on loads and reactances, which
// equivalent (reduced) models may legitimately violate.
void validate_case(const GridCase& c, bool lenient = false);

// Component id per bus over in-service branches (0-based, component of bus 0
// first in discovery order).
std::vector<int> connected_components(const GridCase& c);

// Subnetwork induced by `keep` (internal indices): buses in the given order,
// branches with both endpoints kept, endpoints remapped.
GridCase induced_subcase(const GridCase& c, const std::vector<int>& keep);

}  // namespace gridred
