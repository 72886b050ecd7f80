#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "gridred/grid_case.hpp"

namespace gridred {

// Provenance block carried by serialized reduced models.
struct CaseProvenance {
  std::vector<int> eliminated;            // external ids
  std::map<int, int> generator_map;       // original gen id -> retained id
  std::vector<std::array<double, 3>> equivalent_branches;  // from, to, x_eq
  std::vector<std::array<double, 3>> pruned;               // from, to, x_eq
};

// Native JSON case format. Top-level keys: name, base_mva, buses
// ({id, gen_mw, load_mw}), branches ({from, to, x_pu, rate_mw, status});
// `from`/`to` are external bus ids. Files carrying a `provenance` key are
// reduced models and are validated leniently (equivalent loads may be
// negative).
GridCase parse_case_json(const std::string& text);

// MATPOWER-style subset: consumes the mpc.baseMVA scalar and the mpc.bus,
// mpc.gen, mpc.branch numeric tables. Only the columns needed for the DC
// model are read (bus id, Pd; gen bus, Pg, status; branch from/to/x/rateA/
// status). Branch capacity is taken from rateA.
GridCase parse_case_matpower(const std::string& text);

// Dispatch on extension: .json -> native, .m -> MATPOWER subset.
GridCase load_case(const std::string& path);

std::string to_json(const GridCase& c, const CaseProvenance* prov = nullptr);
std::string to_matpower(const GridCase& c);

std::string read_file(const std::string& path);
// Writes via a temp file in the same directory plus rename, so concurrent
// writers never interleave partial content.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace gridred
