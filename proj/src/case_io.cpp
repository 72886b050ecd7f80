#include "gridred/case_io.hpp"

#include <unistd.h>

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "gridred/errors.hpp"
#include "json.hpp"

namespace gridred {

namespace {

using nlohmann::json;

int line_of_offset(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

void finalize_flags(GridCase& c) {
  for (auto& b : c.buses) {
    b.is_generator = b.generation_mw > 0.0;
    b.is_load = b.load_mw > 0.0;
  }
}

double require_number(const json& j, const char* key, const char* ctx) {
  if (!j.contains(key) || !j[key].is_number())
    throw ParseError(std::string(ctx) + ": missing numeric field '" + key +
                     "'");
  return j[key].get<double>();
}

}  // namespace

GridCase parse_case_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), line_of_offset(text, e.byte));
  }
  if (!doc.is_object() || !doc.contains("buses") || !doc.contains("branches"))
    throw ParseError("case document needs 'buses' and 'branches' arrays");

  GridCase c;
  c.name = doc.value("name", std::string("case"));
  c.base_mva = doc.value("base_mva", 100.0);

  std::unordered_map<int, int> index;
  for (const auto& jb : doc["buses"]) {
    Bus b;
    if (!jb.contains("id") || !jb["id"].is_number_integer())
      throw ParseError("bus entry: missing integer field 'id'");
    b.id = jb["id"].get<int>();
    b.generation_mw = require_number(jb, "gen_mw", "bus entry");
    b.load_mw = require_number(jb, "load_mw", "bus entry");
    if (!index.emplace(b.id, c.n_buses()).second)
      throw ValidationError("duplicate bus id " + std::to_string(b.id));
    c.buses.push_back(b);
  }
  for (const auto& jl : doc["branches"]) {
    Branch br;
    int from = static_cast<int>(require_number(jl, "from", "branch entry"));
    int to = static_cast<int>(require_number(jl, "to", "branch entry"));
    auto fi = index.find(from);
    auto ti = index.find(to);
    if (fi == index.end() || ti == index.end())
      throw ValidationError("branch " + std::to_string(from) + "-" +
                            std::to_string(to) +
                            " references an unknown bus");
    br.from = fi->second;
    br.to = ti->second;
    br.reactance = require_number(jl, "x_pu", "branch entry");
    br.capacity_mw = require_number(jl, "rate_mw", "branch entry");
    if (jl.contains("status") && jl["status"].is_boolean())
      br.in_service = jl["status"].get<bool>();
    else
      br.in_service = static_cast<int>(require_number(jl, "status",
                                                      "branch entry")) != 0;
    c.branches.push_back(br);
  }

  finalize_flags(c);
  validate_case(c, /*lenient=*/doc.contains("provenance"));
  return c;
}

namespace {

// Numeric table reader for the "mpc.<name> = [ rows... ];" layout. Rows are
// whitespace-separated numbers, one row per line, '%' starts a comment.
std::vector<std::vector<double>> read_table(const std::string& text,
                                            const std::string& key) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool inside = false;
  std::vector<std::vector<double>> rows;
  const std::string opener = "mpc." + key;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pc = line.find('%'); pc != std::string::npos) line.erase(pc);
    if (!inside) {
      auto pos = line.find(opener);
      if (pos == std::string::npos) continue;
      auto eq = line.find('=', pos);
      auto bracket = line.find('[', pos);
      if (eq == std::string::npos || bracket == std::string::npos) continue;
      inside = true;
      line.erase(0, bracket + 1);
    }
    bool closing = false;
    if (auto pos = line.find(']'); pos != std::string::npos) {
      line.erase(pos);
      closing = true;
    }
    std::vector<double> row;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      while (!tok.empty() && (tok.back() == ';' || tok.back() == ','))
        tok.pop_back();
      if (tok.empty()) continue;
      try {
        size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        row.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("bad numeric token '" + tok + "' in mpc." + key,
                         lineno);
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
    if (closing) return rows;
  }
  if (inside) throw ParseError("unterminated table mpc." + key);
  throw ParseError("table mpc." + key + " not found");
}

double read_scalar(const std::string& text, const std::string& key,
                   double fallback, bool required) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  const std::string opener = "mpc." + key;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pc = line.find('%'); pc != std::string::npos) line.erase(pc);
    auto pos = line.find(opener);
    if (pos == std::string::npos) continue;
    auto eq = line.find('=', pos);
    if (eq == std::string::npos) continue;
    std::string rest = line.substr(eq + 1);
    if (auto sc = rest.find(';'); sc != std::string::npos) rest.erase(sc);
    try {
      return std::stod(rest);
    } catch (const std::exception&) {
      throw ParseError("bad scalar mpc." + key, lineno);
    }
  }
  if (required) throw ParseError("scalar mpc." + key + " not found");
  return fallback;
}

}  // namespace

GridCase parse_case_matpower(const std::string& text) {
  GridCase c;
  c.name = "case";
  {
    // take the function name when present
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      auto pos = line.find("function mpc =");
      if (pos != std::string::npos) {
        std::istringstream rest(line.substr(pos + 14));
        rest >> c.name;
        break;
      }
      if (line.find("mpc.") != std::string::npos) break;
    }
  }
  c.base_mva = read_scalar(text, "baseMVA", 100.0, /*required=*/true);

  auto bus = read_table(text, "bus");
  auto gen = read_table(text, "gen");
  auto branch = read_table(text, "branch");

  std::unordered_map<int, int> index;
  for (const auto& row : bus) {
    if (row.size() < 3) throw ParseError("mpc.bus row needs at least 3 columns");
    Bus b;
    b.id = static_cast<int>(row[0]);
    b.load_mw = row[2];
    if (!index.emplace(b.id, c.n_buses()).second)
      throw ValidationError("duplicate bus id " + std::to_string(b.id));
    c.buses.push_back(b);
  }
  for (const auto& row : gen) {
    if (row.size() < 8) throw ParseError("mpc.gen row needs at least 8 columns");
    if (row[7] <= 0.0) continue;  // out-of-service unit
    auto it = index.find(static_cast<int>(row[0]));
    if (it == index.end())
      throw ValidationError("generator references unknown bus " +
                            std::to_string(static_cast<int>(row[0])));
    c.buses[it->second].generation_mw += row[1];
  }
  for (const auto& row : branch) {
    if (row.size() < 11)
      throw ParseError("mpc.branch row needs at least 11 columns");
    Branch br;
    auto fi = index.find(static_cast<int>(row[0]));
    auto ti = index.find(static_cast<int>(row[1]));
    if (fi == index.end() || ti == index.end())
      throw ValidationError("branch references unknown bus");
    br.from = fi->second;
    br.to = ti->second;
    br.reactance = row[3];
    br.capacity_mw = row[5];
    br.in_service = row[10] != 0.0;
    c.branches.push_back(br);
  }

  finalize_flags(c);
  validate_case(c);
  return c;
}

GridCase load_case(const std::string& path) {
  auto text = read_file(path);
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".m") return parse_case_matpower(text);
  return parse_case_json(text);
}

std::string to_json(const GridCase& c, const CaseProvenance* prov) {
  json doc;
  doc["name"] = c.name;
  doc["base_mva"] = c.base_mva;
  doc["buses"] = json::array();
  for (const auto& b : c.buses) {
    doc["buses"].push_back({{"id", b.id},
                            {"gen_mw", b.generation_mw},
                            {"load_mw", b.load_mw}});
  }
  doc["branches"] = json::array();
  for (const auto& br : c.branches) {
    doc["branches"].push_back({{"from", c.buses[br.from].id},
                               {"to", c.buses[br.to].id},
                               {"x_pu", br.reactance},
                               {"rate_mw", br.capacity_mw},
                               {"status", br.in_service ? 1 : 0}});
  }
  if (prov) {
    json p;
    p["eliminated"] = prov->eliminated;
    p["generator_map"] = json::object();
    for (auto [orig, target] : prov->generator_map)
      p["generator_map"][std::to_string(orig)] = target;
    p["equivalent_branches"] = json::array();
    for (const auto& e : prov->equivalent_branches)
      p["equivalent_branches"].push_back({{"from", static_cast<int>(e[0])},
                                          {"to", static_cast<int>(e[1])},
                                          {"x_pu", e[2]}});
    p["pruned"] = json::array();
    for (const auto& e : prov->pruned)
      p["pruned"].push_back({{"from", static_cast<int>(e[0])},
                             {"to", static_cast<int>(e[1])},
                             {"x_pu", e[2]}});
    doc["provenance"] = p;
  }
  return doc.dump(2) + "\n";
}

std::string to_matpower(const GridCase& c) {
  std::ostringstream os;
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return std::string(buf);
  };
  os << "function mpc = " << (c.name.empty() ? "case" : c.name) << "\n";
  os << "%% MATPOWER Case Format : Version 2\n";
  os << "mpc.version = '2';\n\n";
  os << "mpc.baseMVA = " << num(c.base_mva) << ";\n\n";
  os << "%\tbus_i\ttype\tPd\tQd\tGs\tBs\tarea\tVm\tVa\tbaseKV\tzone\tVmax\tVmin\n";
  os << "mpc.bus = [\n";
  for (size_t i = 0; i < c.buses.size(); ++i) {
    const auto& b = c.buses[i];
    int type = i == 0 ? 3 : (b.is_generator ? 2 : 1);
    os << "\t" << b.id << "\t" << type << "\t" << num(b.load_mw)
       << "\t0\t0\t0\t1\t1\t0\t135\t1\t1.05\t0.95;\n";
  }
  os << "];\n\n";
  os << "%\tbus\tPg\tQg\tQmax\tQmin\tVg\tmBase\tstatus\tPmax\tPmin\n";
  os << "mpc.gen = [\n";
  for (const auto& b : c.buses) {
    if (!b.is_generator) continue;
    os << "\t" << b.id << "\t" << num(b.generation_mw)
       << "\t0\t0\t0\t1\t" << num(c.base_mva) << "\t1\t"
       << num(b.generation_mw) << "\t0;\n";
  }
  os << "];\n\n";
  os << "%\tfbus\ttbus\tr\tx\tb\trateA\trateB\trateC\tratio\tangle\tstatus"
        "\tangmin\tangmax\n";
  os << "mpc.branch = [\n";
  for (const auto& br : c.branches) {
    os << "\t" << c.buses[br.from].id << "\t" << c.buses[br.to].id << "\t0\t"
       << num(br.reactance) << "\t0\t" << num(br.capacity_mw) << "\t"
       << num(br.capacity_mw) << "\t" << num(br.capacity_mw) << "\t0\t0\t"
       << (br.in_service ? 1 : 0) << "\t-360\t360;\n";
  }
  os << "];\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  static std::atomic<unsigned> counter{0};
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid()) + "." +
         std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + tmp.string());
    out << content;
    if (!out.good()) throw Error("short write: " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace gridred
