#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridred/case_io.hpp"
#include "gridred/centrality.hpp"
#include "gridred/dc.hpp"
#include "gridred/errors.hpp"
#include "gridred/evidential.hpp"
#include "gridred/export.hpp"
#include "gridred/metrics.hpp"
#include "gridred/reduction.hpp"

namespace fs = std::filesystem;
using namespace gridred;

namespace {

constexpr int kExitError = 1;
constexpr int kExitMissingFile = 2;

struct CommonOpts {
  std::string case_path;
  std::string out_dir = ".";
  std::string format = "csv";
  int k = 10;
  double beta = 0.9;
  std::vector<double> weights = {0.5, 0.5};
  double x_max = 1e3;
  bool retain_generators = true;
  unsigned seed = 12345;

  TableFormat table_format() const {
    return format == "json" ? TableFormat::Json : TableFormat::Csv;
  }
  std::string ext() const { return format == "json" ? ".json" : ".csv"; }
};

GridCase load_or_exit(const std::string& path) {
  if (!fs::exists(path)) {
    std::cerr << "error: case file not found: " << path << "\n";
    std::exit(kExitMissingFile);
  }
  return load_case(path);
}

struct CriteriaBundle {
  NodeScoreVector c1, c2, c3, c4;
  std::vector<FusionRow> fusion;
};

// C2/C3 are the electrical criteria; C1 fuses them; C4 is the congestion
// comparison criterion.
CriteriaBundle compute_criteria(const GridCase& c, double beta,
                                const std::vector<double>& weights) {
  CriteriaBundle out;
  auto ptdf = compute_ptdf(c, 0);
  auto kappa = transmission_capacity(c, ptdf);
  out.c2 = extended_betweenness(c, ptdf, kappa);
  out.c3 = net_ability(c);
  out.c4 = congestion_criterion(c);
  std::vector<int> ids(c.n_buses());
  for (int i = 0; i < c.n_buses(); ++i) ids[i] = c.buses[i].id;
  auto w = AttributeWeights::normalized(weights);
  out.c1 = comprehensive_rank({out.c2, out.c3}, w, beta, ids, &out.fusion);
  return out;
}

const NodeScoreVector& pick(const CriteriaBundle& b, const std::string& name) {
  if (name == "c1") return b.c1;
  if (name == "c2") return b.c2;
  if (name == "c3") return b.c3;
  if (name == "c4") return b.c4;
  throw DomainError("unknown criterion: " + name);
}

std::vector<int> bottom_k(const GridCase& c, const NodeScoreVector& sv, int k) {
  std::vector<int> by_rank(c.n_buses());
  for (int i = 0; i < c.n_buses(); ++i) by_rank[sv.ranks[i] - 1] = c.buses[i].id;
  return {by_rank.end() - k, by_rank.end()};
}

int cmd_rank(const CommonOpts& opt, const std::vector<std::string>& criteria,
             bool export_matrices) {
  auto c = load_or_exit(opt.case_path);
  auto bundle = compute_criteria(c, opt.beta, opt.weights);

  fs::create_directories(opt.out_dir);
  const auto fmt = opt.table_format();
  for (const auto& name : criteria) {
    const auto& sv = pick(bundle, name);
    write_file_atomic(opt.out_dir + "/" + name + opt.ext(),
                      score_table(c, sv, fmt));
    if (name == "c1")
      write_file_atomic(opt.out_dir + "/c1_fusion" + opt.ext(),
                        fusion_table(c, sv, bundle.fusion, fmt));
  }

  // bottom-k summary, one row per criterion
  std::ostringstream os;
  os << "criterion";
  for (int r = c.n_buses() - opt.k + 1; r <= c.n_buses(); ++r)
    os << ",rank" << r;
  os << "\n";
  for (const auto& name : criteria) {
    os << name;
    for (int id : bottom_k(c, pick(bundle, name), opt.k)) os << "," << id;
    os << "\n";
  }
  write_file_atomic(opt.out_dir + "/bottom_" + std::to_string(opt.k) + ".csv",
                    os.str());
  std::cout << os.str();

  if (export_matrices) {
    std::vector<int> ids(c.n_buses());
    for (int i = 0; i < c.n_buses(); ++i) ids[i] = c.buses[i].id;
    write_file_atomic(opt.out_dir + "/ptdf.csv",
                      matrix_csv(ids, compute_ptdf(c, 0).values));
    write_file_atomic(opt.out_dir + "/susceptance.csv",
                      matrix_csv(ids, build_susceptance(c, 0).bus_matrix));
    write_file_atomic(opt.out_dir + "/impedance.csv",
                      matrix_csv(ids, bus_impedance(c).values));
  }
  return 0;
}

int cmd_reduce(const CommonOpts& opt, const std::string& criterion,
               const std::string& out_path, const std::string& matpower_out) {
  auto c = load_or_exit(opt.case_path);
  auto bundle = compute_criteria(c, opt.beta, opt.weights);
  const auto& ranking = pick(bundle, criterion);

  ReductionConfig config;
  config.x_max = opt.x_max;
  config.retain_generators = opt.retain_generators;
  ReductionReport report;
  auto red = reduce_pipeline(c, ranking, opt.k, config, &report);

  fs::create_directories(opt.out_dir);
  std::string model_path = out_path;
  if (model_path.empty())
    model_path = opt.out_dir + "/" + c.name + "_" + criterion + "_k" +
                 std::to_string(opt.k) + ".json";
  auto prov = red.provenance();
  write_file_atomic(model_path, to_json(red.grid, &prov));
  if (!matpower_out.empty())
    write_file_atomic(matpower_out, to_matpower(red.grid));

  std::ostringstream os;
  os << "reduced model: " << model_path << "\n";
  os << "eliminated (" << report.eliminated_ids.size() << "):";
  for (int id : report.eliminated_ids) os << " " << id;
  os << "\nequivalent branches (" << report.equivalent_branches.size() << "):";
  for (const auto& e : report.equivalent_branches)
    os << " " << static_cast<int>(e[0]) << "-" << static_cast<int>(e[1])
       << " (x=" << format_double(e[2]) << ")";
  os << "\npruned (" << report.pruned.size() << "):";
  for (const auto& p : report.pruned)
    os << " " << p.from_id << "-" << p.to_id << " (x=" << format_double(p.x_eq)
       << ")";
  os << "\ngenerator map:";
  if (report.generator_map.empty()) os << " none";
  for (auto [from, to] : report.generator_map) os << " " << from << "->" << to;
  os << "\nmax angle mismatch [rad]: "
     << format_double(report.max_angle_mismatch_rad)
     << "\nmax retained-branch flow mismatch [MW]: "
     << format_double(report.max_flow_mismatch_mw) << "\n";
  if (report.connectivity_warning)
    os << "warning: connectivity required equivalent branches or prune "
          "rollback\n";
  write_file_atomic(model_path + ".report.txt", os.str());
  std::cout << os.str();
  return 0;
}

int cmd_compare(const CommonOpts& opt,
                const std::vector<std::string>& model_paths,
                const std::string& norm_name) {
  const auto norm = norm_name == "mean"
                        ? ReactanceNormalization::MeanReactance
                        : ReactanceNormalization::MaxReactance;
  auto full = load_or_exit(opt.case_path);
  std::set<int> full_ids;
  for (const auto& b : full.buses) full_ids.insert(b.id);

  std::vector<std::string> names{"ori"};
  std::vector<TopologyReport> reports{topology_report(full, norm)};
  std::vector<ErrorIndex> errors;
  std::vector<std::string> error_names;
  bool any_failed = false;
  for (const auto& path : model_paths) {
    if (!fs::exists(path)) {
      std::cerr << "error: model file not found: " << path << "\n";
      any_failed = true;
      continue;
    }
    try {
      auto model = load_case(path);
      for (const auto& b : model.buses)
        if (!full_ids.count(b.id))
          throw ValidationError("model bus " + std::to_string(b.id) +
                                " does not exist in the full case");
      names.push_back(fs::path(path).stem().string());
      reports.push_back(topology_report(model, norm));
      errors.push_back(relative_errors(reports.front(), reports.back()));
      error_names.push_back(names.back());
    } catch (const Error& e) {
      std::cerr << "error: " << path << ": " << e.what() << "\n";
      any_failed = true;
    }
  }

  fs::create_directories(opt.out_dir);
  const auto fmt = opt.table_format();
  write_file_atomic(opt.out_dir + "/metrics" + opt.ext(),
                    metrics_table(names, reports, fmt));
  write_file_atomic(opt.out_dir + "/errors" + opt.ext(),
                    errors_table(error_names, errors, fmt));
  std::cout << metrics_table(names, reports, TableFormat::Csv);
  return any_failed ? kExitError : 0;
}

int cmd_selftest(unsigned seed) {
  int failures = 0;
  auto expect = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << what << "\n";
    if (!ok) ++failures;
  };

  // golden combination vectors of the three-node example
  GradeFrame frame{3};
  auto a1 = encode_ranking({3, 2, 1}, frame, 0.9);
  auto a2 = encode_ranking({1, 2, 3}, frame, 0.9);
  auto w = AttributeWeights::normalized({0.5, 0.5});
  auto node2 = combine_evidence({a1[1], a2[1]}, w);
  expect(std::abs(node2.combined_beliefs[1] - 0.93) < 1e-3 &&
             std::abs(node2.residual_uncertainty - 0.07) < 1e-3,
         "middle node combines to (0, 0.93, 0 | 0.07)");
  auto node1 = combine_evidence({a1[0], a2[0]}, w);
  expect(std::abs(node1.combined_beliefs[0] - 0.452) < 1e-3 &&
             std::abs(node1.combined_beliefs[2] - 0.452) < 1e-3 &&
             std::abs(node1.residual_uncertainty - 0.096) < 1e-3,
         "edge nodes combine to (0.452, 0, 0.452 | 0.096)");
  auto u = evaluate_utility(node2);
  expect(std::abs(u.u_min - 0.31) < 1e-4 && std::abs(u.u_max - 0.356667) < 1e-4,
         "utility interval of the middle node");

  // quick randomized completeness check
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ub(0.2, 1.0);
  bool complete_ok = true;
  for (int iter = 0; iter < 200; ++iter) {
    const int n_grades = 2 + iter % 6;
    std::vector<BeliefDistribution> ds(2);
    for (auto& d : ds) {
      d.beliefs.assign(n_grades, 0.0);
      d.beliefs[iter % n_grades] = ub(rng);
    }
    auto r = combine_evidence(ds, w);
    double total = r.residual_uncertainty;
    for (double b : r.combined_beliefs) total += b;
    complete_ok &= std::abs(total - 1.0) < 1e-9;
  }
  expect(complete_ok, "combined masses stay complete on random inputs");

  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"power-grid node ranking and Ward reduction toolkit"};
  app.set_config("--config");
  argv = app.ensure_utf8(argv);

  CommonOpts opt;
  std::vector<std::string> criteria{"c1", "c2", "c3", "c4"};
  bool export_matrices = false;
  std::string criterion = "c1";
  std::string out_path;
  std::string matpower_out;
  std::vector<std::string> model_paths;

  auto add_common = [&](CLI::App* sub, bool needs_case) {
    if (needs_case)
      sub->add_option("--case", opt.case_path, "case file (.json or .m)")
          ->required()
          ->envname("GRIDRED_CASE");
    sub->add_option("--out-dir", opt.out_dir, "output directory")
        ->envname("GRIDRED_OUT_DIR");
    sub->add_option("--format", opt.format, "table format for outputs")
        ->check(CLI::IsMember({"csv", "json"}))
        ->envname("GRIDRED_FORMAT");
  };
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--k", opt.k, "eliminated node count")
        ->check(CLI::PositiveNumber)
        ->envname("GRIDRED_K");
    sub->add_option("--beta", opt.beta, "belief level in (0,1]")
        ->check(CLI::Range(1e-9, 1.0))
        ->envname("GRIDRED_BETA");
    sub->add_option("--weights", opt.weights,
                    "attribute weights (normalized on load)")
        ->expected(2)
        ->envname("GRIDRED_WEIGHTS");
  };

  auto* rank = app.add_subcommand("rank", "rank nodes under criteria C1-C4");
  add_common(rank, true);
  add_params(rank);
  rank->add_option("--criteria", criteria, "criteria to emit")
      ->check(CLI::IsMember({"c1", "c2", "c3", "c4"}));
  rank->add_flag("--export-matrices", export_matrices,
                 "also dump PTDF, susceptance and impedance tables");

  auto* reduce = app.add_subcommand("reduce", "build a Ward-reduced model");
  add_common(reduce, true);
  add_params(reduce);
  reduce->add_option("--criterion", criterion, "ranking criterion")
      ->check(CLI::IsMember({"c1", "c2", "c3", "c4"}))
      ->envname("GRIDRED_CRITERION");
  reduce->add_option("--x-max", opt.x_max, "abnormal reactance threshold, pu")
      ->check(CLI::PositiveNumber)
      ->envname("GRIDRED_X_MAX");
  reduce->add_flag("--retain-generators,!--no-retain-generators",
                   opt.retain_generators,
                   "extend the retained set with all generator buses");
  reduce->add_option("--out", out_path, "output model path");
  reduce->add_option("--matpower-out", matpower_out,
                     "also export the reduced case as a MATPOWER-style file");

  auto* compare = app.add_subcommand(
      "compare", "topology metrics and relative errors of reduced models");
  add_common(compare, true);
  std::string norm_name = "max";
  compare->add_option("--norm", norm_name,
                      "reactance normalization for weighted metrics")
      ->check(CLI::IsMember({"max", "mean"}));
  compare->add_option("models", model_paths, "reduced model files")
      ->expected(-1);

  auto* selftest =
      app.add_subcommand("selftest", "run the built-in golden vectors");
  selftest->add_option("--seed", opt.seed, "fuzz seed")
      ->envname("GRIDRED_SEED");

  app.require_subcommand(1);
  CLI11_PARSE(app, argc, argv);

  try {
    if (rank->parsed()) return cmd_rank(opt, criteria, export_matrices);
    if (reduce->parsed())
      return cmd_reduce(opt, criterion, out_path, matpower_out);
    if (compare->parsed()) return cmd_compare(opt, model_paths, norm_name);
    if (selftest->parsed()) return cmd_selftest(opt.seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
