#include "gridred/evidential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridred/errors.hpp"

namespace gridred {

double BeliefDistribution::uncertainty() const {
  double s = 0.0;
  for (double b : beliefs) s += b;
  return 1.0 - s;
}

AttributeWeights AttributeWeights::normalized(std::vector<double> raw) {
  if (raw.empty()) throw DomainError("attribute weights: empty");
  double sum = 0.0;
  for (double w : raw) {
    if (!(w > 0.0)) throw DomainError("attribute weights must be positive");
    sum += w;
  }
  for (double& w : raw) w /= sum;
  return AttributeWeights{std::move(raw)};
}

double grade_utility(int n, int grade_count) {
  return static_cast<double>(grade_count - n) / grade_count;
}

std::vector<BeliefDistribution> encode_ranking(const std::vector<int>& ranks,
                                               GradeFrame frame,
                                               double belief_level) {
  const int n_grades = frame.grade_count;
  if (n_grades < 2) throw DomainError("grade frame needs at least two grades");
  if (!(belief_level > 0.0 && belief_level <= 1.0))
    throw DomainError("belief level must lie in (0, 1]");
  std::vector<char> seen(n_grades, 0);
  for (int r : ranks) {
    if (r < 1 || r > n_grades)
      throw DomainError("rank " + std::to_string(r) + " outside 1.." +
                        std::to_string(n_grades));
    seen[r - 1] = 1;
  }
  if (static_cast<int>(ranks.size()) == n_grades &&
      !std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; }))
    throw DomainError("ranks are not a permutation of 1..N");

  std::vector<BeliefDistribution> out(ranks.size());
  for (size_t i = 0; i < ranks.size(); ++i) {
    out[i].beliefs.assign(n_grades, 0.0);
    out[i].beliefs[ranks[i] - 1] = belief_level;
  }
  return out;
}

CombinedAssessment combine_evidence(
    const std::vector<BeliefDistribution>& distributions,
    const AttributeWeights& weights) {
  if (distributions.empty())
    throw DomainError("combine_evidence: no distributions");
  if (weights.weights.size() != distributions.size())
    throw DomainError("combine_evidence: weight count mismatch");
  const size_t n_grades = distributions[0].beliefs.size();
  for (const auto& d : distributions) {
    if (d.beliefs.size() != n_grades)
      throw DomainError("combine_evidence: distributions on different frames");
    double sum = 0.0;
    for (double b : d.beliefs) {
      if (b < 0.0) throw DomainError("combine_evidence: negative belief");
      sum += b;
    }
    if (sum > 1.0 + 1e-12)
      throw DomainError("combine_evidence: beliefs sum above one");
  }

  // Masses after the first attribute: e_n = w*delta_n, remaining mass split
  // into the unassigned weight (bar) and the weighted incompleteness (tilde).
  std::vector<double> e(n_grades);
  const double w0 = weights.weights[0];
  for (size_t k = 0; k < n_grades; ++k)
    e[k] = w0 * distributions[0].beliefs[k];
  double e_bar = 1.0 - w0;
  double e_til = w0 * distributions[0].uncertainty();

  for (size_t j = 1; j < distributions.size(); ++j) {
    const double wj = weights.weights[j];
    std::vector<double> ej(n_grades);
    for (size_t k = 0; k < n_grades; ++k)
      ej[k] = wj * distributions[j].beliefs[k];
    const double ej_bar = 1.0 - wj;
    const double ej_til = wj * distributions[j].uncertainty();

    double sum_e = 0.0, sum_ej = 0.0, dot = 0.0;
    for (size_t k = 0; k < n_grades; ++k) {
      sum_e += e[k];
      sum_ej += ej[k];
      dot += e[k] * ej[k];
    }
    const double conflict = sum_e * sum_ej - dot;
    const double denom = 1.0 - conflict;
    if (denom <= 1e-12)
      throw ConflictError("combine_evidence: total conflict between attributes");
    const double scale = 1.0 / denom;

    const double e_s = e_bar + e_til;
    const double ej_s = ej_bar + ej_til;
    for (size_t k = 0; k < n_grades; ++k)
      e[k] = scale * (e[k] * ej[k] + e_s * ej[k] + e[k] * ej_s);
    e_til = scale * (e_til * ej_til + e_bar * ej_til + e_til * ej_bar);
    e_bar = scale * (e_bar * ej_bar);
  }

  CombinedAssessment out;
  const double norm = 1.0 - e_bar;
  out.combined_beliefs.resize(n_grades);
  for (size_t k = 0; k < n_grades; ++k)
    out.combined_beliefs[k] = e[k] / norm;
  out.residual_uncertainty = e_til / norm;
  return out;
}

UtilityTriple evaluate_utility(const CombinedAssessment& assessment) {
  const int n_grades = static_cast<int>(assessment.combined_beliefs.size());
  if (n_grades < 2) throw DomainError("evaluate_utility: degenerate frame");
  UtilityTriple u;
  double base = 0.0;
  for (int k = 0; k < n_grades; ++k)
    base += assessment.combined_beliefs[k] * grade_utility(k + 1, n_grades);
  u.u_min = base + assessment.residual_uncertainty *
                       grade_utility(n_grades, n_grades);
  u.u_max = base + assessment.residual_uncertainty * grade_utility(1, n_grades);
  u.u_avg = 0.5 * (u.u_min + u.u_max);
  return u;
}

NodeScoreVector comprehensive_rank(
    const std::vector<NodeScoreVector>& score_vectors,
    const AttributeWeights& weights, double belief_level,
    const std::vector<int>& external_ids, std::vector<FusionRow>* detail) {
  if (score_vectors.empty())
    throw DomainError("comprehensive_rank: no criteria given");
  const int n = static_cast<int>(score_vectors[0].ranks.size());
  for (const auto& sv : score_vectors)
    if (static_cast<int>(sv.ranks.size()) != n)
      throw DomainError("comprehensive_rank: criteria over different node sets");
  if (static_cast<int>(external_ids.size()) != n)
    throw DomainError("comprehensive_rank: id vector size mismatch");

  GradeFrame frame{n};
  std::vector<std::vector<BeliefDistribution>> encoded;
  encoded.reserve(score_vectors.size());
  for (const auto& sv : score_vectors)
    encoded.push_back(encode_ranking(sv.ranks, frame, belief_level));

  NodeScoreVector out;
  out.criterion = Criterion::Comprehensive;
  out.scores.assign(n, 0.0);
  if (detail) detail->assign(n, {});
  for (int i = 0; i < n; ++i) {
    std::vector<BeliefDistribution> per_node;
    per_node.reserve(encoded.size());
    for (const auto& enc : encoded) per_node.push_back(enc[i]);
    auto combined = combine_evidence(per_node, weights);
    auto u = evaluate_utility(combined);
    out.scores[i] = u.u_avg;
    if (detail)
      (*detail)[i] = {u.u_min, u.u_max, u.u_avg,
                      combined.residual_uncertainty};
  }
  out.ranks = ranks_from_scores(out.scores, external_ids);
  return out;
}

}  // namespace gridred
