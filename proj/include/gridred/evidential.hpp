#pragma once

#include <vector>

#include "gridred/centrality.hpp"

namespace gridred {

// Ordered evaluation grades S_1..S_N. For ranking fusion N equals the node
// count (one grade per rank position).
struct GradeFrame {
  int grade_count = 0;
};

// Masses over the grades; the residual 1 - sum(beliefs) is the uncertainty
// assigned to the whole frame.
struct BeliefDistribution {
  std::vector<double> beliefs;
  double uncertainty() const;
};

struct AttributeWeights {
  std::vector<double> weights;
  // Validates positivity and scales to sum 1.
  static AttributeWeights normalized(std::vector<double> raw);
};

struct CombinedAssessment {
  std::vector<double> combined_beliefs;
  double residual_uncertainty = 0.0;
};

struct UtilityTriple {
  double u_min = 0.0;
  double u_max = 0.0;
  double u_avg = 0.0;
};

// u(S_n) = (N - n) / N, n 1-based: the best grade S_1 is worth (N-1)/N and
// the worst grade S_N is worth zero.
double grade_utility(int n, int grade_count);

// Quasi-one-hot encoding: the node ranked n puts belief_level on grade S_n
// and 1 - belief_level on uncertainty.
std::vector<BeliefDistribution> encode_ranking(const std::vector<int>& ranks,
                                               GradeFrame frame,
                                               double belief_level);

// Recursive evidence combination with weighted masses and split remaining
// mass, normalized at the end. A single attribute passes through unchanged.
CombinedAssessment combine_evidence(
    const std::vector<BeliefDistribution>& distributions,
    const AttributeWeights& weights);

// u_min sends the residual to the worst grade, u_max to the best; u_avg is
// exactly their midpoint.
UtilityTriple evaluate_utility(const CombinedAssessment& assessment);

// Per-node fusion detail for report export.
struct FusionRow {
  double u_min = 0.0, u_max = 0.0, u_avg = 0.0, delta_s = 0.0;
};

// Fuses the criteria rankings through encode -> combine -> utility; the
// average utility is the comprehensive score. Ties on the score are broken
// by ascending external node id.
NodeScoreVector comprehensive_rank(
    const std::vector<NodeScoreVector>& score_vectors,
    const AttributeWeights& weights, double belief_level,
    const std::vector<int>& external_ids,
    std::vector<FusionRow>* detail = nullptr);

}  // namespace gridred
