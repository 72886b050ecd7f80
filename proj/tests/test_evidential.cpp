#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "gridred/errors.hpp"
#include "gridred/evidential.hpp"

using namespace gridred;

namespace {

// The three-node worked example: extended-betweenness ranks {3,2,1},
// net-ability ranks {1,2,3}.
std::vector<std::vector<BeliefDistribution>> three_node_inputs(double beta) {
  GradeFrame frame{3};
  auto a1 = encode_ranking({3, 2, 1}, frame, beta);
  auto a2 = encode_ranking({1, 2, 3}, frame, beta);
  std::vector<std::vector<BeliefDistribution>> per_node(3);
  for (int i = 0; i < 3; ++i) per_node[i] = {a1[i], a2[i]};
  return per_node;
}

BeliefDistribution random_distribution(std::mt19937& rng, int n_grades) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BeliefDistribution d;
  d.beliefs.assign(n_grades, 0.0);
  double budget = u(rng);  // total assigned mass
  for (int k = 0; k < n_grades && budget > 0.0; ++k) {
    double take = u(rng) * budget;
    d.beliefs[k] = take;
    budget -= take;
  }
  std::shuffle(d.beliefs.begin(), d.beliefs.end(), rng);
  return d;
}

}  // namespace

TEST_CASE("encode_ranking: quasi-one-hot layout") {
  GradeFrame frame{3};
  auto enc = encode_ranking({3, 2, 1}, frame, 0.9);
  CHECK(enc[0].beliefs == std::vector<double>{0.0, 0.0, 0.9});
  CHECK(enc[0].uncertainty() == doctest::Approx(0.1));
  CHECK(enc[2].beliefs == std::vector<double>{0.9, 0.0, 0.0});

  auto pure = encode_ranking({1, 2, 3}, frame, 1.0);
  CHECK(pure[0].uncertainty() == doctest::Approx(0.0));

  auto half = encode_ranking({2}, GradeFrame{4}, 0.5);
  CHECK(half[0].beliefs == std::vector<double>{0.0, 0.5, 0.0, 0.0});
  CHECK(half[0].uncertainty() == doctest::Approx(0.5));

  CHECK_THROWS_AS(encode_ranking({5}, frame, 0.9), DomainError);
  CHECK_THROWS_AS(encode_ranking({0}, frame, 0.9), DomainError);
  CHECK_THROWS_AS(encode_ranking({1, 1, 2}, frame, 0.9), DomainError);
  CHECK_THROWS_AS(encode_ranking({1, 2, 3}, frame, 0.0), DomainError);
}

TEST_CASE("combine_evidence reproduces the worked combination table") {
  auto per_node = three_node_inputs(0.9);
  auto w = AttributeWeights::normalized({0.5, 0.5});

  auto node2 = combine_evidence(per_node[1], w);
  CHECK(node2.combined_beliefs[0] == doctest::Approx(0.0).epsilon(1e-3));
  CHECK(node2.combined_beliefs[1] == doctest::Approx(0.93).epsilon(1e-3));
  CHECK(node2.combined_beliefs[2] == doctest::Approx(0.0).epsilon(1e-3));
  CHECK(node2.residual_uncertainty == doctest::Approx(0.07).epsilon(1e-3));

  for (int node : {0, 2}) {
    auto r = combine_evidence(per_node[node], w);
    CHECK(r.combined_beliefs[0] == doctest::Approx(0.452).epsilon(1e-3));
    CHECK(r.combined_beliefs[1] == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(r.combined_beliefs[2] == doctest::Approx(0.452).epsilon(1e-3));
    CHECK(r.residual_uncertainty == doctest::Approx(0.096).epsilon(2e-3));
  }
}

TEST_CASE("combine_evidence: identical certain inputs stay certain") {
  BeliefDistribution d;
  d.beliefs = {0.0, 1.0, 0.0};
  auto w = AttributeWeights::normalized({0.3, 0.7});
  auto r = combine_evidence({d, d}, w);
  CHECK(r.combined_beliefs[1] == doctest::Approx(1.0));
  CHECK(r.residual_uncertainty == doctest::Approx(0.0));
}

TEST_CASE("combine_evidence: single attribute passes through") {
  std::mt19937 rng(9);
  for (int it = 0; it < 20; ++it) {
    auto d = random_distribution(rng, 5);
    auto r = combine_evidence({d}, AttributeWeights::normalized({1.0}));
    for (int k = 0; k < 5; ++k)
      CHECK(r.combined_beliefs[k] == doctest::Approx(d.beliefs[k]).epsilon(1e-12));
    CHECK(r.residual_uncertainty == doctest::Approx(d.uncertainty()).epsilon(1e-12));
  }
}

TEST_CASE("combine_evidence: total conflict is reported") {
  // Only reachable with degenerate (unnormalized) weights: two fully
  // confident attributes on disjoint grades.
  BeliefDistribution a, b;
  a.beliefs = {1.0, 0.0};
  b.beliefs = {0.0, 1.0};
  AttributeWeights w{{1.0, 1.0}};
  CHECK_THROWS_AS(combine_evidence({a, b}, w), ConflictError);
}

TEST_CASE("evaluate_utility: worked values and degenerate cases") {
  auto per_node = three_node_inputs(0.9);
  auto w = AttributeWeights::normalized({0.5, 0.5});
  auto u2 = evaluate_utility(combine_evidence(per_node[1], w));
  CHECK(u2.u_min == doctest::Approx(0.31).epsilon(1e-4));
  CHECK(u2.u_max == doctest::Approx(0.356667).epsilon(1e-4));
  CHECK(u2.u_avg == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

  CombinedAssessment top;
  top.combined_beliefs = {1.0, 0.0, 0.0};
  top.residual_uncertainty = 0.0;
  auto ut = evaluate_utility(top);
  CHECK(ut.u_min == doctest::Approx(2.0 / 3.0));
  CHECK(ut.u_max == doctest::Approx(2.0 / 3.0));

  CombinedAssessment ignorance;
  ignorance.combined_beliefs = {0.0, 0.0, 0.0};
  ignorance.residual_uncertainty = 1.0;
  auto ui = evaluate_utility(ignorance);
  CHECK(ui.u_min == doctest::Approx(0.0));
  CHECK(ui.u_max == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("comprehensive_rank: symmetric example ties break by node id") {
  NodeScoreVector c2, c3;
  c2.ranks = {3, 2, 1};
  c2.scores = {1.0, 2.0, 3.0};
  c3.ranks = {1, 2, 3};
  c3.scores = {3.0, 2.0, 1.0};
  auto w = AttributeWeights::normalized({0.5, 0.5});
  auto out = comprehensive_rank({c2, c3}, w, 0.9, {1, 2, 3});
  for (double s : out.scores) CHECK(s == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(out.ranks == std::vector<int>{1, 2, 3});
}

TEST_CASE("comprehensive_rank: a single criterion reproduces its ranking") {
  NodeScoreVector sv;
  sv.ranks = {4, 1, 3, 2, 5};
  sv.scores = {2.0, 9.0, 3.0, 8.0, 1.0};
  auto out = comprehensive_rank({sv}, AttributeWeights::normalized({1.0}), 0.9,
                                {1, 2, 3, 4, 5});
  CHECK(out.ranks == sv.ranks);
}

TEST_CASE("comprehensive_rank: scaling criterion scores changes nothing") {
  NodeScoreVector a, b;
  a.scores = {5.0, 1.0, 3.0, 2.0};
  a.ranks = {1, 4, 2, 3};
  b.scores = {1.0, 4.0, 2.0, 8.0};
  b.ranks = {4, 2, 3, 1};
  auto scaled_a = a;
  for (double& s : scaled_a.scores) s *= 1000.0;
  auto w = AttributeWeights::normalized({0.6, 0.4});
  auto r1 = comprehensive_rank({a, b}, w, 0.8, {1, 2, 3, 4});
  auto r2 = comprehensive_rank({scaled_a, b}, w, 0.8, {1, 2, 3, 4});
  CHECK(r1.ranks == r2.ranks);
  for (int i = 0; i < 4; ++i)
    CHECK(r1.scores[i] == doctest::Approx(r2.scores[i]).epsilon(1e-15));
}

TEST_CASE("evidence fuzz: completeness, permutation invariance, bounds") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> u_lambda(1, 5);
  std::uniform_int_distribution<int> u_grades(2, 8);
  std::uniform_real_distribution<double> u_w(0.05, 1.0);
  for (int iter = 0; iter < 2000; ++iter) {
    const int n_att = u_lambda(rng);
    const int n_grades = u_grades(rng);
    std::vector<BeliefDistribution> dists;
    std::vector<double> raw_w;
    for (int j = 0; j < n_att; ++j) {
      dists.push_back(random_distribution(rng, n_grades));
      raw_w.push_back(u_w(rng));
    }
    auto w = AttributeWeights::normalized(raw_w);
    auto r = combine_evidence(dists, w);

    double total = r.residual_uncertainty;
    for (double b : r.combined_beliefs) {
      CHECK(b >= -1e-12);
      total += b;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

    // permutation invariance
    std::vector<int> perm(n_att);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<BeliefDistribution> pd;
    std::vector<double> pw;
    for (int j : perm) {
      pd.push_back(dists[j]);
      pw.push_back(w.weights[j]);
    }
    auto rp = combine_evidence(pd, AttributeWeights{pw});
    for (int k = 0; k < n_grades; ++k)
      CHECK(rp.combined_beliefs[k] ==
            doctest::Approx(r.combined_beliefs[k]).epsilon(1e-9));
    CHECK(rp.residual_uncertainty ==
          doctest::Approx(r.residual_uncertainty).epsilon(1e-9));

    auto u = evaluate_utility(r);
    CHECK(u.u_min >= grade_utility(n_grades, n_grades) - 1e-12);
    CHECK(u.u_max <= grade_utility(1, n_grades) + 1e-12);
    CHECK(u.u_min <= u.u_max + 1e-12);
    CHECK(u.u_avg == 0.5 * (u.u_min + u.u_max));
  }
}

TEST_CASE("agreement reinforcement: shared grade gains belief") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u_beta(0.3, 0.999);
  for (int iter = 0; iter < 200; ++iter) {
    const int n_grades = 6;
    const int grade = iter % n_grades;
    const double beta = u_beta(rng);
    const int n_att = 2 + iter % 3;
    std::vector<BeliefDistribution> dists(n_att);
    std::vector<double> raw_w;
    for (auto& d : dists) {
      d.beliefs.assign(n_grades, 0.0);
      d.beliefs[grade] = beta;
    }
    for (int j = 0; j < n_att; ++j) raw_w.push_back(0.2 + 0.1 * j);
    auto r = combine_evidence(dists, AttributeWeights::normalized(raw_w));
    CHECK(r.combined_beliefs[grade] >= beta - 1e-12);
  }
}
