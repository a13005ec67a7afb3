#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "capkc/oracle.hpp"
#include "capkc/pipeline.hpp"

namespace capkc {
namespace {

MetricInstance complete_unit(std::vector<long long> caps, long long k) {
  MetricInstance inst;
  inst.n = (int)caps.size();
  inst.k = k;
  inst.cap = std::move(caps);
  inst.dist.assign(inst.n, std::vector<Rat>(inst.n, Rat(1)));
  for (int i = 0; i < inst.n; ++i) inst.dist[i][i] = Rat(0);
  inst.validate();
  return inst;
}

TEST(FindTauStar, GapInstanceCertifiesOnlyAtTheGap) {
  MetricInstance inst = generate("gap2x3", GenParams{}, 1);
  EXPECT_FALSE(detail::certify(inst, Variant::Center, Rat(0)).has_value());
  EXPECT_FALSE(detail::certify(inst, Variant::Center, Rat(1)).has_value());
  auto plans = detail::certify(inst, Variant::Center, Rat(100));
  ASSERT_TRUE(plans.has_value());
  ASSERT_EQ(plans->size(), 1u);  // the gap distance joins the two triads
  EXPECT_EQ((*plans)[0].k_i, 3);
  EXPECT_EQ(find_tau_star(inst), Rat(100));
  EXPECT_EQ(find_tau_star(inst, Variant::Auto, TauSearch::Scan), Rat(100));
}

TEST(FindTauStar, SingletonCertifiesAtZero) {
  MetricInstance inst = complete_unit({1}, 1);
  EXPECT_EQ(find_tau_star(inst), Rat(0));
}

TEST(FindTauStar, ScanAgreesWithBisection) {
  for (const char* kind : {"grid_l1", "random_graph_hop", "zerol_random", "supplier_random"})
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      MetricInstance inst = generate(kind, GenParams{}, seed);
      EXPECT_EQ(find_tau_star(inst), find_tau_star(inst, Variant::Auto, TauSearch::Scan))
          << kind << " seed " << seed;
    }
}

// The justification for bisecting at all: once a threshold certifies, every
// larger candidate does too.
TEST(FindTauStar, CountingCertificationIsMonotone) {
  for (const char* kind : {"grid_l1", "random_graph_hop", "zerol_random", "supplier_random"})
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      MetricInstance inst = generate(kind, GenParams{}, seed);
      Variant var = detect_variant(inst);
      bool seen = false;
      for (const Rat& tau : candidate_thresholds(inst)) {
        bool ok = detail::certify(inst, var, tau).has_value();
        EXPECT_TRUE(ok || !seen) << kind << " seed " << seed << " decertified at " << tau;
        seen = seen || ok;
      }
      EXPECT_TRUE(seen) << kind << " seed " << seed;
    }
}

TEST(FindTauStar, NeverExceedsTheExactOptimum) {
  for (const char* kind :
       {"grid_l1", "random_graph_hop", "zerol_random", "supplier_random", "budget_random"})
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      MetricInstance inst = generate(kind, GenParams{}, seed);
      EXPECT_LE(find_tau_star(inst), exact_opt(inst).opt_radius) << kind << " seed " << seed;
    }
}

TEST(Solve, GapInstanceEndToEnd) {
  MetricInstance inst = generate("gap2x3", GenParams{}, 1);
  Solution sol = solve(inst);
  EXPECT_EQ(sol.variant, Variant::Center);
  EXPECT_EQ(sol.ratio_bound, 9);
  EXPECT_EQ(sol.tau_star, Rat(100));
  ASSERT_EQ(sol.components.size(), 1u);
  EXPECT_EQ(sol.components[0].k_i, 3);
  EXPECT_EQ(sol.opens.size(), 3u);
  // Three openings of capacity two cannot keep both triads local, so some
  // vertex crosses the gap; every pairwise distance is at most the gap.
  EXPECT_EQ(sol.metric_radius, Rat(100));
  EXPECT_EQ(sol.hop_radius, 1);
  for (int v = 0; v < inst.n; ++v) EXPECT_GE(sol.sigma[v], 0);
}

TEST(Solve, RandomInstancesStayWithinTheBoundAndValidate) {
  for (const char* kind :
       {"grid_l1", "random_graph_hop", "zerol_random", "supplier_random", "budget_random"})
    for (std::uint64_t seed = 10; seed < 14; ++seed) {
      MetricInstance inst = generate(kind, GenParams{}, seed);
      Solution sol = solve(inst);
      OracleResult opt = exact_opt(inst);
      EXPECT_LE(sol.tau_star, opt.opt_radius) << kind << " seed " << seed;
      EXPECT_LE(sol.metric_radius, Rat(sol.ratio_bound) * opt.opt_radius)
          << kind << " seed " << seed;
      long long alloc = 0;
      for (const SolutionComponent& c : sol.components) alloc += c.k_i;
      EXPECT_EQ((long long)sol.opens.size(), alloc) << kind << " seed " << seed;
      EXPECT_NO_THROW(validate_solution(inst, sol)) << kind << " seed " << seed;
    }
}

TEST(Solve, AutoDispatchPicksTheVariant) {
  EXPECT_EQ(solve(generate("grid_l1", GenParams{}, 3)).variant, Variant::Center);
  Solution z = solve(generate("zerol_random", GenParams{}, 3));
  EXPECT_EQ(z.variant, Variant::ZeroL);
  EXPECT_EQ(z.ratio_bound, 6);
  Solution s = solve(generate("supplier_random", GenParams{}, 3));
  EXPECT_EQ(s.variant, Variant::Supplier);
  EXPECT_EQ(s.ratio_bound, 11);
  EXPECT_FALSE(s.clients.empty());
  Solution b = solve(generate("budget_random", GenParams{}, 3));
  EXPECT_EQ(b.variant, Variant::Budget);
  EXPECT_EQ(b.ratio_bound, 9);
  EXPECT_LE(b.total_cost, b.budget_limit);
}

TEST(Solve, TooFewOpeningsEverywhereIsInfeasible) {
  MetricInstance inst = complete_unit({1, 1, 1}, 2);
  EXPECT_THROW(find_tau_star(inst), InfeasibleError);
  EXPECT_THROW(solve(inst), InfeasibleError);
}

TEST(Solve, BudgetBeyondReachIsInfeasible) {
  MetricInstance inst = complete_unit({2, 2}, 2);
  inst.cost = {Rat(5), Rat(5)};
  inst.budget = Rat(1);
  inst.validate();
  EXPECT_THROW(solve(inst), InfeasibleError);
}

TEST(Solve, VariantMismatchIsRejected) {
  MetricInstance center = complete_unit({2, 2}, 2);
  EXPECT_THROW(solve(center, Variant::Budget), std::invalid_argument);
  EXPECT_THROW(solve(center, Variant::Supplier), std::invalid_argument);

  MetricInstance supplier = generate("supplier_random", GenParams{}, 1);
  EXPECT_THROW(solve(supplier, Variant::Center), std::invalid_argument);

  MetricInstance lopsided = complete_unit({1, 2}, 2);
  EXPECT_THROW(solve(lopsided, Variant::ZeroL), std::invalid_argument);
  lopsided.cost = {Rat(1), Rat(1)};
  lopsided.budget = Rat(2);
  EXPECT_THROW(solve(lopsided, Variant::Budget), std::invalid_argument);
}

TEST(Solve, RepeatedRunsAreByteIdentical) {
  for (const char* kind : {"grid_l1", "supplier_random", "budget_random"}) {
    MetricInstance inst = generate(kind, GenParams{}, 7);
    EXPECT_EQ(solution_json(solve(inst)), solution_json(solve(inst))) << kind;
  }
}

TEST(SolutionJson, SingletonFreezesTheSchema) {
  Solution sol = solve(complete_unit({1}, 1));
  EXPECT_EQ(solution_json(sol), R"({
  "variant": "center",
  "tau_star": "0",
  "metric_radius": "0",
  "hop_radius": 0,
  "ratio_bound": 9,
  "opens": [
    0
  ],
  "assignment": [
    0
  ],
  "components": [
    {
      "vertices": [
        0
      ],
      "k_i": 1
    }
  ],
  "certified": true
}
)");
}

TEST(SolutionJson, RoundTripsForEveryVariant) {
  for (const char* kind : {"grid_l1", "zerol_random", "supplier_random", "budget_random"}) {
    MetricInstance inst = generate(kind, GenParams{}, 5);
    Solution sol = solve(inst);
    std::string js = solution_json(sol);
    Solution back = solution_from_json(js);
    EXPECT_EQ(solution_json(back), js) << kind;
    EXPECT_NO_THROW(validate_solution(inst, back)) << kind;
  }
}

TEST(SolutionJson, TamperedSolutionsAreRejected) {
  MetricInstance inst = generate("grid_l1", GenParams{}, 5);
  Solution sol = solve(inst);

  Solution t = sol;
  t.metric_radius += 1;
  EXPECT_THROW(validate_solution(inst, t), VerificationError);

  t = sol;
  t.opens.pop_back();
  EXPECT_THROW(validate_solution(inst, t), VerificationError);

  t = sol;
  t.sigma[0] = -1;
  EXPECT_THROW(validate_solution(inst, t), VerificationError);

  t = sol;
  t.certified = false;
  EXPECT_THROW(validate_solution(inst, t), VerificationError);

  EXPECT_THROW(solution_from_json("{ not json"), ParseError);
  EXPECT_THROW(solution_from_json("{\"variant\": \"center\"}"), ParseError);
}

}  // namespace
}  // namespace capkc
