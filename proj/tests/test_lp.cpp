#include <gtest/gtest.h>

#include "capkc/lp.hpp"
#include "capkc/rng.hpp"

using namespace capkc;

namespace {

ThresholdGraph triangle_graph() {
  return ThresholdGraph(3, {{0, 1}, {0, 2}, {1, 2}}, Rat(1));
}

ThresholdGraph path_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return ThresholdGraph(n, e, Rat(1));
}

std::vector<Rat> uniform_caps(int n, long c) { return std::vector<Rat>(n, Rat(c)); }

ThresholdGraph random_graph(Rng& rng, int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.chance(1, 2)) e.emplace_back(i, j);
  return ThresholdGraph(n, e, Rat(1));
}

}  // namespace

TEST(SolveLp, MinimizeSingleBoundedVar) {
  LinearProgram lp;
  int x = lp.add_var(Rat(1));
  lp.objective = {Rat(1)};
  LpResult r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_EQ(r.x[x], Rat(0));
  EXPECT_EQ(r.objective, Rat(0));

  lp.objective = {Rat(-1)};
  r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_EQ(r.x[x], Rat(1));
  EXPECT_EQ(r.objective, Rat(-1));
}

TEST(SolveLp, UnboundedDetected) {
  LinearProgram lp;
  lp.add_var();
  lp.objective = {Rat(-1)};
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Unbounded);
}

TEST(SolveLp, InfeasibleDetected) {
  {
    LinearProgram lp;
    int x = lp.add_var(Rat(1));
    lp.add_row({{x, Rat(1)}}, Sense::GE, Rat(2));
    EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);
  }
  {
    LinearProgram lp;
    int x = lp.add_var();
    lp.add_row({{x, Rat(1)}}, Sense::LE, Rat(-1));
    EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);
  }
  {
    LinearProgram lp;  // 0 = 1
    lp.add_row({}, Sense::EQ, Rat(1));
    EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);
  }
}

TEST(SolveLp, EqualitySystemSolvedExactly) {
  LinearProgram lp;
  int x = lp.add_var(), y = lp.add_var();
  lp.add_row({{x, Rat(1)}, {y, Rat(1)}}, Sense::EQ, Rat(1));
  lp.add_row({{x, Rat(1)}, {y, Rat(-1)}}, Sense::EQ, make_rat(1, 3));
  lp.objective = {Rat(0), Rat(1)};
  LpResult r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_EQ(r.x[x], make_rat(2, 3));
  EXPECT_EQ(r.x[y], make_rat(1, 3));
}

// Beale's classic degenerate example: cycles under naive most-negative
// pricing without safeguards; must terminate here with optimum -1/20.
TEST(SolveLp, BealeDegenerateTerminates) {
  LinearProgram lp;
  int x1 = lp.add_var(), x2 = lp.add_var(), x3 = lp.add_var(), x4 = lp.add_var();
  lp.add_row({{x1, make_rat(1, 4)}, {x2, Rat(-60)}, {x3, make_rat(-1, 25)}, {x4, Rat(9)}},
             Sense::LE, Rat(0));
  lp.add_row({{x1, make_rat(1, 2)}, {x2, Rat(-90)}, {x3, make_rat(-1, 50)}, {x4, Rat(3)}},
             Sense::LE, Rat(0));
  lp.add_row({{x3, Rat(1)}}, Sense::LE, Rat(1));
  lp.objective = {make_rat(-3, 4), Rat(150), make_rat(-1, 50), Rat(6)};
  LpResult r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_EQ(r.objective, make_rat(-1, 20));
}

TEST(SolveLp, DuplicateTermsAccumulate) {
  LinearProgram lp;
  int x = lp.add_var(Rat(5));
  lp.add_row({{x, Rat(1)}, {x, Rat(1)}}, Sense::EQ, Rat(4));  // 2x = 4
  lp.objective = {Rat(1)};
  LpResult r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_EQ(r.x[x], Rat(2));
}

TEST(NaiveSolver, MatchesOnSmallSystems) {
  {
    LinearProgram lp;
    int x = lp.add_var(Rat(1));
    lp.add_row({{x, Rat(1)}}, Sense::GE, make_rat(1, 2));
    EXPECT_TRUE(naive_lp_feasible(lp));
    lp.add_row({{x, Rat(1)}}, Sense::LE, make_rat(1, 3));
    EXPECT_FALSE(naive_lp_feasible(lp));
  }
  {
    LinearProgram lp;
    lp.add_row({}, Sense::EQ, Rat(1));
    EXPECT_FALSE(naive_lp_feasible(lp));
  }
}

TEST(BoxedLp, SingletonFeasible) {
  ThresholdGraph g(1, {}, Rat(0));
  auto sol = solve_boxed(g, uniform_caps(1, 1), 1, all_vertices(1), all_vertices(1));
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(sol->y[0], Rat(1));
}

TEST(BoxedLp, TriangleCapacityTwo) {
  ThresholdGraph g = triangle_graph();
  auto caps = uniform_caps(3, 2);
  EXPECT_TRUE(solve_boxed(g, caps, 2, all_vertices(3), all_vertices(3)).has_value());
  // Capacity bound: one center serves at most 2 of the 3 vertices.
  EXPECT_FALSE(solve_boxed(g, caps, 1, all_vertices(3), all_vertices(3)).has_value());
}

TEST(BoxedLp, SupplierModeRestrictsOpenings) {
  // Vertex 0 is the only facility; 1 and 2 are clients adjacent to it.
  ThresholdGraph g(3, {{0, 1}, {0, 2}}, Rat(1));
  std::vector<char> served = {0, 1, 1}, openable = {1, 0, 0};
  auto sol = solve_boxed(g, {Rat(2), Rat(0), Rat(0)}, 1, served, openable);
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(sol->y[0], Rat(1));
  EXPECT_EQ(sol->y[1], Rat(0));
  // With capacity 1 the single facility cannot cover both clients.
  EXPECT_FALSE(solve_boxed(g, {Rat(1), Rat(0), Rat(0)}, 1, served, openable).has_value());
}

TEST(MinFeasibleK, SpecimenValues) {
  EXPECT_EQ(min_feasible_k(triangle_graph(), uniform_caps(3, 2), all_vertices(3), all_vertices(3)),
            std::optional<long long>(2));
  ThresholdGraph single(1, {}, Rat(0));
  EXPECT_EQ(min_feasible_k(single, uniform_caps(1, 1), all_vertices(1), all_vertices(1)),
            std::optional<long long>(1));
  // Unit capacities on a path: every vertex needs its own center.
  EXPECT_EQ(min_feasible_k(path_graph(4), uniform_caps(4, 1), all_vertices(4), all_vertices(4)),
            std::optional<long long>(4));
}

TEST(MinFeasibleK, AllZeroCapacitiesInfeasible) {
  EXPECT_EQ(min_feasible_k(path_graph(3), uniform_caps(3, 0), all_vertices(3), all_vertices(3)),
            std::nullopt);
}

TEST(MinFeasibleK, NothingServedIsZero) {
  std::vector<char> none(3, 0);
  EXPECT_EQ(min_feasible_k(triangle_graph(), uniform_caps(3, 2), none, all_vertices(3)),
            std::optional<long long>(0));
}

TEST(MinFeasibleK, ScanMatchesBinarySearch) {
  Rng rng(20240811);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + (int)rng.below(5);
    ThresholdGraph g = random_graph(rng, n);
    std::vector<Rat> caps;
    for (int i = 0; i < n; ++i) caps.push_back(Rat((long)rng.below(4)));
    auto fast = min_feasible_k(g, caps, all_vertices(n), all_vertices(n), false);
    auto slow = min_feasible_k(g, caps, all_vertices(n), all_vertices(n), true);
    EXPECT_EQ(fast, slow) << "trial " << trial;
  }
}

TEST(MinFeasibleK, FeasibilityMonotoneInK) {
  Rng rng(77001);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + (int)rng.below(5);
    ThresholdGraph g = random_graph(rng, n);
    std::vector<Rat> caps;
    for (int i = 0; i < n; ++i) caps.push_back(Rat((long)rng.below(4)));
    bool seen_feasible = false;
    for (long long k = 1; k <= n; ++k) {
      bool f = solve_boxed(g, caps, k, all_vertices(n), all_vertices(n)).has_value();
      if (seen_feasible) {
        EXPECT_TRUE(f) << "feasibility lost going up from smaller k, trial " << trial;
      }
      seen_feasible = seen_feasible || f;
    }
  }
}

TEST(BoxedLp, AgreesWithNaiveSolverOnSmallInstances) {
  Rng rng(5150);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + (int)rng.below(5);  // n <= 6
    ThresholdGraph g = random_graph(rng, n);
    std::vector<Rat> caps;
    for (int i = 0; i < n; ++i) caps.push_back(Rat((long)rng.below(4)));
    long long k = 1 + (long long)rng.below(n);
    BoxedLp b = build_lp(g, caps, k, all_vertices(n), all_vertices(n));
    bool fast = solve_lp(b.lp).status == LpStatus::Optimal;
    bool naive = naive_lp_feasible(b.lp);
    EXPECT_EQ(fast, naive) << "trial " << trial << " n=" << n << " k=" << k;
    ++checked;
  }
  EXPECT_EQ(checked, 60);
}

TEST(MinCost, UnitCostsEqualMinFeasibleK) {
  Rng rng(909);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 2 + (int)rng.below(5);
    ThresholdGraph g = random_graph(rng, n);
    std::vector<Rat> caps;
    for (int i = 0; i < n; ++i) caps.push_back(Rat(1 + (long)rng.below(3)));
    auto mc = min_cost_for_component(g, caps, std::vector<Rat>(n, Rat(1)));
    auto mk = min_feasible_k(g, caps, all_vertices(n), all_vertices(n));
    ASSERT_EQ(mc.has_value(), mk.has_value()) << "trial " << trial;
    if (mc) {
      EXPECT_EQ(mc->cost, Rat((long)*mk)) << "trial " << trial;
      EXPECT_EQ(mc->k, *mk) << "trial " << trial;
    }
  }
}

TEST(MinCost, SingletonCostSeven) {
  ThresholdGraph g(1, {}, Rat(0));
  auto mc = min_cost_for_component(g, uniform_caps(1, 1), {Rat(7)});
  ASSERT_TRUE(mc.has_value());
  EXPECT_EQ(mc->cost, Rat(7));
  EXPECT_EQ(mc->k, 1);
}

TEST(MinCost, TriangleAsymmetricCosts) {
  // costs (1,10,10), L=2, so with k=2 the objective is 1*y0 + 10*(2-y0)
  // = 20 - 9*y0, minimized at y0 = 1: optimum exactly 11.
  ThresholdGraph g = triangle_graph();
  std::vector<Rat> cost = {Rat(1), Rat(10), Rat(10)};
  auto mc = min_cost_for_component(g, uniform_caps(3, 2), cost);
  ASSERT_TRUE(mc.has_value());
  EXPECT_EQ(mc->cost, Rat(11));
  EXPECT_EQ(mc->k, 2);
  EXPECT_EQ(mc->sol.y[0], Rat(1));

  // Independent confirmation with the naive solver: budget 11 admits a
  // solution, any budget below 11 does not.
  for (long long k = 1; k <= 3; ++k) {
    BoxedLp b = build_lp(g, uniform_caps(3, 2), k, all_vertices(3), all_vertices(3));
    std::vector<std::pair<int, Rat>> budget_row;
    for (int u = 0; u < 3; ++u) budget_row.emplace_back(b.yvar[u], cost[u]);
    LinearProgram at11 = b.lp, below = b.lp;
    at11.add_row(budget_row, Sense::LE, Rat(11));
    below.add_row(budget_row, Sense::LE, make_rat(10999, 1000));
    // k=1 is infeasible outright; k=3 forces y = (1,1,1) with cost 21.
    EXPECT_EQ(naive_lp_feasible(at11), k == 2) << "k=" << k;
    EXPECT_FALSE(naive_lp_feasible(below)) << "k=" << k;
  }
}

TEST(MinCost, SmallestKWinsTies) {
  // Zero costs: every feasible k has objective 0; must report the smallest.
  ThresholdGraph g = triangle_graph();
  auto mc = min_cost_for_component(g, uniform_caps(3, 2), std::vector<Rat>(3, Rat(0)));
  ASSERT_TRUE(mc.has_value());
  EXPECT_EQ(mc->cost, Rat(0));
  EXPECT_EQ(mc->k, 2);
}
