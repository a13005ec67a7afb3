#pragma once

// Exact rational linear programming. Two solvers:
//  - solve_lp: dense two-phase simplex, Dantzig pricing with lowest-index
//    ties switching to Bland's rule after an iteration threshold (so the
//    anti-cycling termination guarantee holds while typical solves stay
//    short). All arithmetic exact; every result is re-verified against the
//    original system before it is returned.
//  - naive_lp_feasible: an independently coded big-M simplex (artificial in
//    every row, pure Bland, no sparsity tricks) used to cross-check
//    feasibility verdicts in tests.
// On top of these: the threshold-graph relaxation (opening variables y_u,
// assignment variables x_uv for hop <= 1 pairs) and the k / cost searches.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "capkc/errors.hpp"
#include "capkc/instance.hpp"
#include "capkc/rational.hpp"

namespace capkc {

enum class Sense { LE, GE, EQ };

struct LinRow {
  std::vector<std::pair<int, Rat>> a;  // (variable, coefficient)
  Sense sense;
  Rat b;
};

// Variables have lower bound 0; optional finite upper bounds.
struct LinearProgram {
  int nvars = 0;
  std::vector<std::optional<Rat>> upper;
  std::vector<LinRow> rows;
  std::vector<Rat> objective;  // empty = pure feasibility; otherwise minimized

  int add_var(std::optional<Rat> ub = std::nullopt) {
    upper.push_back(std::move(ub));
    return nvars++;
  }
  void add_row(std::vector<std::pair<int, Rat>> terms, Sense s, Rat rhs) {
    rows.push_back({std::move(terms), s, std::move(rhs)});
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status;
  Rat objective;
  std::vector<Rat> x;
};

namespace detail {

class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) {
    // Expanded row list: the caller's rows plus one row per finite upper bound.
    std::vector<LinRow> rows = lp.rows;
    for (int j = 0; j < lp.nvars; ++j)
      if (lp.upper[j]) rows.push_back({{{j, Rat(1)}}, Sense::LE, *lp.upper[j]});

    m_ = (int)rows.size();
    nstruct_ = lp.nvars;
    // Column layout: structural, then one slack/surplus per inequality, then
    // one artificial per row that needs one.
    int nslack = 0;
    for (const auto& r : rows)
      if (r.sense != Sense::EQ) ++nslack;
    ncols_ = nstruct_ + nslack;
    T_.assign(m_, std::vector<Rat>(ncols_ + 1, Rat(0)));  // grows for artificials
    basis_.assign(m_, -1);

    int slack_at = nstruct_;
    std::vector<int> need_art;
    for (int i = 0; i < m_; ++i) {
      LinRow r = rows[i];
      // Accumulate duplicate terms, then normalize to b >= 0.
      for (auto& [j, c] : r.a) T_[i][j] += c;
      T_[i][ncols_] = r.b;
      bool flip = T_[i][ncols_] < 0;
      if (flip) {
        for (int j = 0; j <= ncols_; ++j) T_[i][j] = -T_[i][j];
        r.sense = r.sense == Sense::LE ? Sense::GE : (r.sense == Sense::GE ? Sense::LE : Sense::EQ);
      }
      if (r.sense == Sense::LE) {
        T_[i][slack_at] = 1;
        basis_[i] = slack_at++;
      } else if (r.sense == Sense::GE) {
        T_[i][slack_at] = -1;
        ++slack_at;
        need_art.push_back(i);
      } else {
        need_art.push_back(i);
      }
    }
    first_artificial_ = ncols_;
    for (int i : need_art) {
      for (auto& row : T_) row.insert(row.end() - 1, Rat(0));
      ++ncols_;
      T_[i][ncols_ - 1] = 1;
      basis_[i] = ncols_ - 1;
    }
  }

  LpResult solve() {
    // Phase 1: minimize the artificial sum when any artificial is basic.
    if (first_artificial_ < ncols_) {
      std::vector<Rat> cost(ncols_ + 1, Rat(0));
      for (int i = 0; i < m_; ++i)
        if (basis_[i] >= first_artificial_)
          for (int j = 0; j <= ncols_; ++j) cost[j] -= T_[i][j];
      std::vector<char> enterable(ncols_, 1);
      for (int j = first_artificial_; j < ncols_; ++j) enterable[j] = 0;
      bool ok = run(cost, enterable);
      require(ok, "phase-1 objective unbounded");
      if (cost[ncols_] != 0) return {LpStatus::Infeasible, Rat(0), {}};
      drive_out_artificials();
    }

    if (!lp_.objective.empty()) {
      std::vector<Rat> cost(ncols_ + 1, Rat(0));
      for (int j = 0; j < (int)lp_.objective.size(); ++j) cost[j] = lp_.objective[j];
      for (int i = 0; i < m_; ++i)
        if (cost[basis_[i]] != 0) {
          Rat f = cost[basis_[i]];
          for (int j = 0; j <= ncols_; ++j)
            if (T_[i][j] != 0) cost[j] -= f * T_[i][j];
        }
      std::vector<char> enterable(ncols_, 1);
      for (int j = first_artificial_; j < ncols_; ++j) enterable[j] = 0;
      if (!run(cost, enterable)) return {LpStatus::Unbounded, Rat(0), {}};
    }

    LpResult res{LpStatus::Optimal, Rat(0), std::vector<Rat>(nstruct_, Rat(0))};
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < nstruct_) res.x[basis_[i]] = T_[i][ncols_];
    for (int j = 0; j < (int)lp_.objective.size(); ++j)
      res.objective += lp_.objective[j] * res.x[j];
    return res;
  }

 private:
  const LinearProgram& lp_;
  int m_, nstruct_, ncols_, first_artificial_;
  std::vector<std::vector<Rat>> T_;
  std::vector<int> basis_;

  // Minimize cost; returns false on unboundedness.
  bool run(std::vector<Rat>& cost, const std::vector<char>& enterable) {
    const long bland_after = 3L * (m_ + ncols_) + 64;
    for (long iters = 0;; ++iters) {
      int enter = -1;
      if (iters < bland_after) {
        for (int j = 0; j < ncols_; ++j)
          if (enterable[j] && cost[j] < 0 && (enter < 0 || cost[j] < cost[enter])) enter = j;
      } else {
        for (int j = 0; j < ncols_; ++j)
          if (enterable[j] && cost[j] < 0) {
            enter = j;
            break;
          }
      }
      if (enter < 0) return true;

      int leave = -1;
      Rat best;
      for (int i = 0; i < m_; ++i) {
        if (T_[i][enter] <= 0) continue;
        Rat ratio = T_[i][ncols_] / T_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter, cost);
    }
  }

  void pivot(int r, int c, std::vector<Rat>& cost) {
    Rat p = T_[r][c];
    if (p != 1)
      for (int j = 0; j <= ncols_; ++j)
        if (T_[r][j] != 0) T_[r][j] /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == r || T_[i][c] == 0) continue;
      Rat f = T_[i][c];
      for (int j = 0; j <= ncols_; ++j)
        if (T_[r][j] != 0) T_[i][j] -= f * T_[r][j];
    }
    if (cost[c] != 0) {
      Rat f = cost[c];
      for (int j = 0; j <= ncols_; ++j)
        if (T_[r][j] != 0) cost[j] -= f * T_[r][j];
    }
    basis_[r] = c;
  }

  // After phase 1 every artificial sits at value 0; pivot each out on any
  // usable column, or leave it basic in an all-zero (redundant) row.
  void drive_out_artificials() {
    std::vector<Rat> nocost;  // pivot() tolerates an empty cost row
    nocost.assign(ncols_ + 1, Rat(0));
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      require(T_[i][ncols_] == 0, "artificial basic at nonzero value");
      for (int j = 0; j < first_artificial_; ++j)
        if (T_[i][j] != 0) {
          pivot(i, j, nocost);
          break;
        }
    }
  }
};

}  // namespace detail

inline LpResult solve_lp(const LinearProgram& lp) {
  LpResult res = detail::Simplex(lp).solve();
  if (res.status != LpStatus::Optimal) return res;
  // Exact re-check of every constraint and bound: a returned solution is a
  // certificate, never a numeric approximation.
  for (int j = 0; j < lp.nvars; ++j) {
    require(res.x[j] >= 0, "lp solution violates lower bound");
    require(!lp.upper[j] || res.x[j] <= *lp.upper[j], "lp solution violates upper bound");
  }
  for (const auto& row : lp.rows) {
    Rat lhs(0);
    for (const auto& [j, c] : row.a) lhs += c * res.x[j];
    bool ok = row.sense == Sense::LE ? lhs <= row.b
                                     : (row.sense == Sense::GE ? lhs >= row.b : lhs == row.b);
    require(ok, "lp solution violates a constraint");
  }
  return res;
}

// ---------------------------------------------------------------------------
// Independent feasibility check: big-M simplex with an artificial variable in
// every row and pure Bland pivoting. Costs are (M-part, unit-part) pairs
// compared lexicographically, so no concrete big constant is ever chosen.
// Deliberately shares no code with the solver above.

inline bool naive_lp_feasible(const LinearProgram& lp) {
  using MRat = std::pair<Rat, Rat>;  // value = first * M + second
  auto mless = [](const MRat& a, const MRat& b) {
    return a.first != b.first ? a.first < b.first : a.second < b.second;
  };
  const MRat mzero{Rat(0), Rat(0)};

  std::vector<LinRow> rows = lp.rows;
  for (int j = 0; j < lp.nvars; ++j)
    if (lp.upper[j]) rows.push_back({{{j, Rat(1)}}, Sense::LE, *lp.upper[j]});
  int m = (int)rows.size();
  int cols = lp.nvars;
  for (const auto& r : rows)
    if (r.sense != Sense::EQ) ++cols;
  int nart = m;
  int total = cols + nart;

  std::vector<std::vector<Rat>> t(m, std::vector<Rat>(total + 1, Rat(0)));
  std::vector<int> basis(m);
  int slack = lp.nvars;
  for (int i = 0; i < m; ++i) {
    for (auto [j, c] : rows[i].a) t[i][j] += c;
    t[i][total] = rows[i].b;
    if (rows[i].sense != Sense::EQ) {
      t[i][slack++] = rows[i].sense == Sense::LE ? 1 : -1;
    }
    if (t[i][total] < 0)
      for (auto& v : t[i]) v = -v;
    t[i][cols + i] = 1;
    basis[i] = cols + i;
  }

  // Objective: minimize M * (sum of artificials).
  std::vector<MRat> cost(total + 1, mzero);
  for (int j = cols; j < total; ++j) cost[j] = {Rat(1), Rat(0)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= total; ++j) {
      cost[j].first -= t[i][j];  // price out basic artificials (coefficient M)
    }

  for (;;) {
    int enter = -1;
    for (int j = 0; j < total; ++j)
      if (mless(cost[j], mzero)) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    Rat best;
    for (int i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rat ratio = t[i][total] / t[i][enter];
      if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) return false;  // phase objective unbounded: cannot happen, treat as no
    Rat p = t[leave][enter];
    for (auto& v : t[leave]) v /= p;
    for (int i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rat f = t[i][enter];
      for (int j = 0; j <= total; ++j) t[i][j] -= f * t[leave][j];
    }
    MRat f = cost[enter];
    if (f != mzero)
      for (int j = 0; j <= total; ++j) {
        cost[j].first -= f.first * t[leave][j];
        cost[j].second -= f.second * t[leave][j];
      }
    basis[leave] = enter;
  }
  // Feasible iff all artificials were driven to zero.
  MRat opt = cost[total];
  return opt.first == 0 && opt.second == 0;
}

// ---------------------------------------------------------------------------
// The relaxation over a threshold graph: open y_u mass on openable vertices,
// fractionally assign every served vertex across hop <= 1 arcs.

struct BoxedLp {
  LinearProgram lp;
  std::vector<int> yvar;                    // per vertex, -1 when not openable
  std::vector<std::pair<int, int>> arcs;    // (u, v): u may serve v
  std::vector<int> xvar;                    // parallel to arcs
};

struct LpSolution {
  long long k = 0;
  std::vector<Rat> y;
  std::vector<std::pair<int, int>> arcs;
  std::vector<Rat> x;  // parallel to arcs
  Rat objective;       // sum of cost * y in min-cost mode
};

inline std::vector<char> all_vertices(int n) { return std::vector<char>(n, 1); }

inline BoxedLp build_lp(const ThresholdGraph& g, const std::vector<Rat>& L, long long k,
                        const std::vector<char>& served, const std::vector<char>& openable,
                        const std::vector<Rat>* cost = nullptr) {
  require((int)L.size() == g.n && (int)served.size() == g.n && (int)openable.size() == g.n,
          "build_lp: size mismatch");
  BoxedLp b;
  b.yvar.assign(g.n, -1);
  for (int u = 0; u < g.n; ++u)
    if (openable[u]) b.yvar[u] = b.lp.add_var(Rat(1));
  for (int u = 0; u < g.n; ++u) {
    if (!openable[u]) continue;
    for (int v : g.neighbors_plus(u))
      if (served[v]) {
        b.arcs.emplace_back(u, v);
        // x_uv <= y_u <= 1 keeps x bounded; no explicit upper bound needed.
        b.xvar.push_back(b.lp.add_var());
      }
  }
  std::vector<std::pair<int, Rat>> total;
  for (int u = 0; u < g.n; ++u)
    if (b.yvar[u] >= 0) total.emplace_back(b.yvar[u], Rat(1));
  b.lp.add_row(std::move(total), Sense::EQ, Rat((long)k));

  std::vector<std::vector<std::pair<int, Rat>>> cap_row(g.n), cover_row(g.n);
  for (std::size_t a = 0; a < b.arcs.size(); ++a) {
    auto [u, v] = b.arcs[a];
    b.lp.add_row({{b.xvar[a], Rat(1)}, {b.yvar[u], Rat(-1)}}, Sense::LE, Rat(0));
    cap_row[u].emplace_back(b.xvar[a], Rat(1));
    cover_row[v].emplace_back(b.xvar[a], Rat(1));
  }
  for (int u = 0; u < g.n; ++u)
    if (b.yvar[u] >= 0) {
      auto row = cap_row[u];
      row.emplace_back(b.yvar[u], -L[u]);
      b.lp.add_row(std::move(row), Sense::LE, Rat(0));
    }
  for (int v = 0; v < g.n; ++v)
    if (served[v]) b.lp.add_row(std::move(cover_row[v]), Sense::EQ, Rat(1));

  if (cost) {
    b.lp.objective.assign(b.lp.nvars, Rat(0));
    for (int u = 0; u < g.n; ++u)
      if (b.yvar[u] >= 0) b.lp.objective[b.yvar[u]] = (*cost)[u];
  }
  return b;
}

// Exact re-check of the full constraint system on a candidate solution.
inline void verify_lp_solution(const ThresholdGraph& g, const std::vector<Rat>& L, long long k,
                               const std::vector<char>& served, const std::vector<char>& openable,
                               const LpSolution& sol) {
  require((int)sol.y.size() == g.n, "lp solution: y size");
  Rat ysum(0);
  for (int u = 0; u < g.n; ++u) {
    require(sol.y[u] >= 0 && sol.y[u] <= 1, "lp solution: y out of [0,1]");
    require(openable[u] || sol.y[u] == 0, "lp solution: y on non-openable vertex");
    ysum += sol.y[u];
  }
  require(ysum == Rat((long)k), "lp solution: sum y != k");
  std::vector<Rat> load(g.n, Rat(0)), covered(g.n, Rat(0));
  for (std::size_t a = 0; a < sol.arcs.size(); ++a) {
    auto [u, v] = sol.arcs[a];
    require(u == v || g.adjacent(u, v), "lp solution: arc outside graph");
    require(sol.x[a] >= 0 && sol.x[a] <= sol.y[u], "lp solution: x outside [0, y]");
    load[u] += sol.x[a];
    covered[v] += sol.x[a];
  }
  for (int u = 0; u < g.n; ++u) {
    require(load[u] <= L[u] * sol.y[u], "lp solution: capacity constraint violated");
    if (served[u]) require(covered[u] == 1, "lp solution: coverage != 1");
  }
}

inline std::optional<LpSolution> solve_boxed(const ThresholdGraph& g, const std::vector<Rat>& L,
                                             long long k, const std::vector<char>& served,
                                             const std::vector<char>& openable,
                                             const std::vector<Rat>* cost = nullptr) {
  BoxedLp b = build_lp(g, L, k, served, openable, cost);
  LpResult r = solve_lp(b.lp);
  if (r.status == LpStatus::Infeasible) return std::nullopt;
  require(r.status == LpStatus::Optimal, "relaxation cannot be unbounded");
  LpSolution sol;
  sol.k = k;
  sol.y.assign(g.n, Rat(0));
  for (int u = 0; u < g.n; ++u)
    if (b.yvar[u] >= 0) sol.y[u] = r.x[b.yvar[u]];
  sol.arcs = b.arcs;
  for (int xv : b.xvar) sol.x.push_back(r.x[xv]);
  sol.objective = r.objective;
  verify_lp_solution(g, L, k, served, openable, sol);
  return sol;
}

// Fewest openable vertices whose capacities cover the served count; a lower
// bound for feasibility since sum_u L(u) y_u >= |served| and y <= 1.
inline std::optional<long long> counting_lower_bound(const ThresholdGraph& g,
                                                     const std::vector<Rat>& L,
                                                     const std::vector<char>& served,
                                                     const std::vector<char>& openable) {
  long nserved = 0;
  for (char s : served) nserved += s;
  std::vector<Rat> caps;
  for (int u = 0; u < g.n; ++u)
    if (openable[u]) caps.push_back(L[u]);
  std::sort(caps.begin(), caps.end(), std::greater<Rat>());
  Rat sum(0);
  long long cnt = 0;
  for (const Rat& c : caps) {
    if (sum >= nserved) break;
    sum += c;
    ++cnt;
  }
  if (sum < nserved) return std::nullopt;
  return std::max(cnt, 1LL);
}

// Smallest k making the relaxation feasible on one component; feasibility is
// monotone in k (any y with sum k < n has room to grow), so binary search
// over [lower bound, #openable] is sound. scan = linear scan for paranoia.
inline std::optional<long long> min_feasible_k(const ThresholdGraph& g, const std::vector<Rat>& L,
                                               const std::vector<char>& served,
                                               const std::vector<char>& openable,
                                               bool scan = false) {
  long long nopen = 0;
  for (char o : openable) nopen += o;
  long nserved = 0;
  for (char s : served) nserved += s;
  if (nserved == 0) return 0;
  auto klb = counting_lower_bound(g, L, served, openable);
  if (!klb) return std::nullopt;
  auto feasible = [&](long long k) {
    return solve_boxed(g, L, k, served, openable).has_value();
  };
  if (scan) {
    for (long long k = *klb; k <= nopen; ++k)
      if (feasible(k)) return k;
    return std::nullopt;
  }
  if (feasible(*klb)) return *klb;
  long long lo = *klb, hi = nopen;
  if (lo == hi || !feasible(hi)) return std::nullopt;
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

struct MinCostResult {
  Rat cost;
  long long k;
  LpSolution sol;
};

// Budgeted variant: cheapest fractional opening over every feasible k,
// smallest k on ties.
inline std::optional<MinCostResult> min_cost_for_component(const ThresholdGraph& g,
                                                           const std::vector<Rat>& L,
                                                           const std::vector<Rat>& cost) {
  auto served = all_vertices(g.n);
  auto klb = counting_lower_bound(g, L, served, served);
  if (!klb) return std::nullopt;
  std::optional<MinCostResult> best;
  for (long long k = *klb; k <= g.n; ++k) {
    auto sol = solve_boxed(g, L, k, served, served, &cost);
    if (!sol) continue;
    if (!best || sol->objective < best->cost) best = MinCostResult{sol->objective, k, *sol};
  }
  return best;
}

}  // namespace capkc
