#pragma once

// End-to-end solver: find the smallest certifiable threshold, solve every
// component of its graph with the variant's rounding, merge back to original
// ids, and re-validate the merged solution from scratch.
//
// Certifying a threshold means computing, per connected component, the
// smallest feasible opening count (for the budget variant: the cheapest
// fractional opening) and checking that the component totals fit within k
// (respectively within the budget). Any slack is discarded — extra openings
// never reduce the radius bound and only complicate the per-component
// arguments. For the counting variants certifiability is monotone in the
// threshold: raising it only merges components, and a merged component
// accepts the union of the old openings, so the candidate ladder can be
// bisected. No such proof covers cost certification, so the budget variant
// scans the ladder in order by default and bisects only on explicit request.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "capkc/errors.hpp"
#include "capkc/extensions.hpp"
#include "capkc/instance.hpp"
#include "capkc/lp.hpp"
#include "capkc/rational.hpp"
#include "capkc/reduce.hpp"
#include "capkc/solution.hpp"
#include "capkc/transfer.hpp"
#include "capkc/zerol.hpp"

namespace capkc {

enum class TauSearch {
  Default,  // bisect; the budget variant scans (see the header comment)
  Scan,     // probe every candidate in ascending order
  Bisect,   // bisect even for the budget variant (experimental)
};

// Reject instances whose extra data does not fit the requested variant, so a
// forced --variant cannot silently misread cost or facility columns.
inline void check_variant_input(const MetricInstance& inst, Variant var) {
  switch (var) {
    case Variant::Budget: {
      if (!inst.has_cost())
        throw std::invalid_argument("budget variant needs COST and BUDGET data");
      if (inst.has_facility())
        throw std::invalid_argument("budget variant does not take FACILITY data");
      for (long long c : inst.cap)
        if (c != inst.cap[0] || c <= 0)
          throw std::invalid_argument("budget variant needs uniform positive capacities");
      break;
    }
    case Variant::Supplier:
      if (!inst.has_facility())
        throw std::invalid_argument("supplier variant needs FACILITY data");
      if (inst.has_cost()) throw std::invalid_argument("supplier variant does not take COST data");
      break;
    case Variant::ZeroL: {
      if (inst.has_cost() || inst.has_facility())
        throw std::invalid_argument("two-level variant does not take COST or FACILITY data");
      long long lvl = 0;
      for (long long c : inst.cap) {
        if (c == 0) continue;
        if (lvl == 0) lvl = c;
        if (c != lvl) throw std::invalid_argument("capacities must be 0 or one shared value");
      }
      break;
    }
    case Variant::Center:
      if (inst.has_cost() || inst.has_facility())
        throw std::invalid_argument("plain variant does not take COST or FACILITY data");
      break;
    default:
      break;
  }
}

namespace detail {

struct ComponentPlan {
  std::vector<int> verts;  // original ids, ascending
  long long k_i = 0;
  Rat relax_cost;  // budget variant: cheapest fractional opening cost
};

// The certification test at one threshold; nullopt when it fails.
inline std::optional<std::vector<ComponentPlan>> certify(const MetricInstance& inst, Variant var,
                                                         const Rat& tau) {
  ThresholdGraph g = variant_graph(inst, var, tau);
  std::vector<Rat> L = rat_caps(inst);
  std::vector<ComponentPlan> plans;
  Rat total_cost(0);
  long long total_k = 0;
  for (Component& comp : components(g)) {
    ComponentPlan plan;
    std::vector<Rat> Lc;
    for (int ov : comp.verts) Lc.push_back(L[ov]);
    if (var == Variant::Budget) {
      std::vector<Rat> Cc;
      for (int ov : comp.verts) Cc.push_back(inst.cost[ov]);
      auto mc = min_cost_for_component(comp.graph, Lc, Cc);
      if (!mc) return std::nullopt;
      plan.k_i = mc->k;
      plan.relax_cost = mc->cost;
      total_cost += mc->cost;
    } else {
      std::vector<char> served, openable;
      if (var == Variant::Supplier) {
        for (int ov : comp.verts) {
          served.push_back(!inst.facility[ov]);
          openable.push_back(inst.facility[ov]);
        }
      } else {
        served = openable = all_vertices(comp.graph.n);
      }
      auto ki = min_feasible_k(comp.graph, Lc, served, openable);
      if (!ki) return std::nullopt;
      plan.k_i = *ki;
      total_k += *ki;
    }
    plan.verts = std::move(comp.verts);
    plans.push_back(std::move(plan));
  }
  if (var == Variant::Budget) {
    if (total_cost > *inst.budget) return std::nullopt;
  } else if (total_k > inst.k) {
    return std::nullopt;
  }
  return plans;
}

}  // namespace detail

// Smallest pairwise distance whose threshold graph certifies; this never
// exceeds the optimum radius, since the optimum's own opening counts certify
// its threshold. Throws InfeasibleError when even the full graph fails.
inline Rat find_tau_star(const MetricInstance& inst, Variant var = Variant::Auto,
                         TauSearch mode = TauSearch::Default) {
  inst.validate();
  if (var == Variant::Auto) var = detect_variant(inst);
  check_variant_input(inst, var);
  std::vector<Rat> ladder = candidate_thresholds(inst);
  bool scan = mode == TauSearch::Scan || (mode == TauSearch::Default && var == Variant::Budget);
  const char* msg = var == Variant::Budget
                        ? "no threshold is within budget: the instance is infeasible"
                        : "no threshold fits within k openings: the instance is infeasible";
  if (scan) {
    for (const Rat& tau : ladder)
      if (detail::certify(inst, var, tau)) return tau;
    throw InfeasibleError(msg);
  }
  int hi = (int)ladder.size() - 1;
  if (!detail::certify(inst, var, ladder[hi])) throw InfeasibleError(msg);
  int lo = -1;  // ladder[lo] is known to fail, ladder[hi] to pass
  while (hi - lo > 1) {
    int mid = lo + (hi - lo) / 2;
    (detail::certify(inst, var, ladder[mid]) ? hi : lo) = mid;
  }
  return ladder[hi];
}

inline Solution solve(const MetricInstance& inst, Variant variant = Variant::Auto,
                      TauSearch mode = TauSearch::Default) {
  inst.validate();
  Variant var = variant == Variant::Auto ? detect_variant(inst) : variant;
  check_variant_input(inst, var);

  Rat tau = find_tau_star(inst, var, mode);
  auto plans = detail::certify(inst, var, tau);
  require(plans.has_value(), "threshold search returned an uncertified threshold");

  Solution sol;
  sol.variant = var;
  sol.tau_star = tau;
  sol.ratio_bound = variant_ratio_bound(var);
  sol.sigma.assign(inst.n, -1);
  sol.metric_radius = Rat(0);

  ThresholdGraph g = variant_graph(inst, var, tau);
  std::vector<Rat> L = rat_caps(inst);
  std::vector<Component> comps = components(g);
  require(comps.size() == plans->size(), "component count changed between certify and solve");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const Component& comp = comps[i];
    const detail::ComponentPlan& plan = (*plans)[i];
    require(plan.verts == comp.verts, "component layout changed between certify and solve");
    std::vector<Rat> Lc;
    for (int ov : comp.verts) Lc.push_back(L[ov]);

    std::vector<int> S;
    Assignment assign;
    if (var == Variant::Budget) {
      std::vector<Rat> Cc;
      for (int ov : comp.verts) Cc.push_back(inst.cost[ov]);
      BudgetComponentSolution bs = solve_budget_component(comp.graph, Lc, Cc);
      require(bs.k == plan.k_i && bs.relax_cost == plan.relax_cost,
              "budget component drifted from its certification");
      S = std::move(bs.S);
      assign = std::move(bs.assign);
      sol.total_cost += bs.open_cost;
    } else if (var == Variant::Supplier) {
      std::vector<char> cl;
      for (int ov : comp.verts) cl.push_back(!inst.facility[ov]);
      SupplierComponentSolution ss = solve_supplier_component(comp.graph, Lc, cl, plan.k_i);
      S = std::move(ss.S);
      assign = std::move(ss.assign);
    } else if (var == Variant::ZeroL) {
      ZerolComponentSolution zs = solve_zerol_component(comp.graph, Lc, plan.k_i);
      S = std::move(zs.S);
      assign = std::move(zs.assign);
    } else {
      ComponentSolution ps = solve_component(comp.graph, Lc, plan.k_i);
      S = std::move(ps.S);
      assign = std::move(ps.assign);
    }

    for (int s : S) sol.opens.push_back(comp.verts[s]);
    for (int v = 0; v < comp.graph.n; ++v) {
      if (assign.sigma[v] < 0) continue;
      int ov = comp.verts[v], oc = comp.verts[assign.sigma[v]];
      sol.sigma[ov] = oc;
      sol.metric_radius = std::max(sol.metric_radius, inst.dist[ov][oc]);
    }
    sol.hop_radius = std::max(sol.hop_radius, assign.radius);
    sol.components.push_back({comp.verts, plan.k_i});
  }
  std::sort(sol.opens.begin(), sol.opens.end());
  if (var == Variant::Budget) sol.budget_limit = *inst.budget;
  if (var == Variant::Supplier)
    for (int v = 0; v < inst.n; ++v) (inst.facility[v] ? sol.facilities : sol.clients).push_back(v);
  sol.certified = true;
  validate_solution(inst, sol);
  return sol;
}

inline Solution solve_supplier(const MetricInstance& inst, TauSearch mode = TauSearch::Default) {
  return solve(inst, Variant::Supplier, mode);
}

inline Solution solve_budget(const MetricInstance& inst, TauSearch mode = TauSearch::Default) {
  return solve(inst, Variant::Budget, mode);
}

}  // namespace capkc
