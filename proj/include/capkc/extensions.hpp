#pragma once

// Supplier and budgeted solvers, both running the shared cluster / aggregate /
// round / slide engine from reduce.hpp.
//
// Supplier: openings live on facilities and only clients need coverage, over a
// bipartite threshold graph. Midpoints are clients, each new one at hop
// exactly 4 from the midpoint set. Client-client hops are even, so once no
// client sits at exactly 4 every client is within 2 and every facility within
// 3 (checked); cluster links span at most 4 hops, the rounded opening is a
// distance-10 transfer, and clients reach their centers within 11 hops.
//
// Budget: capacities are uniform, opening costs vary, and the relaxation
// minimizes cost per component (the per-component certificate value). The
// rounding runs with surrogate capacities 1 + max cost - cost(v), which turns
// "prefer large capacity" into "prefer cheap". The transfer condition over the
// full vertex set reads sum_S surrogate >= sum_v y_v * surrogate(v); together
// with |S| = sum_v y_v that is exactly cost(S) <= cost(y). The open set is
// re-verified as a distance-8 transfer under the true capacities (uniform, so
// any movement of the right total qualifies) and assigned within 9 hops.

#include <algorithm>
#include <vector>

#include "capkc/errors.hpp"
#include "capkc/instance.hpp"
#include "capkc/lp.hpp"
#include "capkc/rational.hpp"
#include "capkc/reduce.hpp"
#include "capkc/transfer.hpp"
#include "capkc/treealg.hpp"

namespace capkc {

// Clustering for bipartite client/facility graphs. Midpoints are clients,
// pairwise more than 2 apart; each non-root midpoint links to an earlier one
// at hop exactly 4. Every vertex joins its nearest midpoint (lowest position
// on ties); the delegate is the capacity maximum of the midpoint's closed
// neighborhood, which is all facilities plus the midpoint itself.
inline ClusterTree supplier_cluster(const ThresholdGraph& g, const std::vector<Rat>& L,
                                    const std::vector<char>& client) {
  require(g.n >= 1 && (int)L.size() == g.n && (int)client.size() == g.n,
          "supplier_cluster: bad input");
  for (int v = 0; v < g.n; ++v) require(g.hop[0][v] >= 0, "supplier_cluster: graph not connected");
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u])
      require(client[u] != client[v], "supplier_cluster: edge joins two vertices of one side");
  int first = -1;
  for (int v = 0; v < g.n && first < 0; ++v)
    if (client[v]) first = v;
  require(first >= 0, "supplier_cluster: no client to build clusters around");

  ClusterTree ct;
  std::vector<int> dist(g.n);  // hop distance to the midpoint set
  auto add_midpoint = [&](int v, int parent) {
    ct.midpoints.push_back(v);
    ct.parent_pos.push_back(parent);
    for (int u = 0; u < g.n; ++u)
      dist[u] = ct.midpoints.size() == 1 ? g.hop[v][u] : std::min(dist[u], g.hop[v][u]);
  };
  add_midpoint(first, -1);
  for (;;) {
    int next = -1;
    for (int v = 0; v < g.n && next < 0; ++v)
      if (client[v] && dist[v] == 4) next = v;
    if (next < 0) {
      // Parity: client distances to the (client) midpoints are even, so "none
      // at exactly 4" pins every client within 2 and every facility within 3.
      for (int v = 0; v < g.n; ++v)
        require(dist[v] <= (client[v] ? 2 : 3), "supplier_cluster: vertex beyond the horizon");
      break;
    }
    int parent = -1;
    for (std::size_t i = 0; i < ct.midpoints.size() && parent < 0; ++i)
      if (g.hop[ct.midpoints[i]][next] == 4) parent = (int)i;
    require(parent >= 0, "supplier_cluster: no hop-4 parent for new midpoint");
    add_midpoint(next, parent);
  }

  ct.cluster_of.assign(g.n, -1);
  for (int v = 0; v < g.n; ++v) {
    int best = -1;
    for (std::size_t i = 0; i < ct.midpoints.size(); ++i)
      if (best < 0 || g.hop[ct.midpoints[i]][v] < g.hop[ct.midpoints[best]][v]) best = (int)i;
    ct.cluster_of[v] = best;
  }
  for (std::size_t i = 0; i < ct.midpoints.size(); ++i) {
    int best = -1;
    for (int u : g.neighbors_plus(ct.midpoints[i]))
      if (best < 0 || L[u] > L[best]) best = u;
    ct.delegate.push_back(best);
  }

  for (std::size_t i = 0; i < ct.midpoints.size(); ++i) {
    if (ct.parent_pos[i] >= 0)
      require(g.hop[ct.midpoints[i]][ct.midpoints[ct.parent_pos[i]]] == 4,
              "supplier_cluster: tree link not at hop 4");
    for (int u : g.neighbors_plus(ct.midpoints[i]))
      require(ct.cluster_of[u] == (int)i, "supplier_cluster: closed neighborhood leaks");
  }
  for (int v = 0; v < g.n; ++v)
    require(g.hop[ct.midpoints[ct.cluster_of[v]]][v] <= (client[v] ? 2 : 3),
            "supplier_cluster: member beyond its cluster radius");
  return ct;
}

// Rounds a supplier relaxation. Tree links span at most 4 hops (exactly 4
// between auxiliaries, 1 or 3 down to residual facilities), so the engine
// certifies a distance-10 transfer.
inline ReduceResult supplier_reduce_and_round(const ThresholdGraph& g, const std::vector<Rat>& L,
                                              const std::vector<char>& client,
                                              const LpSolution& lp) {
  return detail::run_phases(g, L, lp, supplier_cluster(g, L, client), 4,
                            [](const TreeInstance& t) { return round_tree(t); });
}

struct SupplierComponentSolution {
  std::vector<int> S;
  Assignment assign;
  ReduceResult detail;
};

// One connected component of the bipartite graph at a given opening count:
// solve the relaxation on facilities, round it, assign clients within hop 11.
inline SupplierComponentSolution solve_supplier_component(const ThresholdGraph& g,
                                                          const std::vector<Rat>& L,
                                                          const std::vector<char>& client,
                                                          long long k) {
  SupplierComponentSolution cs;
  if (std::find(client.begin(), client.end(), (char)1) == client.end()) {
    require(k == 0, "solve_supplier_component: openings requested but nothing to serve");
    cs.assign.sigma.assign(g.n, -1);
    cs.assign.load.assign(g.n, 0);
    return cs;
  }
  std::vector<char> fac(g.n);
  for (int v = 0; v < g.n; ++v) fac[v] = !client[v];
  auto lp = solve_boxed(g, L, k, client, fac);
  require(lp.has_value(), "solve_supplier_component called with an infeasible opening count");
  cs.detail = supplier_reduce_and_round(g, L, client, *lp);
  cs.S = cs.detail.S;
  for (int s : cs.S) require(!client[s], "supplier rounding opened a client");
  cs.assign = extract_assignment(g, L, cs.S, 10, &client);
  return cs;
}

// Capacities that rank vertices by cheapness: strictly positive, and larger
// exactly when the opening cost is smaller.
inline std::vector<Rat> surrogate_caps(const std::vector<Rat>& cost) {
  require(!cost.empty(), "surrogate_caps: no costs");
  Rat cmax = cost[0];
  for (const Rat& c : cost) {
    require(c >= 0, "surrogate_caps: negative cost");
    cmax = std::max(cmax, c);
  }
  std::vector<Rat> s;
  for (const Rat& c : cost) s.push_back(Rat(1) + cmax - c);
  return s;
}

struct BudgetComponentSolution {
  std::vector<int> S;
  Assignment assign;
  Rat relax_cost;  // cheapest fractional opening cost over every feasible k
  Rat open_cost;   // cost of S; never exceeds relax_cost
  long long k = 0;
  ReduceResult detail;
};

// One connected component of the budgeted variant: find the cheapest feasible
// relaxation, round it under the surrogate capacities, then re-verify the
// result against the true (uniform) capacities and assign within hop 9.
inline BudgetComponentSolution solve_budget_component(const ThresholdGraph& g,
                                                      const std::vector<Rat>& L,
                                                      const std::vector<Rat>& cost) {
  require((int)L.size() == g.n && (int)cost.size() == g.n, "solve_budget_component: size mismatch");
  for (int v = 0; v < g.n; ++v)
    require(L[v] == L[0], "solve_budget_component: capacities must be uniform");
  auto mc = min_cost_for_component(g, L, cost);
  require(mc.has_value(), "solve_budget_component called on an uncoverable component");
  BudgetComponentSolution bs;
  bs.relax_cost = mc->cost;
  bs.k = mc->k;
  bs.detail = reduce_and_round(g, surrogate_caps(cost), mc->sol);
  bs.S = bs.detail.S;
  bs.open_cost = Rat(0);
  for (int v : bs.S) bs.open_cost += cost[v];
  require(bs.open_cost <= bs.relax_cost, "budget rounding raised the opening cost");
  std::vector<Rat> yS(g.n, Rat(0));
  for (int v : bs.S) yS[v] = Rat(1);
  auto ver = verify_transfer(g, L, mc->sol.y, yS, 8);
  require(ver.ok, "budget rounding is not a distance-8 transfer under true capacities: " +
                      ver.reason);
  bs.assign = extract_assignment(g, L, bs.S, 8);
  return bs;
}

}  // namespace capkc
