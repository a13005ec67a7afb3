#pragma once

// Reduction from a fractional opening on a connected graph to an integral
// one, at distance 2*link + 2, in three verified phases. The plain solver
// uses hop-3 cluster links (distance 8); the supplier variant reuses the same
// engine with hop-4 links (distance 10).
//
// Clustering: grow a set of midpoints, each new one at hop exactly 3 from the
// current set, linked to a midpoint at hop exactly 3; every vertex joins its
// nearest midpoint. This yields (asserted): tree links at hop exactly 3,
// closed neighborhoods contained in their own cluster, members within hop 2.
//
// Each cluster gets an auxiliary vertex wired to the midpoint's closed
// neighborhood, with the capacity of the cluster delegate (the neighborhood's
// capacity maximum). Auxiliaries sit metrically "at" their midpoint
// (asserted: aux-aux hops equal midpoint hops, aux hops from other vertices
// equal midpoint hops).
//
// Phase 1 aggregates one unit of opening onto each auxiliary, drawing the
// delegate first (emptying it), then neighbors by descending capacity — every
// move is one hop toward equal-or-larger capacity, a distance-1 transfer.
// Phase 2 rounds the tree of auxiliaries (internal, opening 1) and leftover
// fractional vertices (leaves): tree rounding moves mass at most 2 tree
// edges, and every tree edge spans at most `link` graph hops, so the result
// is a distance-2*link transfer. Phase 3 slides each opened auxiliary to its
// delegate, one hop at equal capacity. Composition: distance 2*link + 2,
// verified per phase and end to end.

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "capkc/errors.hpp"
#include "capkc/instance.hpp"
#include "capkc/lp.hpp"
#include "capkc/rational.hpp"
#include "capkc/transfer.hpp"
#include "capkc/treealg.hpp"

namespace capkc {

struct ClusterTree {
  std::vector<int> midpoints;   // vertex ids in creation order; [0] is the root
  std::vector<int> parent_pos;  // per midpoint position: parent position, -1 at root
  std::vector<int> cluster_of;  // per vertex: position of its midpoint
  std::vector<int> delegate;    // per position: max-capacity vertex of the closed neighborhood
};

inline ClusterTree cluster(const ThresholdGraph& g, const std::vector<Rat>& L) {
  require(g.n >= 1 && (int)L.size() == g.n, "cluster: bad input");
  for (int v = 0; v < g.n; ++v)
    require(g.hop[0][v] >= 0, "cluster: graph not connected");

  ClusterTree ct;
  std::vector<int> dist(g.n);  // hop distance to the midpoint set
  auto add_midpoint = [&](int v, int parent) {
    ct.midpoints.push_back(v);
    ct.parent_pos.push_back(parent);
    for (int u = 0; u < g.n; ++u)
      dist[u] = ct.midpoints.size() == 1 ? g.hop[v][u] : std::min(dist[u], g.hop[v][u]);
  };
  add_midpoint(0, -1);
  for (;;) {
    int next = -1;
    for (int v = 0; v < g.n && next < 0; ++v)
      if (dist[v] == 3) next = v;
    if (next < 0) {
      for (int v = 0; v < g.n; ++v) require(dist[v] <= 2, "cluster: vertex beyond hop 2 remains");
      break;
    }
    int parent = -1;
    for (std::size_t i = 0; i < ct.midpoints.size() && parent < 0; ++i)
      if (g.hop[ct.midpoints[i]][next] == 3) parent = (int)i;
    require(parent >= 0, "cluster: no hop-3 parent for new midpoint");
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

  // The three clustering properties, machine-checked on every output.
  for (std::size_t i = 0; i < ct.midpoints.size(); ++i) {
    if (ct.parent_pos[i] >= 0)
      require(g.hop[ct.midpoints[i]][ct.midpoints[ct.parent_pos[i]]] == 3,
              "cluster: tree link not at hop 3");
    for (int u : g.neighbors_plus(ct.midpoints[i]))
      require(ct.cluster_of[u] == (int)i, "cluster: closed neighborhood leaks");
  }
  for (int v = 0; v < g.n; ++v)
    require(g.hop[ct.midpoints[ct.cluster_of[v]]][v] <= 2, "cluster: member beyond hop 2");
  return ct;
}

struct AugmentedGraph {
  ThresholdGraph g;     // original vertices 0..n0-1, auxiliaries appended
  std::vector<Rat> L;
  int n0 = 0;
  std::vector<int> aux;  // per midpoint position: auxiliary vertex id
};

inline AugmentedGraph build_augmented(const ThresholdGraph& g, const std::vector<Rat>& L,
                                      const ClusterTree& ct) {
  AugmentedGraph ag;
  ag.n0 = g.n;
  int m = (int)ct.midpoints.size();
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u])
      if (u < v) edges.emplace_back(u, v);
  for (int i = 0; i < m; ++i) {
    int a = g.n + i;
    ag.aux.push_back(a);
    for (int u : g.neighbors_plus(ct.midpoints[i])) edges.emplace_back(u, a);
  }
  ag.g = ThresholdGraph(g.n + m, edges, g.tau);
  ag.L = L;
  for (int i = 0; i < m; ++i) ag.L.push_back(L[ct.delegate[i]]);

  // Auxiliaries are metrically indistinguishable from their midpoints.
  for (int i = 0; i < m; ++i) {
    int v = ct.midpoints[i], a = ag.aux[i];
    require(ag.g.hop[v][a] == 1, "augmented: midpoint not adjacent to its auxiliary");
    for (int u = 0; u < g.n; ++u)
      if (u != v)
        require(ag.g.hop[u][a] == g.hop[u][v], "augmented: auxiliary shifts vertex distances");
    for (int j = 0; j < i; ++j)
      require(ag.g.hop[ag.aux[j]][a] == g.hop[ct.midpoints[j]][v],
              "augmented: auxiliary pair distance differs from midpoint distance");
  }
  return ag;
}

struct ReduceResult {
  std::vector<int> S;  // open set on the original vertex ids
  ClusterTree clusters;
  AugmentedGraph aug;
  // Opening vectors on augmented ids, before/after each phase.
  std::vector<Rat> y_start, y_phase1, y_phase2, y_phase3;
  TreeInstance tree;
  std::vector<int> tree_nodes;  // tree node -> augmented vertex id
};

namespace detail {

// The shared three-phase engine. `link` bounds the graph hops spanned by a
// cluster tree link; leaf attachments must stay within it too (checked).
template <typename Rounder>
ReduceResult run_phases(const ThresholdGraph& g, const std::vector<Rat>& L, const LpSolution& lp,
                        ClusterTree ct, int link, Rounder&& tree_rounder) {
  ReduceResult res;
  res.clusters = std::move(ct);
  res.aug = build_augmented(g, L, res.clusters);
  const AugmentedGraph& ag = res.aug;
  int m = (int)res.clusters.midpoints.size();

  res.y_start.assign(ag.g.n, Rat(0));
  for (int v = 0; v < g.n; ++v) res.y_start[v] = lp.y[v];

  // Phase 1: each auxiliary absorbs exactly one unit from its midpoint's
  // closed neighborhood, delegate first, then by capacity (ties by index).
  std::vector<Rat> y1 = res.y_start;
  for (int i = 0; i < m; ++i) {
    int mid = res.clusters.midpoints[i], del = res.clusters.delegate[i], a = ag.aux[i];
    std::vector<int> pool = g.neighbors_plus(mid);
    std::stable_sort(pool.begin(), pool.end(), [&](int x, int y) { return L[x] > L[y]; });
    pool.erase(std::remove(pool.begin(), pool.end(), del), pool.end());
    pool.insert(pool.begin(), del);
    for (int u : pool) {
      if (y1[a] == 1) break;
      Rat room = Rat(1) - y1[a];
      Rat delta = std::min(y1[u], room);
      y1[u] -= delta;
      y1[a] += delta;
    }
    require(y1[a] == 1, "phase 1: neighborhood mass below 1 despite coverage");
    require(y1[del] == 0, "phase 1: delegate not drained");
  }
  res.y_phase1 = y1;
  {
    auto v = verify_transfer(ag.g, ag.L, res.y_start, y1, 1);
    require(v.ok, "phase 1 is not a distance-1 transfer: " + v.reason);
  }

  // Phase 2: tree of auxiliaries (internal) and residual vertices (leaves).
  std::vector<int> node_of(ag.g.n, -1);
  for (int i = 0; i < m; ++i) {
    node_of[ag.aux[i]] = (int)res.tree_nodes.size();
    res.tree_nodes.push_back(ag.aux[i]);
  }
  for (int v = 0; v < g.n; ++v)
    if (y1[v] > 0) {
      node_of[v] = (int)res.tree_nodes.size();
      res.tree_nodes.push_back(v);
    }
  TreeInstance& t = res.tree;
  for (int x : res.tree_nodes) {
    t.L.push_back(ag.L[x]);
    t.y.push_back(y1[x]);
  }
  t.parent.assign(res.tree_nodes.size(), -1);
  for (int i = 0; i < m; ++i)
    if (res.clusters.parent_pos[i] >= 0)
      t.parent[node_of[ag.aux[i]]] = node_of[ag.aux[res.clusters.parent_pos[i]]];
  for (int v = 0; v < g.n; ++v)
    if (y1[v] > 0) t.parent[node_of[v]] = node_of[ag.aux[res.clusters.cluster_of[v]]];
  for (std::size_t x = 0; x < res.tree_nodes.size(); ++x)
    if (t.parent[x] != -1) {
      int hop = ag.g.hop[res.tree_nodes[x]][res.tree_nodes[t.parent[x]]];
      require(hop >= 1 && hop <= link,
              "phase 2: tree edge spans more than " + std::to_string(link) + " hops");
    }

  std::vector<int> opened_nodes = tree_rounder(t);
  std::vector<Rat> y2(ag.g.n, Rat(0));
  for (int x : opened_nodes) y2[res.tree_nodes[x]] = Rat(1);
  res.y_phase2 = y2;
  {
    auto v = verify_transfer(ag.g, ag.L, y1, y2, 2 * link);
    require(v.ok,
            "phase 2 is not a distance-" + std::to_string(2 * link) + " transfer: " + v.reason);
  }

  // Phase 3: slide opened auxiliaries onto their delegates (adjacent, equal
  // capacity). Delegates were drained in phase 1, so no collision is possible.
  std::vector<Rat> y3 = y2;
  for (int i = 0; i < m; ++i)
    if (y3[ag.aux[i]] == 1) {
      y3[ag.aux[i]] = 0;
      require(y3[res.clusters.delegate[i]] == 0, "phase 3: delegate already open");
      y3[res.clusters.delegate[i]] = 1;
    }
  res.y_phase3 = y3;
  int total = 2 * link + 2;
  {
    auto v = verify_transfer(ag.g, ag.L, y2, y3, 1);
    require(v.ok, "phase 3 is not a distance-1 transfer: " + v.reason);
    auto full = verify_transfer(ag.g, ag.L, res.y_start, y3, total);
    require(full.ok, "composed rounding is not a distance-" + std::to_string(total) +
                         " transfer: " + full.reason);
  }

  for (int v = 0; v < g.n; ++v) {
    require(y3[v] == 0 || y3[v] == 1, "rounding left fractional mass");
    if (y3[v] == 1) res.S.push_back(v);
  }
  for (int i = 0; i < m; ++i) require(y3[ag.aux[i]] == 0, "auxiliary still open after phase 3");
  // Re-verify on the original graph, against the LP opening.
  std::vector<Rat> yS(g.n, Rat(0));
  for (int v : res.S) yS[v] = Rat(1);
  auto fin = verify_transfer(g, L, lp.y, yS, total);
  require(fin.ok, "projected rounding fails distance-" + std::to_string(total) +
                      " verification: " + fin.reason);
  return res;
}

}  // namespace detail

template <typename Rounder>
ReduceResult reduce_and_round(const ThresholdGraph& g, const std::vector<Rat>& L,
                              const LpSolution& lp, Rounder&& tree_rounder) {
  return detail::run_phases(g, L, lp, cluster(g, L), 3, std::forward<Rounder>(tree_rounder));
}

inline ReduceResult reduce_and_round(const ThresholdGraph& g, const std::vector<Rat>& L,
                                     const LpSolution& lp) {
  return reduce_and_round(g, L, lp, [](const TreeInstance& t) { return round_tree(t); });
}

struct ComponentSolution {
  std::vector<int> S;
  Assignment assign;
  ReduceResult detail;
};

// Full treatment of one connected component at a given opening count: solve
// the relaxation, round it, and extract a hop <= 9 assignment.
inline ComponentSolution solve_component(const ThresholdGraph& g, const std::vector<Rat>& L,
                                         long long k) {
  auto lp = solve_boxed(g, L, k, all_vertices(g.n), all_vertices(g.n));
  require(lp.has_value(), "solve_component called with an infeasible opening count");
  ComponentSolution cs;
  cs.detail = reduce_and_round(g, L, *lp);
  cs.S = cs.detail.S;
  cs.assign = extract_assignment(g, L, cs.S, 8);
  return cs;
}

}  // namespace capkc
