#pragma once

// Specialized rounding for two-level {0, L} capacities. Dropping edges whose
// endpoints both have capacity zero (neither could ever serve the other)
// leaves every edge touching a positive-capacity vertex, so cluster midpoints
// can sit at hop two instead of three. Openings then only move five hops and
// the final assignment stays within six, instead of the general eight/nine.

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "capkc/errors.hpp"
#include "capkc/instance.hpp"
#include "capkc/lp.hpp"
#include "capkc/transfer.hpp"

namespace capkc {

// Threshold graph for two-level instances: the usual distance filter, minus
// zero-zero edges. Any serving pair survives, so components still confine
// every assignment an optimal solution could make, but they split finer and
// the per-component certification becomes stronger.
inline ThresholdGraph zerol_threshold_graph(const MetricInstance& inst, const Rat& tau) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < inst.n; ++u)
    for (int v = u + 1; v < inst.n; ++v)
      if (inst.dist[u][v] <= tau && (inst.cap[u] > 0 || inst.cap[v] > 0))
        edges.emplace_back(u, v);
  return ThresholdGraph(inst.n, std::move(edges), tau);
}

// Clusters of a connected two-level component. Midpoints are chosen at hop
// exactly 2 from the allotted region; each cluster gets the positive-capacity
// closed neighborhood of its midpoint, plus (later) the leftover
// positive-capacity vertices at hop 1 of an original member.
struct ZerolClusters {
  std::vector<int> midpoint;              // creation order; [0] is the root
  std::vector<int> parent;                // cluster index; -1 for the root
  std::vector<int> anchor;                // parent-cluster member realizing the hop-2 link
  std::vector<int> agg;                   // positive-capacity member that aggregates one opening
  std::vector<std::vector<int>> members;  // disjoint, ascending
  std::vector<int> cluster_of;            // per vertex; -1 only for unallotted zero-cap vertices
  std::vector<int> late_anchor;           // per vertex: member it attached through; -1 otherwise

  int count() const { return (int)midpoint.size(); }
};

namespace detail {

// N+(v) restricted to positive capacities; ascending.
inline std::vector<int> pos_neighborhood(const ThresholdGraph& g, const std::vector<char>& pos,
                                         int v) {
  std::vector<int> r;
  for (int u : g.neighbors_plus(v))
    if (pos[u]) r.push_back(u);
  return r;
}

inline void check_zerol_clusters(const ThresholdGraph& g, const std::vector<char>& pos,
                                 const ZerolClusters& cl) {
  std::vector<char> early(g.n, 0);
  for (int c = 0; c < cl.count(); ++c) {
    int mid = cl.midpoint[c];
    early[mid] = 1;
    for (int u : pos_neighborhood(g, pos, mid)) early[u] = 1;
  }
  std::vector<int> seen(g.n, -1);
  for (int c = 0; c < cl.count(); ++c) {
    int mid = cl.midpoint[c];
    require(std::is_sorted(cl.members[c].begin(), cl.members[c].end()),
            "zerol cluster members not sorted");
    for (int u : cl.members[c]) {
      require(seen[u] < 0, "zerol clusters overlap");
      seen[u] = c;
      require(cl.cluster_of[u] == c, "zerol cluster map out of sync");
      require(g.hop[mid][u] >= 0 && g.hop[mid][u] <= 2, "zerol cluster member too far");
    }
    // Aggregation vertex lives in the positive closed neighborhood.
    require(pos[cl.agg[c]] && g.hop[mid][cl.agg[c]] <= 1, "zerol aggregation vertex misplaced");
    // Membership matches its closed-form description: the midpoint (when of
    // capacity zero), its positive neighborhood, and the late arrivals that
    // attached through that neighborhood.
    std::vector<int> expect = pos_neighborhood(g, pos, mid);
    if (!pos[mid]) expect.insert(std::lower_bound(expect.begin(), expect.end(), mid), mid);
    for (int w = 0; w < g.n; ++w)
      if (cl.late_anchor[w] >= 0 && cl.cluster_of[cl.late_anchor[w]] == c &&
          std::find(expect.begin(), expect.end(), w) == expect.end())
        expect.insert(std::lower_bound(expect.begin(), expect.end(), w), w);
    require(expect == cl.members[c], "zerol cluster membership mismatch");
    if (c == 0) {
      require(cl.parent[c] == -1 && cl.anchor[c] == -1, "zerol root cluster malformed");
      require(pos[mid], "zerol root midpoint lacks capacity");
    } else {
      int a = cl.anchor[c];
      require(cl.parent[c] >= 0 && cl.parent[c] < c, "zerol parent order broken");
      require(cl.cluster_of[a] == cl.parent[c], "zerol anchor outside parent cluster");
      require(pos[a] && early[a], "zerol anchor not an original positive member");
      require(g.hop[a][mid] == 2, "zerol anchor not at hop 2 from midpoint");
      // The aggregation vertex sits at hop 2 from the anchor via the
      // midpoint, or at hop 1 when a zero-capacity midpoint forced the
      // aggregation onto a shared neighbor.
      require(g.hop[a][cl.agg[c]] == (pos[mid] ? 2 : 1), "zerol anchor-aggregation hop wrong");
    }
  }
  for (int v = 0; v < g.n; ++v) {
    if (pos[v]) {
      require(cl.cluster_of[v] >= 0, "zerol positive vertex left unallotted");
    } else if (cl.cluster_of[v] >= 0) {
      require(cl.midpoint[cl.cluster_of[v]] == v, "zerol zero-cap vertex allotted as non-midpoint");
    }
    if (cl.late_anchor[v] >= 0) {
      int a = cl.late_anchor[v];
      require(pos[v] && pos[a] && early[a] && !early[v], "zerol late attachment malformed");
      require(g.hop[a][v] == 1, "zerol late attachment not adjacent");
      require(cl.cluster_of[v] == cl.cluster_of[a], "zerol late attachment crossed clusters");
    }
  }
}

}  // namespace detail

inline ZerolClusters zerol_cluster(const ThresholdGraph& g, const std::vector<Rat>& L) {
  require((int)L.size() == g.n, "zerol_cluster: capacity count mismatch");
  std::vector<char> pos(g.n, 0);
  int first = -1;
  for (int v = g.n - 1; v >= 0; --v)
    if ((pos[v] = L[v] > 0)) first = v;
  require(first >= 0, "zerol_cluster: no positive capacity in component");
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u])
      require(pos[u] || pos[v], "zerol_cluster: edge between two zero-capacity vertices");
  for (int v = 0; v < g.n; ++v)
    require(g.hop[first][v] >= 0, "zerol_cluster: graph not connected");

  ZerolClusters cl;
  cl.cluster_of.assign(g.n, -1);
  cl.late_anchor.assign(g.n, -1);
  std::vector<int> dist(g.n, -1);  // hop to the allotted region

  auto create = [&](int v, int par, int anch, int agg) {
    int c = cl.count();
    cl.midpoint.push_back(v);
    cl.parent.push_back(par);
    cl.anchor.push_back(anch);
    cl.agg.push_back(agg);
    std::vector<int> mem = detail::pos_neighborhood(g, pos, v);
    if (!pos[v]) mem.insert(std::lower_bound(mem.begin(), mem.end(), v), v);
    for (int u : mem) {
      require(cl.cluster_of[u] < 0, "zerol_cluster: midpoint neighborhood already allotted");
      cl.cluster_of[u] = c;
      for (int w = 0; w < g.n; ++w)
        if (dist[w] < 0 || g.hop[u][w] < dist[w]) dist[w] = g.hop[u][w];
    }
    cl.members.push_back(std::move(mem));
  };

  create(first, -1, -1, first);
  for (;;) {
    bool far = false;
    for (int w = 0; w < g.n && !far; ++w) far = pos[w] && dist[w] >= 2;
    if (!far) break;
    int v = -1;
    for (int u = 0; u < g.n && v < 0; ++u)
      if (dist[u] == 2) v = u;
    require(v >= 0, "zerol_cluster: no hop-2 frontier despite distant capacity");
    int anch = -1;
    for (int u = 0; u < g.n && anch < 0; ++u)
      if (cl.cluster_of[u] >= 0 && g.hop[u][v] == 2) anch = u;
    require(anch >= 0, "zerol_cluster: frontier vertex lost its hop-2 witness");
    int agg = v;
    if (!pos[v]) {
      agg = -1;
      for (int z = 0; z < g.n && agg < 0; ++z)
        if (g.hop[v][z] == 1 && g.hop[anch][z] == 1) agg = z;
      require(agg >= 0, "zerol_cluster: no shared neighbor for zero-capacity midpoint");
      require(pos[agg], "zerol_cluster: shared neighbor of zero-capacity midpoint lacks capacity");
    }
    create(v, cl.cluster_of[anch], anch, agg);
  }

  // Whatever positive capacity remains sits at hop 1; attach it through the
  // adjacent original member (never a later arrival, so hops stay bounded).
  std::vector<char> early(g.n, 0);
  for (int v = 0; v < g.n; ++v)
    if (cl.cluster_of[v] >= 0) early[v] = 1;
  for (int w = 0; w < g.n; ++w) {
    if (!pos[w] || cl.cluster_of[w] >= 0) continue;
    require(dist[w] == 1, "zerol_cluster: unallotted capacity beyond hop 1");
    int u = -1;
    for (int z = 0; z < g.n && u < 0; ++z)
      if (early[z] && g.hop[z][w] == 1) u = z;
    require(u >= 0, "zerol_cluster: no original member adjacent to late vertex");
    require(pos[u], "zerol_cluster: late vertex attached through zero-capacity midpoint");
    int c = cl.cluster_of[u];
    cl.cluster_of[w] = c;
    cl.late_anchor[w] = u;
    cl.members[c].insert(std::lower_bound(cl.members[c].begin(), cl.members[c].end(), w), w);
  }

  detail::check_zerol_clusters(g, pos, cl);
  return cl;
}

namespace detail {

// Raises every target's opening to one, drawing lowest-index-first from
// `from1`, then `from2`, never from another target. Each individual movement
// is checked against the hop bound its call site guarantees.
inline void zerol_local_round(std::vector<Rat>& y, const ThresholdGraph& g,
                              const std::vector<int>& targets, const std::vector<int>& from1,
                              const std::vector<int>& from2, int max_hop,
                              const std::string& where) {
  auto is_target = [&](int w) {
    return std::find(targets.begin(), targets.end(), w) != targets.end();
  };
  for (int t : targets) {
    while (y[t] < 1) {
      int src = -1;
      for (const auto* pool : {&from1, &from2}) {
        for (int w : *pool)
          if (!is_target(w) && y[w] > 0) {
            src = w;
            break;
          }
        if (src >= 0) break;
      }
      require(src >= 0, where + ": no opening left to draw from");
      require(g.hop[src][t] >= 0 && g.hop[src][t] <= max_hop, where + ": movement exceeds bound");
      Rat room = Rat(1) - y[t];
      Rat delta = std::min(room, y[src]);
      y[t] += delta;
      y[src] -= delta;
    }
  }
}

}  // namespace detail

// Rounds an LP opening vector on a clustered two-level component to 0/1,
// certified afterwards as a distance-5 transfer. Bottom-up over the cluster
// tree: each cluster makes everything it owns integral except the aggregated
// opening it hands to its parent.
inline std::vector<Rat> zerol_round(const ThresholdGraph& g, const std::vector<Rat>& L,
                                    const ZerolClusters& cl, const std::vector<Rat>& y_in) {
  int n = g.n;
  require((int)L.size() == n && (int)y_in.size() == n, "zerol_round: size mismatch");
  std::vector<char> pos(n, 0);
  for (int v = 0; v < n; ++v) pos[v] = L[v] > 0;
  Rat total(0);
  for (int v = 0; v < n; ++v) {
    require(y_in[v] >= 0 && y_in[v] <= 1, "zerol_round: opening outside [0,1]");
    total += y_in[v];
  }
  require(is_integer(total), "zerol_round: total opening not integral");
  std::vector<Rat> y = y_in;

  // Park the zero-capacity mass. The movements below only ever touch
  // positive-capacity vertices, and the transfer condition weighs openings by
  // capacity, so this mass is a free reserve for the final integral top-up.
  Rat reserve(0);
  for (int v = 0; v < n; ++v)
    if (!pos[v]) {
      reserve += y[v];
      y[v] = 0;
    }

  // Initial aggregation: one full opening per cluster, gathered onto its
  // aggregation vertex from the midpoint's positive neighborhood (movements
  // of hop <= 2). Coverage of the midpoint makes that neighborhood carry
  // opening mass at least one.
  for (int c = 0; c < cl.count(); ++c) {
    std::vector<int> hood = detail::pos_neighborhood(g, pos, cl.midpoint[c]);
    Rat mass(0);
    for (int u : hood) mass += y[u];
    require(mass >= 1, "cluster " + std::to_string(c) + ": neighborhood opening below one");
    detail::zerol_local_round(y, g, {cl.agg[c]}, hood, {}, 2,
                              "cluster " + std::to_string(c) + " aggregation");
  }

  std::vector<std::vector<int>> children(cl.count());
  for (int c = 1; c < cl.count(); ++c) children[cl.parent[c]].push_back(c);

  std::function<void(int)> round_cluster = [&](int c) {
    for (int w : children[c]) round_cluster(w);
    std::string tag = "cluster " + std::to_string(c);
    int mid = cl.midpoint[c];
    require(y[cl.agg[c]] == 1, tag + ": aggregated opening not intact at entry");

    // Blocks around each positive neighbor u of the midpoint: u itself, the
    // aggregation vertices of children anchored at u, and the late arrivals
    // attached through u. The aggregation vertex's own block excludes it.
    std::vector<int> hood = detail::pos_neighborhood(g, pos, mid);
    std::vector<std::vector<int>> block(hood.size());
    std::vector<int> agg_block;  // flat copy of the aggregation vertex's block
    for (std::size_t i = 0; i < hood.size(); ++i) {
      int u = hood[i];
      if (u != cl.agg[c]) block[i].push_back(u);
      for (int w : children[c])
        if (cl.anchor[w] == u) block[i].push_back(cl.agg[w]);
      for (int w : cl.members[c])
        if (cl.late_anchor[w] == u) block[i].push_back(w);
      std::sort(block[i].begin(), block[i].end());
      for (int x : block[i]) {
        require(pos[x], tag + ": block member lacks capacity");
        require(g.hop[u][x] >= 0 && g.hop[u][x] <= 2, tag + ": block member beyond hop 2");
      }
      if (u == cl.agg[c]) agg_block = block[i];
    }

    // Per-block local rounding: open the floor of the block mass, preferring
    // to keep the pivot u itself closed so it can accommodate strays later.
    for (std::size_t i = 0; i < hood.size(); ++i) {
      int u = hood[i];
      Rat mass(0);
      for (int x : block[i]) mass += y[x];
      long want = (long)floor_rat(mass).get_si();
      std::vector<int> cands;
      for (int x : block[i])
        if (x != u) cands.push_back(x);
      std::stable_sort(cands.begin(), cands.end(), [&](int a, int b) { return y[a] > y[b]; });
      std::vector<int> opened;
      if (want > (long)cands.size()) {
        require(mass == (long)block[i].size(), tag + ": block overflow without full mass");
        opened = block[i];
      } else {
        opened.assign(cands.begin(), cands.begin() + want);
      }
      detail::zerol_local_round(y, g, opened, block[i], {}, 4, tag + " block rounding");
    }

    auto fractional_members = [&]() {
      std::vector<int> r;
      for (const auto& b : block)
        for (int x : b)
          if (!is_integer(y[x])) r.push_back(x);
      std::sort(r.begin(), r.end());
      return r;
    };

    // Sweep the leftovers into the still-closed pivots.
    std::vector<int> stray = fractional_members();
    Rat stray_mass(0);
    for (int x : stray) stray_mass += y[x];
    std::vector<int> sites;
    for (int u : hood)
      if (u != cl.agg[c] && y[u] < 1) sites.push_back(u);
    long want = (long)floor_rat(stray_mass).get_si();
    require(want <= (long)sites.size(), tag + ": not enough accommodation sites");
    std::vector<int> opened(sites.begin(), sites.begin() + want);
    std::vector<int> plain, deferred;  // strays outside/inside the aggregation block
    for (int x : stray)
      (std::binary_search(agg_block.begin(), agg_block.end(), x) ? deferred : plain).push_back(x);
    detail::zerol_local_round(y, g, opened, plain, deferred, 4, tag + " leftover sweep");

    // At most one fractional unit can remain; park it on one more site, or on
    // a leftover itself, borrowing the tail from the aggregated opening.
    std::vector<int> rest = fractional_members();
    if (!rest.empty()) {
      int star;
      if (want < (long)sites.size()) {
        star = sites[want];
      } else {
        // Every accommodation site is full, so the sweep exhausted all
        // leftovers outside the aggregation block.
        for (int x : rest)
          require(std::binary_search(agg_block.begin(), agg_block.end(), x),
                  tag + ": residual fraction outside the aggregation block");
        star = rest[0];
      }
      detail::zerol_local_round(y, g, {star}, rest, {cl.agg[c]}, 4, tag + " final opening");
    }
    for (const auto& b : block)
      for (int x : b) require(is_integer(y[x]), tag + ": block left non-integral");
  };
  round_cluster(0);

  // Everything except the root's aggregated opening is integral now; its
  // fraction plus the parked reserve add up to whole openings.
  int root_agg = cl.agg[0];
  for (int v = 0; v < n; ++v)
    if (pos[v] && v != root_agg)
      require(is_integer(y[v]), "zerol_round: stray fraction after root rounding");
  if (!is_integer(y[root_agg])) {
    Rat need = Rat(1) - y[root_agg];
    require(reserve >= need, "zerol_round: reserve too small for the root top-up");
    y[root_agg] = 1;
    reserve -= need;
  }
  require(is_integer(reserve), "zerol_round: reserve not integral after top-up");
  for (long fill = (long)reserve.get_num().get_si(); fill > 0; --fill) {
    int v = 0;
    while (v < n && y[v] != 0) ++v;
    require(v < n, "zerol_round: no closed vertex left for a filler opening");
    y[v] = 1;
  }

  Rat check(0);
  for (int v = 0; v < n; ++v) {
    require(y[v] == 0 || y[v] == 1, "zerol_round: non-integral output");
    check += y[v];
  }
  require(check == total, "zerol_round: total opening drifted");
  TransferVerdict verdict = verify_transfer(g, L, y_in, y, 5);
  require(verdict.ok, "zerol_round: distance-5 transfer check failed: " + verdict.reason);
  return y;
}

struct ZerolComponentSolution {
  std::vector<int> S;
  Assignment assign;
  ZerolClusters clusters;
};

// One connected two-level component at a given opening count: solve the
// relaxation, round it, and extract a hop <= 6 assignment.
inline ZerolComponentSolution solve_zerol_component(const ThresholdGraph& g,
                                                    const std::vector<Rat>& L, long long k) {
  auto lp = solve_boxed(g, L, k, all_vertices(g.n), all_vertices(g.n));
  require(lp.has_value(), "solve_zerol_component called with an infeasible opening count");
  ZerolComponentSolution cs;
  cs.clusters = zerol_cluster(g, L);
  std::vector<Rat> rounded = zerol_round(g, L, cs.clusters, lp->y);
  for (int v = 0; v < g.n; ++v)
    if (rounded[v] == 1) cs.S.push_back(v);
  cs.assign = extract_assignment(g, L, cs.S, 5);
  return cs;
}

}  // namespace capkc
