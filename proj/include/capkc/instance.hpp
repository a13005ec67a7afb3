#pragma once

// Core data model: metric instances, threshold graphs G_{<=tau} with hop
// distances, and connected components. Everything downstream works on these.

#include <algorithm>
#include <optional>
#include <queue>
#include <vector>

#include "capkc/errors.hpp"
#include "capkc/rational.hpp"

namespace capkc {

struct MetricInstance {
  int n = 0;
  long long k = 1;
  std::vector<std::vector<Rat>> dist;  // symmetric, zero diagonal, triangle inequality
  std::vector<long long> cap;          // per-vertex capacity, nonnegative integer
  std::vector<Rat> cost;               // empty unless budgeted variant
  std::optional<Rat> budget;
  std::vector<char> facility;          // empty unless supplier variant; 1 = facility

  bool has_cost() const { return !cost.empty(); }
  bool has_facility() const { return !facility.empty(); }

  // Structural validity. The parser reports the same conditions with line
  // numbers; this is the safety net for programmatically built instances.
  void validate() const {
    if (n < 1) throw ParseError("instance needs at least one vertex");
    if (k < 1) throw ParseError("K must be positive");
    if ((int)dist.size() != n) throw ParseError("distance matrix row count != N");
    for (int i = 0; i < n; ++i)
      if ((int)dist[i].size() != n) throw ParseError("distance matrix is not square");
    if ((int)cap.size() != n) throw ParseError("CAP entry count != N");
    for (int i = 0; i < n; ++i) {
      if (cap[i] < 0) throw ParseError("capacities must be nonnegative");
      if (dist[i][i] != 0) throw ParseError("nonzero diagonal distance");
      for (int j = 0; j < n; ++j) {
        if (dist[i][j] < 0) throw ParseError("negative distance");
        if (dist[i][j] != dist[j][i]) throw ParseError("distance matrix not symmetric");
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          if (dist[i][j] + dist[j][l] < dist[i][l])
            throw ParseError("triangle inequality violated");
    if (has_cost() != budget.has_value())
      throw ParseError("COST and BUDGET must appear together");
    if (has_cost()) {
      if ((int)cost.size() != n) throw ParseError("COST entry count != N");
      for (const Rat& c : cost)
        if (c < 0) throw ParseError("costs must be nonnegative");
      if (*budget < 0) throw ParseError("BUDGET must be nonnegative");
    }
    if (has_facility()) {
      if ((int)facility.size() != n) throw ParseError("FACILITY entry count != N");
      bool any = false;
      for (int v = 0; v < n; ++v) {
        if (facility[v]) any = true;
        // Clients carry no capacity or cost by convention.
        else if (cap[v] != 0)
          throw ParseError("client vertices must have capacity 0");
        else if (has_cost() && cost[v] != 0)
          throw ParseError("client vertices must have cost 0");
      }
      if (!any) throw ParseError("FACILITY must mark at least one facility");
    } else {
      // Plain/budget/zero-L variants serve every vertex: without at least n
      // units of capacity no assignment exists at any threshold.
      Int total = 0;
      for (long long c : cap) total += static_cast<long>(c);
      if (total < n) throw ParseError("total capacity below vertex count");
    }
  }
};

// Unweighted graph with an implicit self-loop on every vertex (closed
// neighborhoods via neighbors_plus), plus the all-pairs hop-distance matrix.
struct ThresholdGraph {
  int n = 0;
  Rat tau;
  std::vector<std::vector<int>> adj;  // sorted, no self-loops stored
  std::vector<std::vector<int>> hop;  // -1 where unreachable

  ThresholdGraph() = default;
  ThresholdGraph(int n_, std::vector<std::pair<int, int>> edges, Rat tau_ = Rat(0))
      : n(n_), tau(std::move(tau_)), adj(n_) {
    for (auto [u, v] : edges) {
      if (u == v) continue;
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    for (auto& a : adj) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    compute_hops();
  }

  bool adjacent(int u, int v) const {
    return u != v && std::binary_search(adj[u].begin(), adj[u].end(), v);
  }

  // N+(v): neighbors plus the vertex itself, ascending.
  std::vector<int> neighbors_plus(int v) const {
    std::vector<int> r = adj[v];
    r.insert(std::lower_bound(r.begin(), r.end(), v), v);
    return r;
  }

  // hop distance from a vertex to the nearest member of a set; -1 if none reachable.
  int hop_to_set(int v, const std::vector<int>& set) const {
    int best = -1;
    for (int u : set) {
      int h = hop[v][u];
      if (h >= 0 && (best < 0 || h < best)) best = h;
    }
    return best;
  }

 private:
  void compute_hops() {
    hop.assign(n, std::vector<int>(n, -1));
    std::vector<int> q;
    for (int s = 0; s < n; ++s) {
      auto& d = hop[s];
      d[s] = 0;
      q.assign(1, s);
      for (std::size_t head = 0; head < q.size(); ++head) {
        int u = q[head];
        for (int v : adj[u])
          if (d[v] < 0) {
            d[v] = d[u] + 1;
            q.push_back(v);
          }
      }
    }
  }
};

enum class GraphKind {
  All,             // edge for every pair with c(u,v) <= tau
  ClientFacility,  // supplier variant: edges only between a client and a facility
};

inline ThresholdGraph build_threshold_graph(const MetricInstance& inst, const Rat& tau,
                                            GraphKind kind = GraphKind::All) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < inst.n; ++u)
    for (int v = u + 1; v < inst.n; ++v) {
      if (inst.dist[u][v] > tau) continue;
      if (kind == GraphKind::ClientFacility &&
          (!inst.has_facility() || inst.facility[u] == inst.facility[v]))
        continue;
      edges.emplace_back(u, v);
    }
  return ThresholdGraph(inst.n, std::move(edges), tau);
}

// Sorted, deduplicated pairwise distances including 0: the only thresholds a
// search ever needs to probe, since the optimum radius is a pairwise distance.
inline std::vector<Rat> candidate_thresholds(const MetricInstance& inst) {
  std::vector<Rat> vals{Rat(0)};
  for (int u = 0; u < inst.n; ++u)
    for (int v = u + 1; v < inst.n; ++v) vals.push_back(inst.dist[u][v]);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

// A connected component re-indexed to 0..size-1 with its induced graph;
// verts maps local index -> original vertex.
struct Component {
  std::vector<int> verts;
  ThresholdGraph graph;
};

inline std::vector<Component> components(const ThresholdGraph& g) {
  std::vector<int> comp(g.n, -1);
  int nc = 0;
  for (int s = 0; s < g.n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = nc;
    std::vector<int> q{s};
    for (std::size_t head = 0; head < q.size(); ++head)
      for (int v : g.adj[q[head]])
        if (comp[v] < 0) {
          comp[v] = nc;
          q.push_back(v);
        }
    ++nc;
  }
  // Components ordered by smallest original vertex, which is the order of
  // first appearance when scanning vertices ascending.
  std::vector<Component> out(nc);
  std::vector<int> local(g.n, -1);
  for (int v = 0; v < g.n; ++v) {
    local[v] = (int)out[comp[v]].verts.size();
    out[comp[v]].verts.push_back(v);
  }
  for (int c = 0; c < nc; ++c) {
    std::vector<std::pair<int, int>> edges;
    for (int v : out[c].verts)
      for (int u : g.adj[v])
        if (v < u) edges.emplace_back(local[v], local[u]);
    out[c].graph = ThresholdGraph((int)out[c].verts.size(), std::move(edges), g.tau);
  }
  return out;
}

enum class Variant { Auto, Center, ZeroL, Supplier, Budget };

// Dispatch order: the presence of costs or facility flags is explicit, the
// zero/L capacity pattern is structural, everything else is plain.
inline Variant detect_variant(const MetricInstance& inst) {
  if (inst.has_cost()) return Variant::Budget;
  if (inst.has_facility()) return Variant::Supplier;
  long long nonzero = -1;
  bool two_level = true, has_zero = false;
  for (long long c : inst.cap) {
    if (c == 0) {
      has_zero = true;
    } else if (nonzero == -1) {
      nonzero = c;
    } else if (c != nonzero) {
      two_level = false;
    }
  }
  if (two_level && has_zero && nonzero > 0) return Variant::ZeroL;
  return Variant::Center;
}

inline std::vector<Rat> rat_caps(const MetricInstance& inst) {
  std::vector<Rat> L;
  for (long long c : inst.cap) L.push_back(Rat((long)c));
  return L;
}

}  // namespace capkc
