#pragma once

// Distance-r transfer machinery. A vector y2 is a distance-r transfer of
// (g, L, y1) when (a) both carry the same total mass and (b) for every vertex
// set U, the capacity mass of y2 within hop r of U covers the capacity mass
// of y1 on U. Condition (b) over all 2^n subsets is equivalent — by max-flow
// min-cut over the transportation network — to one flow computation: supplies
// L(u)*y1[u], demands L(v)*y2[v], arcs for hop(u, v) <= r, all values scaled
// to integers by the common denominator. A failed check yields a violating U
// from the min cut.

#include <optional>
#include <string>
#include <vector>

#include "capkc/errors.hpp"
#include "capkc/flow.hpp"
#include "capkc/instance.hpp"
#include "capkc/rational.hpp"

namespace capkc {

struct TransferVerdict {
  bool ok = false;
  std::string reason;         // empty when ok
  std::vector<int> witness;   // violating U when condition (b) failed
};

inline TransferVerdict verify_transfer(const ThresholdGraph& g, const std::vector<Rat>& L,
                                       const std::vector<Rat>& y1, const std::vector<Rat>& y2,
                                       int r) {
  require((int)L.size() == g.n && (int)y1.size() == g.n && (int)y2.size() == g.n,
          "verify_transfer: size mismatch");
  require(r >= 0, "verify_transfer: negative radius");
  Rat tot1(0), tot2(0);
  for (int v = 0; v < g.n; ++v) {
    require(y1[v] >= 0 && y2[v] >= 0, "verify_transfer: negative mass");
    tot1 += y1[v];
    tot2 += y2[v];
  }
  if (tot1 != tot2)
    return {false, "total mass differs: " + rat_str(tot1) + " vs " + rat_str(tot2), {}};

  std::vector<Rat> supply(g.n), demand(g.n);
  std::vector<Rat> all;
  for (int v = 0; v < g.n; ++v) {
    supply[v] = L[v] * y1[v];
    demand[v] = L[v] * y2[v];
    all.push_back(supply[v]);
    all.push_back(demand[v]);
  }
  Int D = lcm_denominators(all);

  // Nodes: 0 = source, 1..n = supply copies, n+1..2n = demand copies, 2n+1 = sink.
  FlowNetwork net(2 * g.n + 2);
  int src = 0, snk = 2 * g.n + 1;
  Int total_supply(0);
  for (int v = 0; v < g.n; ++v) {
    Int s = scale_to_int(supply[v], D), d = scale_to_int(demand[v], D);
    total_supply += s;
    net.add_arc(src, 1 + v, s);
    net.add_arc(1 + g.n + v, snk, d);
  }
  Int inf = total_supply + 1;
  for (int u = 0; u < g.n; ++u)
    for (int v = 0; v < g.n; ++v)
      if (g.hop[u][v] >= 0 && g.hop[u][v] <= r) net.add_arc(1 + u, 1 + g.n + v, inf);

  if (net.max_flow(src, snk) == total_supply) return {true, "", {}};

  // Min cut: supply nodes still reachable from the source form a violating U
  // (all their demand reach stays on the source side, so it cannot cover them).
  std::vector<char> side = net.source_side(src);
  std::vector<int> witness;
  for (int v = 0; v < g.n; ++v)
    if (side[1 + v] && supply[v] > 0) witness.push_back(v);
  return {false, "subset condition violated", witness};
}

// Test-harness operation: given two verified transfer steps, asserts that
// their composition is a transfer at the summed radius.
inline void compose_check(const ThresholdGraph& g, const std::vector<Rat>& L,
                          const std::vector<Rat>& y1, const std::vector<Rat>& y2, int r12,
                          const std::vector<Rat>& y3, int r23) {
  require(verify_transfer(g, L, y1, y2, r12).ok, "compose_check: first step is not a transfer");
  require(verify_transfer(g, L, y2, y3, r23).ok, "compose_check: second step is not a transfer");
  require(verify_transfer(g, L, y1, y3, r12 + r23).ok,
          "compose_check: composition failed at summed radius");
}

struct Assignment {
  std::vector<int> sigma;        // per vertex: assigned center, -1 when not served
  std::vector<long long> load;   // per vertex: number of assignees (centers only)
  int radius = 0;                // max hop(v, sigma[v]) over served vertices
};

// Assigns every served vertex to an open center within hop r+1, respecting
// capacities, via bipartite flow (sink arcs encode center multiplicity).
// The caller guarantees S is an integral distance-r transfer of an
// LP-feasible opening; a failure here therefore flags an upstream bug.
inline Assignment extract_assignment(const ThresholdGraph& g, const std::vector<Rat>& L,
                                     const std::vector<int>& S, int r,
                                     const std::vector<char>* served_in = nullptr) {
  std::vector<char> served = served_in ? *served_in : std::vector<char>(g.n, 1);
  require((int)L.size() == g.n && (int)served.size() == g.n, "extract_assignment: size mismatch");
  {
    std::vector<char> seen(g.n, 0);
    for (int s : S) {
      require(s >= 0 && s < g.n, "extract_assignment: center out of range");
      require(!seen[s], "extract_assignment: duplicate center");
      seen[s] = 1;
    }
  }

  long long nserved = 0;
  for (char s : served) nserved += s;
  // Nodes: 0 = source, 1..n = vertices, n+1..n+|S| = centers, last = sink.
  FlowNetwork net(g.n + (int)S.size() + 2);
  int src = 0, snk = g.n + (int)S.size() + 1;
  using Handle = std::pair<int, int>;
  std::vector<std::vector<std::pair<Handle, int>>> cand(g.n);  // (arc handle, center index)
  for (int v = 0; v < g.n; ++v)
    if (served[v]) net.add_arc(src, 1 + v, Int(1));
  for (std::size_t i = 0; i < S.size(); ++i) {
    // Integer loads never exceed the capacity floor.
    net.add_arc(1 + g.n + (int)i, snk, floor_rat(L[S[i]]));
  }
  for (int v = 0; v < g.n; ++v) {
    if (!served[v]) continue;
    for (std::size_t i = 0; i < S.size(); ++i) {
      int hop = g.hop[v][S[i]];
      if (hop >= 0 && hop <= r + 1)
        cand[v].emplace_back(net.add_arc(1 + v, 1 + g.n + (int)i, Int(1)), (int)i);
    }
  }
  if (net.max_flow(src, snk) != Int((long)nserved)) {
    // Name the stranded vertices for the error message.
    std::vector<char> side = net.source_side(src);
    std::string stuck;
    for (int v = 0; v < g.n; ++v)
      if (served[v] && side[1 + v]) stuck += (stuck.empty() ? "" : ",") + std::to_string(v);
    throw VerificationError("no capacity-respecting assignment within hop " +
                            std::to_string(r + 1) + " (stranded vertices: " + stuck + ")");
  }

  Assignment a;
  a.sigma.assign(g.n, -1);
  a.load.assign(g.n, 0);
  for (int v = 0; v < g.n; ++v)
    for (const auto& [h, i] : cand[v])
      if (net.flow_on(h) == 1) a.sigma[v] = S[i];
  for (int v = 0; v < g.n; ++v) {
    if (!served[v]) continue;
    require(a.sigma[v] >= 0, "assignment missing a served vertex");
    int hop = g.hop[v][a.sigma[v]];
    require(hop >= 0 && hop <= r + 1, "assignment exceeds hop bound");
    a.radius = std::max(a.radius, hop);
    a.load[a.sigma[v]] += 1;
  }
  for (int v = 0; v < g.n; ++v)
    require(Rat((long)a.load[v]) <= L[v], "assignment overloads a center");
  return a;
}

}  // namespace capkc
