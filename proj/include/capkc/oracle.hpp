#pragma once

// Exhaustive reference implementations. Everything here is deliberately slow
// and simple: these functions define ground truth for the polynomial
// algorithms, so they must be independently convincing. Guards reject inputs
// large enough to make exhaustion meaningless.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "capkc/errors.hpp"
#include "capkc/flow.hpp"
#include "capkc/instance.hpp"
#include "capkc/rational.hpp"
#include "capkc/rng.hpp"

namespace capkc {

// Searches all 2^n - 1 nonempty subsets U for a violation of the capacity
// dominance condition: sum of L(v)*y2[v] over vertices within hop r of U
// must cover sum of L(u)*y1[u] over U. Returns a violating U, or nullopt.
inline std::optional<std::vector<int>> exhaustive_transfer_violation(
    const ThresholdGraph& g, const std::vector<Rat>& L, const std::vector<Rat>& y1,
    const std::vector<Rat>& y2, int r) {
  if (g.n > 15) throw TooLargeError("exhaustive transfer check limited to n <= 15");
  require((int)L.size() == g.n && (int)y1.size() == g.n && (int)y2.size() == g.n,
          "exhaustive transfer check: size mismatch");
  std::vector<unsigned> near(g.n, 0);  // near[v]: vertices u with hop(u,v) <= r
  for (int v = 0; v < g.n; ++v)
    for (int u = 0; u < g.n; ++u)
      if (g.hop[u][v] >= 0 && g.hop[u][v] <= r) near[v] |= 1u << u;
  std::vector<Rat> supply(g.n), demand(g.n);
  for (int v = 0; v < g.n; ++v) {
    supply[v] = L[v] * y1[v];
    demand[v] = L[v] * y2[v];
  }
  for (unsigned mask = 1; mask < (1u << g.n); ++mask) {
    Rat need(0), have(0);
    for (int v = 0; v < g.n; ++v) {
      if (mask & (1u << v)) need += supply[v];
      if (near[v] & mask) have += demand[v];
    }
    if (have < need) {
      std::vector<int> witness;
      for (int v = 0; v < g.n; ++v)
        if (mask & (1u << v)) witness.push_back(v);
      return witness;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Exact optimum by brute force: smallest radius at which some admissible open
// set admits a capacity-respecting assignment of every served vertex.

struct OracleResult {
  Rat opt_radius;
  std::vector<int> opens;
  std::vector<int> sigma;  // per vertex; -1 where not served
};

namespace detail {

struct OracleSetup {
  std::vector<char> served, openable;
  bool budget_mode = false;
  Rat budget;
  long long kmax = 0;  // max open-set size (budget mode: number of openable)
};

inline OracleSetup oracle_setup(const MetricInstance& inst, Variant variant) {
  if (variant == Variant::Auto) variant = detect_variant(inst);
  OracleSetup s;
  s.served.assign(inst.n, 1);
  s.openable.assign(inst.n, 1);
  if (variant == Variant::Supplier) {
    for (int v = 0; v < inst.n; ++v) {
      s.served[v] = !inst.facility[v];
      s.openable[v] = inst.facility[v] != 0;
    }
  }
  long long nopen = 0;
  for (char o : s.openable) nopen += o;
  if (variant == Variant::Budget) {
    s.budget_mode = true;
    s.budget = *inst.budget;
    s.kmax = nopen;  // the opening count is driven by the budget alone
    if (nopen > 23) throw TooLargeError("oracle: too many openable vertices for budget mode");
  } else {
    s.kmax = std::min<long long>(inst.k, nopen);
    // Subset-count guard: sum over sizes 1..kmax of C(nopen, size).
    unsigned long long total = 0;
    for (long long sz = 1; sz <= s.kmax; ++sz) {
      unsigned long long c = 1;
      for (long long i = 0; i < sz; ++i) {
        c = c * (unsigned long long)(nopen - i) / (unsigned long long)(i + 1);
        if (c > 100000000ULL) break;
      }
      total += c;
      if (total > 10000000ULL) throw TooLargeError("oracle: subset count exceeds 10^7");
    }
  }
  return s;
}

// Capacity-respecting assignment of all served vertices to S within radius
// rho; returns per-vertex center choices or nullopt.
inline std::optional<std::vector<int>> oracle_assign(const MetricInstance& inst,
                                                     const OracleSetup& s,
                                                     const std::vector<int>& S, const Rat& rho) {
  long nserved = 0;
  for (char x : s.served) nserved += x;
  FlowNetwork net(inst.n + (int)S.size() + 2);
  int src = 0, snk = inst.n + (int)S.size() + 1;
  std::vector<std::vector<std::pair<std::pair<int, int>, int>>> cand(inst.n);
  for (int v = 0; v < inst.n; ++v)
    if (s.served[v]) net.add_arc(src, 1 + v, Int(1));
  for (std::size_t i = 0; i < S.size(); ++i)
    net.add_arc(1 + inst.n + (int)i, snk, Int((long)inst.cap[S[i]]));
  for (int v = 0; v < inst.n; ++v) {
    if (!s.served[v]) continue;
    for (std::size_t i = 0; i < S.size(); ++i)
      if (inst.dist[v][S[i]] <= rho)
        cand[v].emplace_back(net.add_arc(1 + v, 1 + inst.n + (int)i, Int(1)), (int)i);
  }
  if (net.max_flow(src, snk) != Int(nserved)) return std::nullopt;
  std::vector<int> sigma(inst.n, -1);
  for (int v = 0; v < inst.n; ++v)
    for (const auto& [h, i] : cand[v])
      if (net.flow_on(h) == 1) sigma[v] = S[i];
  return sigma;
}

// Enumerates subsets of `openable` of exactly `size` in lexicographic order.
template <typename F>
void for_each_subset(const std::vector<int>& pool, long long size, F&& f) {
  std::vector<int> idx(size);
  std::function<bool(long long, int)> rec = [&](long long depth, int from) -> bool {
    if (depth == size) return f(idx);
    for (int i = from; i <= (int)pool.size() - (int)(size - depth); ++i) {
      idx[depth] = pool[i];
      if (rec(depth + 1, i + 1)) return true;
    }
    return false;
  };
  rec(0, 0);
}

inline std::vector<Rat> oracle_radii(const MetricInstance& inst, const OracleSetup& s) {
  std::vector<Rat> radii;
  for (int v = 0; v < inst.n; ++v)
    if (s.served[v])
      for (int u = 0; u < inst.n; ++u)
        if (s.openable[u]) radii.push_back(inst.dist[v][u]);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

inline bool oracle_admissible(const MetricInstance& inst, const OracleSetup& s,
                              const std::vector<int>& S) {
  if (!s.budget_mode) return true;
  Rat c(0);
  for (int v : S) c += inst.cost[v];
  return c <= s.budget;
}

}  // namespace detail

// Radii ascending, then subset sizes, then subsets: the first hit is optimal.
inline OracleResult exact_opt(const MetricInstance& inst, Variant variant = Variant::Auto) {
  detail::OracleSetup s = detail::oracle_setup(inst, variant);
  long nserved = 0;
  for (char x : s.served) nserved += x;
  if (nserved == 0) return {Rat(0), {}, std::vector<int>(inst.n, -1)};

  std::vector<int> pool;
  for (int v = 0; v < inst.n; ++v)
    if (s.openable[v]) pool.push_back(v);
  for (const Rat& rho : detail::oracle_radii(inst, s)) {
    OracleResult out;
    bool found = false;
    for (long long size = 1; size <= s.kmax && !found; ++size) {
      detail::for_each_subset(pool, size, [&](const std::vector<int>& S) {
        if (!detail::oracle_admissible(inst, s, S)) return false;
        auto sigma = detail::oracle_assign(inst, s, S, rho);
        if (!sigma) return false;
        out = {rho, S, *sigma};
        found = true;
        return true;
      });
    }
    if (found) {
      Rat attained(0);
      for (int v = 0; v < inst.n; ++v)
        if (s.served[v]) attained = std::max(attained, inst.dist[v][out.sigma[v]]);
      require(attained == rho, "oracle: optimum radius not attained by its witness");
      return out;
    }
  }
  throw InfeasibleError("no feasible solution at any radius");
}

// Independent ordering for cross-validation: per subset, binary-search its
// minimal feasible radius; take the overall minimum.
inline Rat exact_opt_alt(const MetricInstance& inst, Variant variant = Variant::Auto) {
  detail::OracleSetup s = detail::oracle_setup(inst, variant);
  long nserved = 0;
  for (char x : s.served) nserved += x;
  if (nserved == 0) return Rat(0);

  std::vector<int> pool;
  for (int v = 0; v < inst.n; ++v)
    if (s.openable[v]) pool.push_back(v);
  std::vector<Rat> radii = detail::oracle_radii(inst, s);
  std::optional<Rat> best;
  for (long long size = 1; size <= s.kmax; ++size) {
    detail::for_each_subset(pool, size, [&](const std::vector<int>& S) {
      if (!detail::oracle_admissible(inst, s, S)) return false;
      if (!detail::oracle_assign(inst, s, S, radii.back())) return false;
      // Feasibility is monotone in the radius for a fixed open set: find the
      // first feasible index with lo always infeasible and hi always feasible.
      int lo = -1, hi = (int)radii.size() - 1;
      while (hi - lo > 1) {
        int mid = lo + (hi - lo) / 2;
        (detail::oracle_assign(inst, s, S, radii[mid]) ? hi : lo) = mid;
      }
      if (!best || radii[hi] < *best) best = radii[hi];
      return false;  // keep scanning all subsets
    });
  }
  if (!best) throw InfeasibleError("no feasible solution at any radius");
  return *best;
}

// ---------------------------------------------------------------------------
// Instance generators. Deterministic in (kind, n, seed); every instance is
// re-validated before it is returned.

struct GenParams {
  int n = 8;
  Rat gap = Rat(100);  // the inter-group distance of gap2x3
};

namespace detail {

inline MetricInstance from_points(const std::vector<std::pair<long, long>>& pts) {
  MetricInstance inst;
  inst.n = (int)pts.size();
  inst.dist.assign(inst.n, std::vector<Rat>(inst.n, Rat(0)));
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j)
      inst.dist[i][j] = Rat(std::labs(pts[i].first - pts[j].first) +
                            std::labs(pts[i].second - pts[j].second));
  return inst;
}

inline MetricInstance from_hop_graph(Rng& rng, int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(perm[i], perm[i + 1]);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.chance(1, 4)) e.emplace_back(i, j);
  ThresholdGraph g(n, e, Rat(0));
  MetricInstance inst;
  inst.n = n;
  inst.dist.assign(n, std::vector<Rat>(n, Rat(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inst.dist[i][j] = Rat(g.hop[i][j]);
  return inst;
}

// Random capacities in 1..4 (so the total always covers n), then a k at
// least the smallest opening count whose capacities can cover n.
inline void finish_caps_and_k(MetricInstance& inst, Rng& rng) {
  for (int v = 0; v < inst.n; ++v) inst.cap.push_back(1 + (long long)rng.below(4));
  std::vector<long long> sorted = inst.cap;
  std::sort(sorted.rbegin(), sorted.rend());
  long long cum = 0, klb = 0;
  for (long long c : sorted) {
    if (cum >= inst.n) break;
    cum += c;
    ++klb;
  }
  inst.k = klb + (long long)rng.below(std::max(1, (int)(inst.n - klb + 1)));
}

}  // namespace detail

inline MetricInstance generate(const std::string& kind, const GenParams& p, std::uint64_t seed) {
  Rng rng(seed);
  MetricInstance inst;

  if (kind == "star6") {
    // Hub plus six leaves at distance 1, leaves pairwise 2; uniform capacity 2.
    inst.n = 7;
    inst.dist.assign(7, std::vector<Rat>(7, Rat(2)));
    for (int i = 0; i < 7; ++i) inst.dist[i][i] = Rat(0);
    for (int i = 1; i < 7; ++i) inst.dist[0][i] = inst.dist[i][0] = Rat(1);
    inst.cap.assign(7, 2);
    inst.k = 5;
  } else if (kind == "gap2x3") {
    if (p.gap <= 1) throw std::invalid_argument("gap2x3 needs gap > 1");
    inst.n = 6;
    inst.dist.assign(6, std::vector<Rat>(6, Rat(0)));
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (i != j) inst.dist[i][j] = (i / 3 == j / 3) ? Rat(1) : p.gap;
    inst.cap.assign(6, 2);
    inst.k = 3;
  } else if (kind == "grid_l1") {
    if (p.n < 1) throw std::invalid_argument("grid_l1 needs n >= 1");
    std::vector<std::pair<long, long>> pts;
    while ((int)pts.size() < p.n) {
      std::pair<long, long> q{(long)rng.below(3 * p.n), (long)rng.below(3 * p.n)};
      if (std::find(pts.begin(), pts.end(), q) == pts.end()) pts.push_back(q);
    }
    inst = detail::from_points(pts);
    detail::finish_caps_and_k(inst, rng);
  } else if (kind == "random_graph_hop") {
    if (p.n < 1) throw std::invalid_argument("random_graph_hop needs n >= 1");
    inst = detail::from_hop_graph(rng, p.n);
    detail::finish_caps_and_k(inst, rng);
  } else if (kind == "zerol_random") {
    if (p.n < 2) throw std::invalid_argument("zerol_random needs n >= 2");
    inst = detail::from_hop_graph(rng, p.n);
    long long L = 2 + (long long)rng.below(3);
    long long m = 0;
    for (int v = 0; v < p.n; ++v) {
      bool zero = rng.chance(1, 3);
      inst.cap.push_back(zero ? 0 : L);
      m += !zero;
    }
    for (int v = 0; m * L < p.n || m == (long long)p.n; ++v) {
      // Too little capacity (or no zero left): flip zeros up / one vertex down.
      if (m * L < p.n) {
        if (inst.cap[v] == 0) {
          inst.cap[v] = L;
          ++m;
        }
      } else {
        inst.cap[v] = 0;
        --m;
      }
    }
    long long klb = (p.n + L - 1) / L;
    inst.k = klb + (long long)rng.below(std::max(1, (int)(m - klb + 1)));
  } else if (kind == "supplier_random") {
    if (p.n < 2) throw std::invalid_argument("supplier_random needs n >= 2");
    inst = detail::from_hop_graph(rng, p.n);
    inst.facility.assign(p.n, 0);
    int nfac = 1 + (int)rng.below(p.n / 2);
    for (int i = 0; i < nfac; ++i) inst.facility[i] = 1;  // metric is random anyway
    long long clients = p.n - nfac;
    inst.cap.assign(p.n, 0);
    long long total = 0;
    for (int v = 0; v < nfac; ++v) {
      inst.cap[v] = 1 + (long long)rng.below(4);
      total += inst.cap[v];
    }
    if (total < clients) inst.cap[0] += clients - total;
    std::vector<long long> sorted(inst.cap.begin(), inst.cap.begin() + nfac);
    std::sort(sorted.rbegin(), sorted.rend());
    long long cum = 0, klb = 0;
    for (long long c : sorted) {
      if (cum >= clients) break;
      cum += c;
      ++klb;
    }
    klb = std::max(klb, 1LL);
    inst.k = klb + (long long)rng.below(std::max(1, (int)(nfac - klb + 1)));
  } else if (kind == "budget_random") {
    if (p.n < 1) throw std::invalid_argument("budget_random needs n >= 1");
    inst = detail::from_hop_graph(rng, p.n);
    long long L = 2 + (long long)rng.below(3);
    inst.cap.assign(p.n, L);
    Rat total_cost(0);
    for (int v = 0; v < p.n; ++v) {
      inst.cost.push_back(Rat(1 + (long)rng.below(9)));
      total_cost += inst.cost.back();
    }
    std::vector<Rat> sorted = inst.cost;
    std::sort(sorted.begin(), sorted.end());
    Rat base(0);
    for (long long i = 0; i < (p.n + L - 1) / L; ++i) base += sorted[i];
    inst.budget = base + total_cost / (long)(3 + rng.below(5));
    inst.k = p.n;  // present in the format; the budget drives the solve
  } else {
    throw std::invalid_argument("unknown generator kind '" + kind + "'");
  }

  inst.validate();
  return inst;
}

}  // namespace capkc
