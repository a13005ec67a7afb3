#pragma once

// Optimal rounding of tree instances: given a tree whose internal nodes all
// carry opening 1 and whose leaves carry fractional openings summing to an
// integer overall, produce an open set S with |S| = total opening that is an
// integral distance-2 transfer under the tree's hop metric.
//
// The recursion peels one bottom block at a time. Let r be the lowest-index
// node all of whose children are leaves, and Y the total child opening.
//  - Y integer: open the Y+1 highest-capacity nodes of the block {r, children}
//    and delete the block.
//  - Y fractional: commit the floor(Y)+1 highest-capacity block nodes now,
//    and leave a deferred leaf in r's slot carrying the fractional remainder
//    frac(Y) with capacity min(L(r), L(runner-up)); if the recursion opens
//    that leaf, the block member it stood for — whichever of r / runner-up
//    was not committed — is opened instead.
// Every step asserts the block-local capacity-mass inequality (the committed
// capacities cover the block's y-weighted capacity mass, minus what the
// deferred leaf keeps); the remainder of the condition is exactly the
// recursive invocation, so the whole output is re-checkable by the flow
// verifier at distance 2.

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "capkc/errors.hpp"
#include "capkc/instance.hpp"
#include "capkc/rational.hpp"

namespace capkc {

class InvalidTreeInstance : public VerificationError {
 public:
  explicit InvalidTreeInstance(const std::string& msg) : VerificationError(msg) {}
};

struct TreeInstance {
  std::vector<int> parent;  // parent index, -1 at the root
  std::vector<Rat> L;       // nonnegative capacities
  std::vector<Rat> y;       // openings in (0,1]; 1 on every internal node

  int n() const { return (int)parent.size(); }

  void validate() const {
    if ((int)L.size() != n() || (int)y.size() != n())
      throw InvalidTreeInstance("tree instance: size mismatch");
    int roots = 0;
    std::vector<char> internal(n(), 0);
    for (int v = 0; v < n(); ++v) {
      if (parent[v] == -1) {
        ++roots;
      } else {
        if (parent[v] < 0 || parent[v] >= n() || parent[v] == v)
          throw InvalidTreeInstance("tree instance: parent out of range");
        internal[parent[v]] = 1;
      }
    }
    if (roots != 1) throw InvalidTreeInstance("tree instance: must have exactly one root");
    for (int v = 0; v < n(); ++v) {  // acyclicity: every walk up reaches the root
      int steps = 0;
      for (int u = v; u != -1; u = parent[u])
        if (++steps > n()) throw InvalidTreeInstance("tree instance: parent cycle");
    }
    Rat total(0);
    for (int v = 0; v < n(); ++v) {
      if (L[v] < 0) throw InvalidTreeInstance("tree instance: negative capacity");
      if (y[v] <= 0 || y[v] > 1) throw InvalidTreeInstance("tree instance: y outside (0,1]");
      if (internal[v] && y[v] != 1)
        throw InvalidTreeInstance("tree instance: internal node with y != 1");
      total += y[v];
    }
    if (!is_integer(total))
      throw InvalidTreeInstance("tree instance: total opening " + rat_str(total) +
                                " is not an integer");
  }
};

// The tree's hop metric as a graph, for transfer verification.
inline ThresholdGraph tree_graph(const TreeInstance& t) {
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < t.n(); ++v)
    if (t.parent[v] != -1) e.emplace_back(v, t.parent[v]);
  return ThresholdGraph(t.n(), e, Rat(1));
}

struct DeferredNode {
  int slot;        // index of r, whose slot the deferred leaf occupies
  int runner_up;   // the (floor(Y)+1)-th highest-capacity child
  Rat ybar;        // frac(Y), the deferred opening
  Rat Lbar;        // min(L(r), L(runner_up))
};

struct RoundStep {
  int r;
  std::vector<int> block;  // r first, then its children
  std::vector<Rat> block_y, block_L;
  Rat Y;  // total child opening
  bool fractional;
  std::vector<int> committed;
  std::optional<DeferredNode> deferred;
  int opened_instead = -1;  // node opened when the recursion chose the deferred leaf
};

// The block-local half of the step invariant: committed capacity covers the
// block's y-weighted capacity mass less the deferred remainder. (The other
// half of the subset condition is the recursion itself.) Returns (lhs, rhs).
inline std::pair<Rat, Rat> verify_step_invariant(const RoundStep& s) {
  Rat lhs(0), rhs(0);
  for (std::size_t i = 0; i < s.block.size(); ++i) lhs += s.block_y[i] * s.block_L[i];
  if (s.deferred) lhs -= s.deferred->ybar * s.deferred->Lbar;
  for (int c : s.committed) {
    auto it = std::find(s.block.begin(), s.block.end(), c);
    require(it != s.block.end(), "step check: committed node outside block");
    rhs += s.block_L[it - s.block.begin()];
  }
  require(lhs <= rhs, "step check failed at node " + std::to_string(s.r) + ": " + rat_str(lhs) +
                          " > " + rat_str(rhs));
  return {lhs, rhs};
}

namespace detail {

// Lowest-index alive node having at least one child, all of them leaves.
inline int bottom_internal(const std::vector<int>& parent, const std::vector<char>& alive) {
  int n = (int)parent.size();
  std::vector<char> has_child(n, 0), has_grandchild(n, 0);
  for (int v = 0; v < n; ++v)
    if (alive[v] && parent[v] != -1 && alive[parent[v]]) {
      has_child[parent[v]] = 1;
      int gp = parent[parent[v]];
      if (gp != -1 && alive[gp]) has_grandchild[gp] = 1;
    }
  for (int v = 0; v < n; ++v)
    if (alive[v] && has_child[v] && !has_grandchild[v]) return v;
  require(false, "no bottom internal node in a tree with >= 2 nodes");
  return -1;
}

}  // namespace detail

inline int pick_bottom_internal(const TreeInstance& t) {
  require(t.n() >= 2, "pick_bottom_internal needs >= 2 nodes");
  return detail::bottom_internal(t.parent, std::vector<char>(t.n(), 1));
}

inline std::vector<int> round_tree(const TreeInstance& t, std::vector<RoundStep>* trace = nullptr) {
  t.validate();
  int n = t.n();
  std::vector<int> parent = t.parent;
  std::vector<Rat> L = t.L, y = t.y;
  std::vector<char> alive(n, 1);

  Rat total(0);
  for (const Rat& v : t.y) total += v;

  std::vector<int> S;
  // Ranking used for every "highest capacity" choice: capacity descending,
  // index ascending. A deferred leaf keeps r's index.
  auto rank_less = [&](int a, int b) { return L[a] != L[b] ? L[a] > L[b] : a < b; };

  std::function<void()> recurse = [&]() {
    std::vector<int> live;
    for (int v = 0; v < n; ++v)
      if (alive[v]) live.push_back(v);
    if (live.empty()) return;
    if (live.size() == 1) {
      // Integral-sum bookkeeping forces a full opening here; in particular a
      // fractional deferred leaf can never be the last node standing.
      require(y[live[0]] == 1, "final node carries fractional opening");
      S.push_back(live[0]);
      return;
    }
    int r = detail::bottom_internal(parent, alive);
    std::vector<int> kids;
    for (int v = 0; v < n; ++v)
      if (alive[v] && parent[v] == r) kids.push_back(v);

    RoundStep step;
    step.r = r;
    step.block.push_back(r);
    for (int c : kids) step.block.push_back(c);
    for (int v : step.block) {
      step.block_y.push_back(y[v]);
      step.block_L.push_back(L[v]);
    }
    Rat Y(0);
    for (int c : kids) Y += y[c];
    step.Y = Y;
    step.fractional = !is_integer(Y);

    std::vector<int> order = step.block;
    std::sort(order.begin(), order.end(), rank_less);

    if (!step.fractional) {
      long m = (long)scale_to_int(Y, Int(1)).get_si() + 1;
      step.committed.assign(order.begin(), order.begin() + m);
      std::sort(step.committed.begin(), step.committed.end());
      verify_step_invariant(step);
      for (int v : step.block) alive[v] = 0;
      for (int v : step.committed) S.push_back(v);
      if (trace) trace->push_back(step);
      recurse();
      return;
    }

    Int fl = floor_rat(Y);
    long take = (long)fl.get_si();
    require((long)kids.size() >= take + 1, "fewer children than ceil(Y)");
    std::vector<int> kids_ranked = kids;
    std::sort(kids_ranked.begin(), kids_ranked.end(), rank_less);
    int runner = kids_ranked[take];

    // Commit either {top take children, r} or {top take+1 children},
    // whichever ranks higher overall; this equals the top take+1 of the block.
    std::vector<int> commit(kids_ranked.begin(), kids_ranked.begin() + take);
    int loser;
    if (rank_less(r, runner)) {
      commit.push_back(r);
      loser = runner;
    } else {
      commit.push_back(runner);
      loser = r;
    }
    std::sort(commit.begin(), commit.end());
    std::vector<int> top(order.begin(), order.begin() + take + 1);
    std::sort(top.begin(), top.end());
    require(commit == top, "explicit commit set differs from block top slice");

    DeferredNode p{r, runner, Y - Rat(fl), std::min(L[r], L[runner])};
    step.committed = commit;
    step.deferred = p;
    verify_step_invariant(step);

    for (int c : kids) alive[c] = 0;  // r's slot becomes the deferred leaf
    y[r] = p.ybar;
    L[r] = p.Lbar;
    for (int v : commit) S.push_back(v);
    if (trace) trace->push_back(step);

    std::size_t before = S.size();
    recurse();
    bool picked = false;
    for (std::size_t i = before; i < S.size(); ++i)
      if (S[i] == r) {
        S[i] = loser;
        picked = true;
      }
    if (picked && trace) {
      // The step record lives at its pre-recursion position; find it by r.
      for (auto& st : *trace)
        if (st.r == r && st.deferred && st.opened_instead == -1) st.opened_instead = loser;
    }
  };
  recurse();

  std::sort(S.begin(), S.end());
  require(std::adjacent_find(S.begin(), S.end()) == S.end(), "round_tree opened a node twice");
  require(Rat((long)S.size()) == total, "round_tree: |S| != total opening");
  return S;
}

// Small fixture format: line 1 = n, line 2 = parent array, line 3 = L row,
// line 4 = y row (rationals as p/q).
inline std::string tree_to_text(const TreeInstance& t) {
  std::ostringstream os;
  os << t.n() << "\n";
  for (int v = 0; v < t.n(); ++v) os << t.parent[v] << (v + 1 == t.n() ? "\n" : " ");
  for (int v = 0; v < t.n(); ++v) os << rat_str(t.L[v]) << (v + 1 == t.n() ? "\n" : " ");
  for (int v = 0; v < t.n(); ++v) os << rat_str(t.y[v]) << (v + 1 == t.n() ? "\n" : " ");
  return os.str();
}

inline TreeInstance tree_from_text(const std::string& text) {
  std::istringstream is(text);
  int n;
  if (!(is >> n) || n < 0) throw InvalidTreeInstance("tree text: bad node count");
  TreeInstance t;
  t.parent.resize(n);
  for (int v = 0; v < n; ++v)
    if (!(is >> t.parent[v])) throw InvalidTreeInstance("tree text: bad parent entry");
  auto read_rats = [&](std::vector<Rat>& out, const char* what) {
    for (int v = 0; v < n; ++v) {
      std::string tok;
      if (!(is >> tok)) throw InvalidTreeInstance(std::string("tree text: missing ") + what);
      auto r = parse_rat(tok);
      if (!r) throw InvalidTreeInstance(std::string("tree text: bad ") + what + " '" + tok + "'");
      out.push_back(*r);
    }
  };
  read_rats(t.L, "capacity");
  read_rats(t.y, "opening");
  t.validate();
  return t;
}

}  // namespace capkc
