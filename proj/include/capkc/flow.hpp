#pragma once

// Integer max-flow (Dinic). Capacities are arbitrary-precision integers so
// that rational supplies scaled by a common denominator can never overflow.

#include <utility>
#include <vector>

#include "capkc/errors.hpp"
#include "capkc/rational.hpp"

namespace capkc {

struct FlowNetwork {
  struct Arc {
    int to;
    Int cap;   // residual
    Int init;  // original capacity
    int rev;   // index of the reverse arc in adj[to]
  };

  int n;
  std::vector<std::vector<Arc>> adj;

  explicit FlowNetwork(int n_) : n(n_), adj(n_) {}

  // Handle (u, index) for reading the flow on this arc afterwards.
  std::pair<int, int> add_arc(int u, int v, Int cap) {
    require(u != v && cap >= 0, "bad arc");
    adj[u].push_back({v, cap, cap, (int)adj[v].size()});
    adj[v].push_back({u, Int(0), Int(0), (int)adj[u].size() - 1});
    return {u, (int)adj[u].size() - 1};
  }

  Int flow_on(std::pair<int, int> handle) const {
    const Arc& a = adj[handle.first][handle.second];
    return a.init - a.cap;
  }

  Int max_flow(int s, int t) {
    require(s != t, "source equals sink");
    Int total = 0;
    while (bfs(s, t)) {
      iter_.assign(n, 0);
      for (;;) {
        Int pushed = dfs(s, t, Int(-1));
        if (pushed == 0) break;
        total += pushed;
      }
    }
    return total;
  }

  // After max_flow: vertices reachable from s in the residual graph. For a
  // maximum flow this is the source side of a minimum cut.
  std::vector<char> source_side(int s) const {
    std::vector<char> seen(n, 0);
    std::vector<int> q{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < q.size(); ++head)
      for (const Arc& a : adj[q[head]])
        if (a.cap > 0 && !seen[a.to]) {
          seen[a.to] = 1;
          q.push_back(a.to);
        }
    return seen;
  }

 private:
  std::vector<int> level_, iter_;

  bool bfs(int s, int t) {
    level_.assign(n, -1);
    std::vector<int> q{s};
    level_[s] = 0;
    for (std::size_t head = 0; head < q.size(); ++head) {
      int u = q[head];
      for (const Arc& a : adj[u])
        if (a.cap > 0 && level_[a.to] < 0) {
          level_[a.to] = level_[u] + 1;
          q.push_back(a.to);
        }
    }
    return level_[t] >= 0;
  }

  // limit < 0 means unconstrained; it becomes a real bound at the first arc,
  // and s != t guarantees at least one arc on any s-t path.
  Int dfs(int u, int t, Int limit) {
    if (u == t) return limit;
    for (int& i = iter_[u]; i < (int)adj[u].size(); ++i) {
      Arc& a = adj[u][i];
      if (a.cap <= 0 || level_[a.to] != level_[u] + 1) continue;
      Int pass = limit < 0 ? a.cap : std::min(limit, a.cap);
      Int got = dfs(a.to, t, pass);
      if (got > 0) {
        a.cap -= got;
        adj[a.to][a.rev].cap += got;
        return got;
      }
    }
    return 0;
  }
};

}  // namespace capkc
