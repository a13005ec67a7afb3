#include "capkc/flow.hpp"

#include <gtest/gtest.h>

#include "capkc/rng.hpp"

using namespace capkc;

TEST(Flow, SingleArc) {
  FlowNetwork net(2);
  auto h = net.add_arc(0, 1, Int(5));
  EXPECT_EQ(net.max_flow(0, 1), 5);
  EXPECT_EQ(net.flow_on(h), 5);
}

TEST(Flow, BipartitePerfectMatching) {
  // s=0, left {1,2}, right {3,4}, t=5; complete middle, unit capacities.
  FlowNetwork net(6);
  for (int l : {1, 2}) net.add_arc(0, l, Int(1));
  for (int l : {1, 2})
    for (int r : {3, 4}) net.add_arc(l, r, Int(1));
  for (int r : {3, 4}) net.add_arc(r, 5, Int(1));
  EXPECT_EQ(net.max_flow(0, 5), 2);
}

TEST(Flow, RespectsBottleneck) {
  FlowNetwork net(4);
  net.add_arc(0, 1, Int(10));
  net.add_arc(1, 2, Int(3));
  net.add_arc(2, 3, Int(10));
  net.add_arc(0, 2, Int(1));
  EXPECT_EQ(net.max_flow(0, 3), 4);
}

TEST(Flow, BigCapacitiesExact) {
  Int big("123456789012345678901234567890");
  FlowNetwork net(3);
  net.add_arc(0, 1, big);
  net.add_arc(1, 2, big + 7);
  EXPECT_EQ(net.max_flow(0, 2), big);
}

namespace {

// Cut value of vertex set side (s in side, t not): sum of original capacities
// of arcs leaving side.
Int cut_value(const FlowNetwork& net, unsigned side) {
  Int total = 0;
  for (int u = 0; u < net.n; ++u) {
    if (!(side >> u & 1)) continue;
    for (const auto& a : net.adj[u])
      if (a.init > 0 && !(side >> a.to & 1)) total += a.init;
  }
  return total;
}

Int brute_min_cut(const FlowNetwork& net, int s, int t) {
  Int best = -1;
  for (unsigned side = 0; side < (1u << net.n); ++side) {
    if (!(side >> s & 1) || (side >> t & 1)) continue;
    Int c = cut_value(net, side);
    if (best < 0 || c < best) best = c;
  }
  return best;
}

}  // namespace

TEST(Flow, MatchesBruteForceMinCutOnRandomNetworks) {
  Rng rng(20260814);
  for (int trial = 0; trial < 300; ++trial) {
    int n = (int)rng.range(2, 8);
    FlowNetwork net(n);
    int arcs = (int)rng.range(1, 2 * n);
    for (int a = 0; a < arcs; ++a) {
      int u = (int)rng.below(n), v = (int)rng.below(n);
      if (u == v) continue;
      net.add_arc(u, v, Int((long)rng.range(0, 9)));
    }
    FlowNetwork copy = net;
    Int flow = net.max_flow(0, n - 1);
    EXPECT_EQ(flow, brute_min_cut(copy, 0, n - 1)) << "trial " << trial;

    // The residual source side must be a cut of exactly the flow value.
    auto side = net.source_side(0);
    EXPECT_TRUE(side[0]);
    EXPECT_FALSE(side[n - 1]);
    unsigned mask = 0;
    for (int v = 0; v < n; ++v)
      if (side[v]) mask |= 1u << v;
    EXPECT_EQ(cut_value(copy, mask), flow);
  }
}

TEST(Flow, ConservationOnArcFlows) {
  Rng rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    int n = (int)rng.range(3, 7);
    FlowNetwork net(n);
    std::vector<std::pair<int, int>> handles;
    for (int a = 0; a < 12; ++a) {
      int u = (int)rng.below(n), v = (int)rng.below(n);
      if (u == v) continue;
      handles.push_back(net.add_arc(u, v, Int((long)rng.range(1, 6))));
    }
    Int flow = net.max_flow(0, n - 1);
    std::vector<Int> net_out(n, Int(0));
    for (auto h : handles) {
      Int f = net.flow_on(h);
      EXPECT_GE(f, 0);
      EXPECT_LE(f, net.adj[h.first][h.second].init);
      net_out[h.first] += f;
      net_out[net.adj[h.first][h.second].to] -= f;
    }
    for (int v = 0; v < n; ++v) {
      if (v == 0)
        EXPECT_EQ(net_out[v], flow);
      else if (v == n - 1)
        EXPECT_EQ(net_out[v], -flow);
      else
        EXPECT_EQ(net_out[v], 0);
    }
  }
}
