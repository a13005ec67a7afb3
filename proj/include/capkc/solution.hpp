#pragma once

// Final solver output: certified threshold, open set, assignment, and the
// per-component opening allocation — everything a third party needs to check
// the run. validate_solution re-derives every structural claim from the
// instance alone (loads, distances, hop counts, budget sums), so a serialized
// solution can be re-validated without trusting the solver.

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "capkc/errors.hpp"
#include "capkc/instance.hpp"
#include "capkc/rational.hpp"
#include "capkc/zerol.hpp"

namespace capkc {

struct SolutionComponent {
  std::vector<int> vertices;  // original ids, ascending
  long long k_i = 0;          // openings allotted to this component
};

struct Solution {
  Variant variant = Variant::Center;
  Rat tau_star;
  std::vector<int> opens;  // ascending original ids
  std::vector<int> sigma;  // per vertex: its center, -1 when not served
  Rat metric_radius;       // max c(v, sigma(v)) over served vertices
  int hop_radius = 0;      // the same maximum counted in threshold-graph hops
  int ratio_bound = 0;     // proven approximation factor of the variant
  bool certified = false;  // every internal transfer/assignment check passed
  std::vector<SolutionComponent> components;
  Rat total_cost, budget_limit;          // budget variant only
  std::vector<int> clients, facilities;  // supplier variant only
};

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Center:
      return "center";
    case Variant::ZeroL:
      return "zerol";
    case Variant::Supplier:
      return "supplier";
    case Variant::Budget:
      return "budget";
    default:
      return "auto";
  }
}

inline Variant variant_from_name(const std::string& s) {
  if (s == "auto") return Variant::Auto;
  if (s == "center") return Variant::Center;
  if (s == "zerol") return Variant::ZeroL;
  if (s == "supplier") return Variant::Supplier;
  if (s == "budget") return Variant::Budget;
  throw std::invalid_argument("unknown variant '" + s + "'");
}

inline int variant_ratio_bound(Variant v) {
  switch (v) {
    case Variant::ZeroL:
      return 6;
    case Variant::Supplier:
      return 11;
    default:
      return 9;
  }
}

// The threshold graph a variant actually works on.
inline ThresholdGraph variant_graph(const MetricInstance& inst, Variant var, const Rat& tau) {
  if (var == Variant::ZeroL) return zerol_threshold_graph(inst, tau);
  if (var == Variant::Supplier) return build_threshold_graph(inst, tau, GraphKind::ClientFacility);
  return build_threshold_graph(inst, tau);
}

// Structural re-validation from scratch; throws VerificationError on the
// first broken claim. Deliberately LP-free so third parties can run it fast.
inline void validate_solution(const MetricInstance& inst, const Solution& sol) {
  inst.validate();
  require(sol.certified, "solution is not marked certified");
  require((sol.variant == Variant::Budget) == inst.has_cost(),
          "variant does not match the instance's cost data");
  require((sol.variant == Variant::Supplier) == inst.has_facility(),
          "variant does not match the instance's facility data");
  if (sol.variant == Variant::ZeroL) {
    long long lvl = 0;
    for (long long c : inst.cap) {
      if (c == 0) continue;
      if (lvl == 0) lvl = c;
      require(c == lvl, "capacities are not two-level");
    }
  }
  require(sol.ratio_bound == variant_ratio_bound(sol.variant), "wrong ratio bound for variant");
  require(sol.tau_star >= 0, "negative threshold");
  require((int)sol.sigma.size() == inst.n, "assignment length differs from vertex count");

  // Open set: distinct, in range, within the allowance (count or cost).
  std::vector<char> open(inst.n, 0);
  for (int o : sol.opens) {
    require(o >= 0 && o < inst.n, "open vertex out of range");
    require(!open[o], "vertex opened twice");
    open[o] = 1;
  }
  require(std::is_sorted(sol.opens.begin(), sol.opens.end()), "open set not sorted");
  if (sol.variant == Variant::Budget) {
    Rat c(0);
    for (int o : sol.opens) c += inst.cost[o];
    require(c == sol.total_cost, "stated opening cost differs from the actual sum");
    require(sol.budget_limit == *inst.budget, "stated budget differs from the instance");
    require(sol.total_cost <= sol.budget_limit, "opening cost exceeds the budget");
  } else {
    require((long long)sol.opens.size() <= inst.k, "more openings than allowed");
  }
  if (sol.variant == Variant::Supplier) {
    std::vector<int> cl, fc;
    for (int v = 0; v < inst.n; ++v) (inst.facility[v] ? fc : cl).push_back(v);
    require(sol.clients == cl && sol.facilities == fc, "client/facility lists differ");
    for (int o : sol.opens) require(inst.facility[o], "opened a client");
  }

  // Assignment: serves exactly the vertices the variant must serve, within
  // the stated radii, respecting capacities.
  ThresholdGraph g = variant_graph(inst, sol.variant, sol.tau_star);
  std::vector<long long> load(inst.n, 0);
  Rat maxd(0);
  int maxhop = 0;
  bool any = false;
  for (int v = 0; v < inst.n; ++v) {
    bool served = sol.variant != Variant::Supplier || !inst.facility[v];
    if (!served) {
      require(sol.sigma[v] == -1, "assignment on a vertex that needs no service");
      continue;
    }
    int c = sol.sigma[v];
    require(c >= 0 && c < inst.n && open[c], "served vertex not assigned to an open center");
    load[c] += 1;
    any = true;
    maxd = std::max(maxd, inst.dist[v][c]);
    int hop = g.hop[v][c];
    require(hop >= 0, "assigned center unreachable at the certified threshold");
    maxhop = std::max(maxhop, hop);
  }
  for (int o : sol.opens) require(load[o] <= inst.cap[o], "center load exceeds its capacity");
  require(sol.metric_radius == (any ? maxd : Rat(0)), "stated metric radius is not the maximum");
  require(sol.hop_radius == (any ? maxhop : 0), "stated hop radius is not the maximum");
  require(sol.hop_radius <= sol.ratio_bound, "hop radius exceeds the proven factor");
  require(sol.metric_radius <= Rat(sol.ratio_bound) * sol.tau_star,
          "metric radius exceeds the proven factor times the threshold");

  // Components: a partition of the vertices, each holding exactly its k_i
  // openings.
  std::vector<int> all;
  for (const SolutionComponent& c : sol.components) {
    require(std::is_sorted(c.vertices.begin(), c.vertices.end()), "component not sorted");
    long long cnt = 0;
    for (int o : sol.opens)
      if (std::binary_search(c.vertices.begin(), c.vertices.end(), o)) ++cnt;
    require(cnt == c.k_i, "component opening count differs from its allocation");
    all.insert(all.end(), c.vertices.begin(), c.vertices.end());
  }
  std::sort(all.begin(), all.end());
  std::vector<int> iota(inst.n);
  std::iota(iota.begin(), iota.end(), 0);
  require(all == iota, "components do not partition the vertex set");
}

inline std::string solution_json(const Solution& s) {
  nlohmann::ordered_json j;
  j["variant"] = variant_name(s.variant);
  j["tau_star"] = rat_str(s.tau_star);
  j["metric_radius"] = rat_str(s.metric_radius);
  j["hop_radius"] = s.hop_radius;
  j["ratio_bound"] = s.ratio_bound;
  j["opens"] = s.opens;
  j["assignment"] = s.sigma;
  nlohmann::ordered_json comps = nlohmann::ordered_json::array();
  for (const SolutionComponent& c : s.components)
    comps.push_back({{"vertices", c.vertices}, {"k_i", c.k_i}});
  j["components"] = comps;
  j["certified"] = s.certified;
  if (s.variant == Variant::Budget) {
    j["cost"] = rat_str(s.total_cost);
    j["budget"] = rat_str(s.budget_limit);
  }
  if (s.variant == Variant::Supplier) {
    j["clients"] = s.clients;
    j["facilities"] = s.facilities;
  }
  return j.dump(2) + "\n";
}

inline Solution solution_from_json(const std::string& text) {
  Solution s;
  try {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
    auto rat_field = [&](const char* key) {
      std::string raw = j.at(key).get<std::string>();
      auto r = parse_rat(raw);
      if (!r) throw ParseError(std::string("solution json: bad rational in '") + key + "'");
      return *r;
    };
    s.variant = variant_from_name(j.at("variant").get<std::string>());
    s.tau_star = rat_field("tau_star");
    s.metric_radius = rat_field("metric_radius");
    s.hop_radius = j.at("hop_radius").get<int>();
    s.ratio_bound = j.at("ratio_bound").get<int>();
    s.opens = j.at("opens").get<std::vector<int>>();
    s.sigma = j.at("assignment").get<std::vector<int>>();
    for (const auto& c : j.at("components")) {
      SolutionComponent sc;
      sc.vertices = c.at("vertices").get<std::vector<int>>();
      sc.k_i = c.at("k_i").get<long long>();
      s.components.push_back(std::move(sc));
    }
    s.certified = j.at("certified").get<bool>();
    if (s.variant == Variant::Budget) {
      s.total_cost = rat_field("cost");
      s.budget_limit = rat_field("budget");
    }
    if (s.variant == Variant::Supplier) {
      s.clients = j.at("clients").get<std::vector<int>>();
      s.facilities = j.at("facilities").get<std::vector<int>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("solution json: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("solution json: ") + e.what());
  }
  return s;
}

}  // namespace capkc
