#pragma once

// CAPKC text format: line-oriented, '#' starts a comment, blank lines are
// skipped. Section order: CAPKC 1, MODE, N, K, CAP, then any of COST/BUDGET/
// FACILITY, then MATRIX rows or EDGES lines. Every diagnostic carries the
// offending line number.

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "capkc/errors.hpp"
#include "capkc/instance.hpp"

namespace capkc {

namespace detail {

struct Line {
  int no;
  std::vector<std::string> tok;
};

inline std::vector<Line> tokenize_capkc(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line l{no, {}};
    std::string t;
    while (ls >> t) l.tok.push_back(t);
    if (!l.tok.empty()) lines.push_back(std::move(l));
  }
  return lines;
}

inline long long parse_count(const Line& l, const std::string& what, int pos) {
  if ((int)l.tok.size() <= pos) throw ParseError(l.no, what + " value missing");
  auto r = parse_rat(l.tok[pos]);
  if (!r || !is_integer(*r)) throw ParseError(l.no, what + " must be an integer");
  if (!r->get_num().fits_slong_p()) throw ParseError(l.no, what + " overflow");
  return r->get_num().get_si();
}

}  // namespace detail

inline MetricInstance parse_instance(const std::string& text) {
  using detail::Line;
  auto lines = detail::tokenize_capkc(text);
  std::size_t at = 0;
  auto next = [&]() -> const Line& {
    if (at >= lines.size()) throw ParseError((int)(lines.empty() ? 1 : lines.back().no), "unexpected end of file");
    return lines[at++];
  };

  const Line& magic = next();
  if (magic.tok.size() != 2 || magic.tok[0] != "CAPKC" || magic.tok[1] != "1")
    throw ParseError(magic.no, "malformed header: expected 'CAPKC 1'");

  const Line& mode_l = next();
  if (mode_l.tok.size() != 2 || mode_l.tok[0] != "MODE" ||
      (mode_l.tok[1] != "MATRIX" && mode_l.tok[1] != "GRAPH"))
    throw ParseError(mode_l.no, "malformed header: expected 'MODE MATRIX' or 'MODE GRAPH'");
  const bool matrix_mode = mode_l.tok[1] == "MATRIX";

  MetricInstance inst;
  const Line& n_l = next();
  if (n_l.tok.empty() || n_l.tok[0] != "N") throw ParseError(n_l.no, "expected N");
  long long n = detail::parse_count(n_l, "N", 1);
  if (n < 1 || n > 1'000'000) throw ParseError(n_l.no, "N out of range");
  inst.n = (int)n;

  const Line& k_l = next();
  if (k_l.tok.empty() || k_l.tok[0] != "K") throw ParseError(k_l.no, "expected K");
  inst.k = detail::parse_count(k_l, "K", 1);
  if (inst.k < 1) throw ParseError(k_l.no, "K must be positive");

  const Line& cap_l = next();
  if (cap_l.tok.empty() || cap_l.tok[0] != "CAP") throw ParseError(cap_l.no, "expected CAP");
  if ((int)cap_l.tok.size() != inst.n + 1)
    throw ParseError(cap_l.no, "CAP needs exactly N entries");
  for (int v = 0; v < inst.n; ++v) {
    auto r = parse_rat(cap_l.tok[v + 1]);
    if (!r || !is_integer(*r)) throw ParseError(cap_l.no, "capacities must be integers");
    if (*r < 0) throw ParseError(cap_l.no, "capacities must be nonnegative");
    if (!r->get_num().fits_slong_p()) throw ParseError(cap_l.no, "capacity overflow");
    inst.cap.push_back(r->get_num().get_si());
  }

  int cost_line = 0, budget_line = 0, facility_line = 0;
  while (at < lines.size() && (lines[at].tok[0] == "COST" || lines[at].tok[0] == "BUDGET" ||
                               lines[at].tok[0] == "FACILITY")) {
    const Line& l = next();
    if (l.tok[0] == "COST") {
      if (cost_line) throw ParseError(l.no, "duplicate COST");
      cost_line = l.no;
      if ((int)l.tok.size() != inst.n + 1) throw ParseError(l.no, "COST needs exactly N entries");
      for (int v = 0; v < inst.n; ++v) {
        auto r = parse_rat(l.tok[v + 1]);
        if (!r) throw ParseError(l.no, "bad cost value '" + l.tok[v + 1] + "'");
        if (*r < 0) throw ParseError(l.no, "costs must be nonnegative");
        inst.cost.push_back(*r);
      }
    } else if (l.tok[0] == "BUDGET") {
      if (budget_line) throw ParseError(l.no, "duplicate BUDGET");
      budget_line = l.no;
      if (l.tok.size() != 2) throw ParseError(l.no, "BUDGET needs one value");
      auto r = parse_rat(l.tok[1]);
      if (!r || *r < 0) throw ParseError(l.no, "BUDGET must be a nonnegative rational");
      inst.budget = *r;
    } else {
      if (facility_line) throw ParseError(l.no, "duplicate FACILITY");
      facility_line = l.no;
      if ((int)l.tok.size() != inst.n + 1)
        throw ParseError(l.no, "FACILITY needs exactly N entries");
      for (int v = 0; v < inst.n; ++v) {
        if (l.tok[v + 1] != "0" && l.tok[v + 1] != "1")
          throw ParseError(l.no, "FACILITY entries must be 0 or 1");
        inst.facility.push_back(l.tok[v + 1] == "1");
      }
    }
  }
  if (cost_line && !budget_line) throw ParseError(cost_line, "COST requires BUDGET");
  if (budget_line && !cost_line) throw ParseError(budget_line, "BUDGET requires COST");
  if (facility_line) {
    bool any = false;
    for (char f : inst.facility) any = any || f;
    if (!any) throw ParseError(facility_line, "FACILITY must mark at least one facility");
    for (int v = 0; v < inst.n; ++v) {
      if (inst.facility[v]) continue;
      if (inst.cap[v] != 0)
        throw ParseError(facility_line, "client vertices must have capacity 0");
      if (!inst.cost.empty() && inst.cost[v] != 0)
        throw ParseError(std::max(facility_line, cost_line), "client vertices must have cost 0");
    }
  }

  inst.dist.assign(inst.n, std::vector<Rat>(inst.n));
  if (matrix_mode) {
    const Line& m_l = next();
    if (m_l.tok.size() != 1 || m_l.tok[0] != "MATRIX")
      throw ParseError(m_l.no, "expected MATRIX");
    std::vector<int> row_line(inst.n);
    for (int i = 0; i < inst.n; ++i) {
      const Line& row = next();
      row_line[i] = row.no;
      if ((int)row.tok.size() != inst.n)
        throw ParseError(row.no, "matrix row needs exactly N entries");
      for (int j = 0; j < inst.n; ++j) {
        auto r = parse_rat(row.tok[j]);
        if (!r) throw ParseError(row.no, "bad distance value '" + row.tok[j] + "'");
        if (*r < 0) throw ParseError(row.no, "distances must be nonnegative");
        inst.dist[i][j] = *r;
      }
    }
    for (int i = 0; i < inst.n; ++i) {
      if (inst.dist[i][i] != 0)
        throw ParseError(row_line[i], "diagonal entry c(" + std::to_string(i) + "," +
                                          std::to_string(i) + ") must be 0");
      for (int j = 0; j < i; ++j)
        if (inst.dist[i][j] != inst.dist[j][i])
          throw ParseError(row_line[i], "matrix not symmetric: c(" + std::to_string(i) + "," +
                                            std::to_string(j) + ") = " + rat_str(inst.dist[i][j]) +
                                            " but c(" + std::to_string(j) + "," +
                                            std::to_string(i) + ") = " + rat_str(inst.dist[j][i]));
    }
    for (int i = 0; i < inst.n; ++i)
      for (int j = 0; j < inst.n; ++j)
        for (int l = 0; l < inst.n; ++l)
          if (inst.dist[i][j] + inst.dist[j][l] < inst.dist[i][l])
            throw ParseError(row_line[i], "triangle inequality violated: c(" + std::to_string(i) +
                                              "," + std::to_string(l) + ") > c(" +
                                              std::to_string(i) + "," + std::to_string(j) +
                                              ") + c(" + std::to_string(j) + "," +
                                              std::to_string(l) + ")");
  } else {
    const Line& e_l = next();
    if (e_l.tok.empty() || e_l.tok[0] != "EDGES") throw ParseError(e_l.no, "expected EDGES");
    long long m = detail::parse_count(e_l, "EDGES", 1);
    if (m < 0) throw ParseError(e_l.no, "EDGES count must be nonnegative");
    std::vector<std::pair<int, int>> edges;
    for (long long e = 0; e < m; ++e) {
      const Line& l = next();
      if (l.tok.size() != 2) throw ParseError(l.no, "edge line needs two endpoints");
      long long u = detail::parse_count(l, "edge endpoint", 0);
      long long v = detail::parse_count(l, "edge endpoint", 1);
      if (u < 0 || u >= inst.n || v < 0 || v >= inst.n)
        throw ParseError(l.no, "edge endpoint out of range");
      if (u == v) throw ParseError(l.no, "self-loop edges are implicit; do not list them");
      edges.emplace_back((int)u, (int)v);
    }
    ThresholdGraph g(inst.n, std::move(edges));
    for (int i = 0; i < inst.n; ++i)
      for (int j = 0; j < inst.n; ++j) {
        if (g.hop[i][j] < 0)
          throw ParseError(e_l.no, "GRAPH instance must be connected (hop metric undefined)");
        inst.dist[i][j] = Rat(g.hop[i][j]);
      }
  }

  if (at < lines.size()) throw ParseError(lines[at].no, "unexpected trailing content");

  // Semantic checks that don't have a better line to point at.
  try {
    inst.validate();
  } catch (const ParseError& e) {
    throw ParseError(cap_l.no, e.what());
  }
  return inst;
}

// Canonical serialization: always MATRIX mode, rationals in lowest terms.
// parse_instance(serialize_instance(x)) == x for every valid x.
inline std::string serialize_instance(const MetricInstance& inst) {
  std::ostringstream out;
  out << "CAPKC 1\nMODE MATRIX\nN " << inst.n << "\nK " << inst.k << "\nCAP";
  for (long long c : inst.cap) out << ' ' << c;
  out << '\n';
  if (inst.has_cost()) {
    out << "COST";
    for (const Rat& c : inst.cost) out << ' ' << rat_str(c);
    out << "\nBUDGET " << rat_str(*inst.budget) << '\n';
  }
  if (inst.has_facility()) {
    out << "FACILITY";
    for (char f : inst.facility) out << ' ' << (f ? 1 : 0);
    out << '\n';
  }
  out << "MATRIX\n";
  for (int i = 0; i < inst.n; ++i) {
    for (int j = 0; j < inst.n; ++j) out << (j ? " " : "") << rat_str(inst.dist[i][j]);
    out << '\n';
  }
  return out.str();
}

inline bool operator==(const MetricInstance& a, const MetricInstance& b) {
  return a.n == b.n && a.k == b.k && a.dist == b.dist && a.cap == b.cap && a.cost == b.cost &&
         a.budget == b.budget && a.facility == b.facility;
}

}  // namespace capkc
