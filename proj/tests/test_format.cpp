#include "capkc/format.hpp"

#include <gtest/gtest.h>

using namespace capkc;

namespace {

// Expect a ParseError mentioning `needle` on line `line`.
void expect_error(const std::string& text, int line, const std::string& needle) {
  try {
    parse_instance(text);
    FAIL() << "expected ParseError containing '" << needle << "'";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(Format, ParsesSingleton) {
  auto inst = parse_instance("CAPKC 1\nMODE MATRIX\nN 1\nK 1\nCAP 1\nMATRIX\n0\n");
  EXPECT_EQ(inst.n, 1);
  EXPECT_EQ(inst.k, 1);
  EXPECT_EQ(inst.cap, std::vector<long long>{1});
  EXPECT_FALSE(inst.has_cost());
  EXPECT_FALSE(inst.has_facility());
}

TEST(Format, CommentsAndBlanksIgnored) {
  auto inst = parse_instance(
      "# a capacitated instance\nCAPKC 1\n\nMODE MATRIX  # mode\nN 2\nK 1\n"
      "CAP 2 1 # caps\n\nMATRIX\n0 1/2\n1/2 0\n");
  EXPECT_EQ(inst.n, 2);
  EXPECT_EQ(inst.dist[0][1], make_rat(1, 2));
}

TEST(Format, GraphModeHopMetric) {
  // 4-cycle: opposite corners at hop 2.
  auto inst = parse_instance(
      "CAPKC 1\nMODE GRAPH\nN 4\nK 2\nCAP 2 2 2 2\nEDGES 4\n0 1\n1 2\n2 3\n3 0\n");
  EXPECT_EQ(inst.dist[0][2], Rat(2));
  EXPECT_EQ(inst.dist[0][1], Rat(1));
  EXPECT_EQ(inst.dist[1][3], Rat(2));
  EXPECT_EQ(inst.dist[2][2], Rat(0));
}

TEST(Format, RoundTripIdentity) {
  MetricInstance inst;
  inst.n = 3;
  inst.k = 2;
  inst.dist = {{Rat(0), make_rat(3, 2), Rat(2)},
               {make_rat(3, 2), Rat(0), Rat(1)},
               {Rat(2), Rat(1), Rat(0)}};
  inst.cap = {0, 4, 1};
  inst.cost = {make_rat(1, 2), Rat(0), Rat(7)};
  inst.budget = make_rat(15, 2);
  inst.validate();
  auto text = serialize_instance(inst);
  auto back = parse_instance(text);
  EXPECT_TRUE(back == inst);
  EXPECT_EQ(serialize_instance(back), text);

  // Supplier flavor round-trips too.
  MetricInstance sup;
  sup.n = 2;
  sup.k = 1;
  sup.dist = {{Rat(0), Rat(3)}, {Rat(3), Rat(0)}};
  sup.cap = {0, 2};
  sup.facility = {0, 1};
  sup.validate();
  EXPECT_TRUE(parse_instance(serialize_instance(sup)) == sup);
}

TEST(Format, GraphModeRoundTripsAsMatrix) {
  auto inst = parse_instance(
      "CAPKC 1\nMODE GRAPH\nN 3\nK 1\nCAP 3 0 0\nEDGES 2\n0 1\n1 2\n");
  auto back = parse_instance(serialize_instance(inst));
  EXPECT_TRUE(back == inst);
}

TEST(Format, MalformedHeader) {
  expect_error("CAPKC 2\nMODE MATRIX\nN 1\nK 1\nCAP 1\nMATRIX\n0\n", 1, "malformed header");
  expect_error("KCAPC 1\nMODE MATRIX\nN 1\nK 1\nCAP 1\nMATRIX\n0\n", 1, "malformed header");
  expect_error("CAPKC 1\nMODE NEITHER\nN 1\nK 1\nCAP 1\nMATRIX\n0\n", 2, "malformed header");
}

TEST(Format, AsymmetryNamesBothEntries) {
  expect_error(
      "CAPKC 1\nMODE MATRIX\nN 2\nK 1\nCAP 1 1\nMATRIX\n0 1\n2 0\n", 8,
      "c(1,0) = 2 but c(0,1) = 1");
}

TEST(Format, TriangleViolationDiagnostic) {
  expect_error(
      "CAPKC 1\nMODE MATRIX\nN 3\nK 1\nCAP 1 1 1\nMATRIX\n0 1 9\n1 0 1\n9 1 0\n", 7,
      "triangle inequality");
}

TEST(Format, CapacityDiagnostics) {
  expect_error("CAPKC 1\nMODE MATRIX\nN 2\nK 1\nCAP 1 99999999999999999999\nMATRIX\n0 1\n1 0\n",
               5, "capacity overflow");
  expect_error("CAPKC 1\nMODE MATRIX\nN 2\nK 1\nCAP 1 -1\nMATRIX\n0 1\n1 0\n", 5, "nonnegative");
  expect_error("CAPKC 1\nMODE MATRIX\nN 2\nK 1\nCAP 1 1/2\nMATRIX\n0 1\n1 0\n", 5, "integers");
  expect_error("CAPKC 1\nMODE MATRIX\nN 2\nK 1\nCAP 1\nMATRIX\n0 1\n1 0\n", 5, "exactly N");
  // Total capacity below n is infeasible at every threshold.
  expect_error("CAPKC 1\nMODE MATRIX\nN 2\nK 1\nCAP 1 0\nMATRIX\n0 1\n1 0\n", 5,
               "total capacity");
}

TEST(Format, StructuralDiagnostics) {
  expect_error("CAPKC 1\nMODE MATRIX\nN 2\nK 1\nCAP 1 1\nMATRIX\n0 1\n", 7, "unexpected end");
  expect_error("CAPKC 1\nMODE MATRIX\nN 2\nK 1\nCAP 1 1\nMATRIX\n0 1\n1 0\nextra\n", 9,
               "trailing");
  expect_error("CAPKC 1\nMODE MATRIX\nN 2\nK 0\nCAP 1 1\nMATRIX\n0 1\n1 0\n", 4, "positive");
  expect_error("CAPKC 1\nMODE GRAPH\nN 3\nK 1\nCAP 1 1 1\nEDGES 1\n0 1\n", 6, "connected");
  expect_error("CAPKC 1\nMODE GRAPH\nN 2\nK 1\nCAP 1 1\nEDGES 1\n0 0\n", 7, "self-loop");
  expect_error("CAPKC 1\nMODE GRAPH\nN 2\nK 1\nCAP 1 1\nEDGES 1\n0 5\n", 7, "out of range");
  expect_error("CAPKC 1\nMODE MATRIX\nN 2\nK 1\nCAP 1 1\nCOST 1 1\nMATRIX\n0 1\n1 0\n", 6,
               "COST requires BUDGET");
  expect_error("CAPKC 1\nMODE MATRIX\nN 2\nK 1\nCAP 0 2\nFACILITY 0 1\nCOST 1 1\nBUDGET 3\n"
               "MATRIX\n0 1\n1 0\n", 7, "cost 0");
}
