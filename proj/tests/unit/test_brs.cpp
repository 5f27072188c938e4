#include <gtest/gtest.h>

#include "helpers.hpp"
#include "quasilab/dynamics.hpp"

using namespace quasilab;
using namespace quasilab::testing;

TEST(Brs, RealizeMeasureTwoDimensional) {
  const auto a = q23();
  const QVector alpha{q(a, "w1"), q(a, "w2")};
  const auto p = realize_measure(alpha, q(a, "w1"), 4);
  const auto& e = p.region.pieces().front().edges;
  const auto det = exact_det(e);
  EXPECT_TRUE(det == q(a, "w1") || det == q(a, "-w1"));
  ASSERT_EQ(p.edges.size(), 2u);
  for (std::size_t j = 0; j < 2; ++j) {
    // witness reproduces the edge: n alpha + m
    const auto col = e.column(j);
    for (std::size_t i = 0; i < 2; ++i)
      EXPECT_EQ(col[i], alpha[i] * Rational(p.edges[j].n) + QValue(a, Rational(p.edges[j].m[i])));
  }
}

TEST(Brs, RealizeMeasureUnitSquare) {
  const auto a = q23();
  const auto p = realize_measure({q(a, "w1"), q(a, "w2")}, q(a, "1"), 2);
  EXPECT_EQ(p.region.volume(), q(a, "1"));
}

TEST(Brs, RealizeMeasureImpossibleMeasure) {
  const auto a = q23();
  // w3 is not in Z + Z w1 + Z w2
  EXPECT_THROW(realize_measure({q(a, "w1"), q(a, "w2")}, q(a, "w3"), 2), PreconditionError);
}

TEST(Brs, ConstructBetweenOneDimensional) {
  const auto a = q2();
  const auto k = RegionSet::parse_intervals(a, "[1/10, 4/10]", true);
  const auto u = RegionSet::parse_intervals(a, "(0, 1)", true);
  const auto c = construct_brs_between(k, u, q(a, "w1 - 1"), {q(a, "w1")}, 0.05, 4);
  EXPECT_EQ(c.region.volume(), q(a, "w1 - 1"));
  for (const char* x : {"1/10", "4/10", "1/4"}) EXPECT_TRUE(c.region.contains({q(a, x)})) << x;
  for (const char* x : {"0", "1", "-1/100"}) EXPECT_FALSE(c.region.contains({q(a, x)})) << x;
  // bounded remainder: the empirical statistic stays small
  const auto st = brs_empirical(c.region, {q(a, "w1")}, 20000, 2000);
  EXPECT_LE(st.max_abs, 4.0);
}

TEST(Brs, ConstructBetweenRejectsBadInput) {
  const auto a = q2();
  const auto k = RegionSet::parse_intervals(a, "[1/10, 9/10]", true);
  const auto u = RegionSet::parse_intervals(a, "(0, 1)", true);
  // gamma below mes K
  EXPECT_THROW(construct_brs_between(k, u, q(a, "w1 - 1"), {q(a, "w1")}, 0.05, 4), PreconditionError);
  // gamma not in Z + Z alpha
  EXPECT_THROW(construct_brs_between(k, u, q(a, "9/10"), {q(a, "w1")}, 0.05, 4), PreconditionError);
}

TEST(Brs, ConstructBetweenTwoDimensionalExhausts) {
  const auto a = q23();
  const auto k = RegionSet::box({q(a, "1/10"), q(a, "1/10")}, {q(a, "4/10"), q(a, "4/10")});
  const auto u = RegionSet::box({q(a, "0"), q(a, "0")}, {q(a, "1"), q(a, "1")});
  EXPECT_THROW(construct_brs_between(k, u, q(a, "w1 - 1"), {q(a, "w1"), q(a, "w2")}, 0.2, 2), SearchExhausted);
}

TEST(Brs, ParallelepipedFromGenerators) {
  const auto a = q2();
  const std::vector<ModuleWitness> gens{{Integer(1), {Integer(-1)}}};
  const auto p = brs_parallelepiped({q(a, "w1")}, gens);
  EXPECT_EQ(p.region.volume(), q(a, "w1 - 1"));
}
