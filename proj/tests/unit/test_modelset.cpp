#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "quasilab/lattice.hpp"
#include "quasilab/modelset.hpp"

using namespace quasilab;
using namespace quasilab::testing;

namespace {

long double frac(long double x) { return x - std::floor(x); }

}  // namespace

TEST(ModelSet, OnePointPerMForUnitWindow) {
  const auto lat = make_special_lattice({q("w1")}, {q("1")});
  const auto p = cut_and_project(lat.gamma, intervals("(-1, 0]"), IntBox::range(-100, 100));
  EXPECT_EQ(p.size(), 201u);
  EXPECT_EQ(p.kind, PointKind::model_set);
  EXPECT_DOUBLE_EQ(provenance_error(p, lat.gamma), 0.0);
}

// Internal coordinate recomputed from the provenance lies in the window.
TEST(ModelSetProperty, ProvenanceReproducesWindowMembership) {
  const auto a = q23();
  const QVector alpha{q(a, "w1"), q(a, "w2")};
  const QVector beta{q(a, "1/2"), q(a, "w1")};
  const auto lat = make_special_lattice(alpha, beta);
  const auto w = intervals("[0, 3/2)", a);
  const auto p = cut_and_project(lat.gamma, w, IntBox::cube(2, 6));
  ASSERT_GT(p.size(), 0u);
  const long double al[2] = {std::sqrt(2.0L), std::sqrt(3.0L)};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto t = p.tag(i);
    const long double internal = t[2] - (al[0] * t[0] + al[1] * t[1]);
    EXPECT_GE(internal, -1e-12L);
    EXPECT_LT(internal, 1.5L + 1e-12L);
  }
  // count oracle: for each m the window [0, 3/2) holds one or two n
  std::size_t count = 0;
  for (long m1 = -6; m1 <= 6; ++m1)
    for (long m2 = -6; m2 <= 6; ++m2) {
      const long double c = al[0] * m1 + al[1] * m2;
      for (long n = static_cast<long>(std::floor(c)) - 2; n <= static_cast<long>(std::ceil(c)) + 2; ++n)
        if (n - c >= 0 && n - c < 1.5L) ++count;
    }
  EXPECT_EQ(p.size(), count);
}

TEST(ModelSet, DualModelSetOfUnitWindowIsFractionalSequence) {
  const auto p = dual_model_points({q("w1")}, {q("1")}, intervals("[0, 1)"), -500, 500);
  ASSERT_EQ(p.size(), 1001u);
  ASSERT_TRUE(p.block_tag.has_value());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto n = p.block(i);
    const long double expect = n + frac(n * std::sqrt(2.0L));
    EXPECT_NEAR(p.coords[i], static_cast<double>(expect), 1e-12);
  }
}

TEST(ModelSet, DualBlocksMayBeEmptyOrLarge) {
  // |S| = 1/2: about half the blocks are empty
  const auto p = dual_model_points({q("w1")}, {q("1")}, intervals("[0, 1/2)"), -100, 100);
  EXPECT_GT(p.size(), 60u);
  EXPECT_LT(p.size(), 140u);
  // S of length 3/2 has blocks of size one or two
  const auto r = dual_model_points({q("w1")}, {q("1")}, intervals("[0, 3/2)"), -100, 100);
  EXPECT_GT(r.size(), 201u);
}

TEST(ModelSet, SequencePoints) {
  const auto a = q2();
  const auto p = sequence_points({q(a, "w1")}, {q(a, "1")}, IntBox::range(-50, 50));
  ASSERT_EQ(p.size(), 101u);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const long m = p.tag(i)[0];
    EXPECT_NEAR(p.coords[i], static_cast<double>(m + frac(m * std::sqrt(2.0L))), 1e-12);
  }
  EXPECT_THROW(sequence_points({q(a, "1/3")}, {q(a, "1")}, IntBox::range(-5, 5)), PreconditionError);
}

TEST(ModelSet, PeriodicPointsCountOracle) {
  const auto p = periodic_points({q("w1")}, intervals("[0, w1 - 1)"), IntBox::range(-2000, 2000));
  std::size_t count = 0;
  for (long n = -2000; n <= 2000; ++n)
    if (frac(n * std::sqrt(2.0L)) < std::sqrt(2.0L) - 1) ++count;
  EXPECT_EQ(p.size(), count);
  EXPECT_THROW(periodic_points({q("w1")}, intervals("[0, 3/2)"), IntBox::range(-2, 2)), PreconditionError);
}

TEST(ModelSet, PeriodicDualCountOracle) {
  const auto p = periodic_dual({q("w1")}, intervals("[0, 1/3)"), -3000, 3000);
  std::size_t count = 0;
  for (long m = -3000; m <= 3000; ++m)
    if (frac(-m * std::sqrt(2.0L)) < 1.0L / 3) ++count;
  EXPECT_EQ(p.size(), count);
}

TEST(ModelSet, DensityAndSeparation) {
  PointSet z;
  for (long k = -300; k <= 300; ++k) {
    const double x = static_cast<double>(k);
    z.push(std::span<const double>(&x, 1), {});
  }
  const std::vector<double> radii{10, 50};
  for (const auto& row : density_estimate(z, radii)) {
    EXPECT_NEAR(row.lower, 1.0, 1.0 / row.radius);
    EXPECT_NEAR(row.upper, 1.0, 1.0 / row.radius);
  }
  EXPECT_DOUBLE_EQ(separation(z), 1.0);
  const auto t = z.truncate(5);
  EXPECT_EQ(t.size(), 11u);
}

TEST(ModelSet, DensityOfModelSetMatchesWindow) {
  const auto lat = make_special_lattice({q("w1")}, {q("1")});
  const auto p = cut_and_project(lat.gamma, intervals("[0, w1 - 1)"), IntBox::range(-3000, 3000));
  const std::vector<double> radii{500};
  const auto rows = density_estimate(p, radii);
  // Lambda(Gamma, I) has density |I| / covolume = w1 - 1
  EXPECT_NEAR(rows[0].lower, std::sqrt(2.0) - 1, 0.01);
  EXPECT_NEAR(rows[0].upper, std::sqrt(2.0) - 1, 0.01);
}

TEST(ModelSet, TransformPointSet) {
  const auto p = dual_model_points({q("w1")}, {q("1")}, intervals("[0, 1)"), -5, 5);
  QMatrix m(q2(), 1, 1);
  m(0, 0) = q("2");
  const auto t = transform_pointset(p, m);
  ASSERT_EQ(t.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_DOUBLE_EQ(t.coords[i], 2 * p.coords[i]);
  EXPECT_EQ(t.tags, p.tags);
}

TEST(ModelSet, SortByTags) {
  PointSet p;
  p.tag_width = 1;
  for (long k : {3, -1, 2}) {
    const double x = static_cast<double>(k);
    const std::int64_t t = k;
    p.push(std::span<const double>(&x, 1), std::span<const std::int64_t>(&t, 1));
  }
  p.sort_by_tags();
  EXPECT_EQ(p.tags, (std::vector<std::int64_t>{-1, 2, 3}));
}
