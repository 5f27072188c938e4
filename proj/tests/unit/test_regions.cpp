#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"

using namespace quasilab;
using namespace quasilab::testing;

namespace {

constexpr double kPi = std::numbers::pi;

// |det E| int_{[0,1]^2} exp(-2 pi i <t, o + E u>) du, nested adaptive quadrature.
std::complex<double> quad_parallelogram(const RegionSet::NumericPiece& p, double t0, double t1) {
  using boost::math::quadrature::gauss_kronrod;
  auto phase = [&](double u, double v) {
    const double x = p.offset[0] + p.edges[0] * u + p.edges[1] * v;
    const double y = p.offset[1] + p.edges[2] * u + p.edges[3] * v;
    return -2 * kPi * (t0 * x + t1 * y);
  };
  auto part = [&](bool imag) {
    return gauss_kronrod<double, 31>::integrate(
        [&](double u) {
          return gauss_kronrod<double, 31>::integrate(
              [&](double v) { return imag ? std::sin(phase(u, v)) : std::cos(phase(u, v)); }, 0, 1, 10, 1e-12);
        },
        0, 1, 10, 1e-12);
  };
  return p.abs_det * std::complex<double>(part(false), part(true));
}

}  // namespace

TEST(Regions, IntervalSemantics) {
  const auto s = intervals("[0, w1 - 1)");
  EXPECT_TRUE(s.contains({q("0")}));
  EXPECT_FALSE(s.contains({q("w1 - 1")}));
  EXPECT_TRUE(s.contains({q("w1 - 1 - 1/1000000000000")}));
  const auto t = intervals("(-1, 0]");
  EXPECT_FALSE(t.contains({q("-1")}));
  EXPECT_TRUE(t.contains({q("0")}));
  EXPECT_EQ(t.volume(), q("1"));
}

TEST(Regions, ParseRejectsClosedAndOpenUnlessAllowed) {
  EXPECT_THROW(intervals("[0, 1]"), PreconditionError);
  EXPECT_THROW(intervals("(0, 1)"), PreconditionError);
  EXPECT_NO_THROW(RegionSet::parse_intervals(q2(), "(0, 1)", true));
  EXPECT_THROW(intervals("[1, 0)"), PreconditionError);
}

TEST(Regions, OverlapDetected) {
  EXPECT_THROW(intervals("[0, 1) u [1/2, 2)"), PreconditionError);
  EXPECT_NO_THROW(intervals("[0, 1) u [1, 2)"));
}

TEST(Regions, UnionVolume) {
  EXPECT_EQ(intervals("[0, w1 - 1) u [1, 3 - w1)").volume(), q("1"));
  EXPECT_EQ(intervals("[0, 1/2) u [1, 3/2)").volume(), q("1"));
}

TEST(Regions, HybridMembershipFallsBackToExact) {
  const auto s = intervals("[0, w1 - 1)");
  const long double at = std::sqrt(2.0L) - 1;
  const long double x[1] = {at};
  EXPECT_THROW(s.contains(std::span<const long double>(x, 1)), AmbiguousBoundary);
  EXPECT_FALSE(s.contains(std::span<const long double>(x, 1), [] { return QVector{q("w1 - 1")}; }));
  const long double y[1] = {0.2L};
  EXPECT_TRUE(s.contains(std::span<const long double>(y, 1)));
}

TEST(Regions, Multiplicity) {
  const auto s = intervals("[0, 3/2)");
  const long double x[1] = {0.25L};
  EXPECT_EQ(s.multiplicity(std::span<const long double>(x, 1)), 2);
  EXPECT_EQ(s.multiplicity(QVector{q("3/4")}), 1);
  EXPECT_EQ(s.multiplicity(QVector{q("-7/4")}), 2);
  const auto u = intervals("[0, 1/2) u [1, 3/2)");
  EXPECT_EQ(u.multiplicity(QVector{q("1/4")}), 2);
  EXPECT_EQ(u.multiplicity(QVector{q("3/4")}), 0);
}

// Multiplicity integrates to the volume over a period (Riemann sum oracle).
TEST(RegionsProperty, MultiplicityAveragesToVolume) {
  const auto s = intervals("[0, w1) u [2, 2 + w1/3)");
  const int n = 100000;
  long total = 0;
  for (int i = 0; i < n; ++i) {
    const long double x[1] = {(i + 0.5L) / n};
    total += s.multiplicity(std::span<const long double>(x, 1));
  }
  EXPECT_NEAR(static_cast<double>(total) / n, s.volume().eval(), 1e-4);
}

TEST(Regions, FourierTransformClosedForms) {
  const auto s = intervals("[0, 1)", AlgebraSpec::rationals());
  const double t[1] = {0.5};
  EXPECT_NEAR(std::abs(ft_indicator(s, t)), 2 / kPi, 1e-15);
  const double z[1] = {0};
  EXPECT_NEAR(ft_indicator(s, z).real(), 1, 1e-15);
  const double k[1] = {3};
  EXPECT_NEAR(std::abs(ft_indicator(s, k)), 0, 1e-15);
}

TEST(RegionsProperty, FourierHermitianSymmetry) {
  const auto s = intervals("[0, w1 - 1) u [1, 3 - w1)");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-10, 10);
  for (int i = 0; i < 50; ++i) {
    const double t[1] = {d(rng)};
    const double mt[1] = {-t[0]};
    EXPECT_NEAR(std::abs(ft_indicator(s, t) - std::conj(ft_indicator(s, mt))), 0, 1e-14);
  }
}

TEST(RegionsProperty, FourierParallelogramMatchesQuadrature) {
  const auto a = q2();
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> c(-8, 8);
  std::uniform_real_distribution<double> freq(-3, 3);
  for (int trial = 0; trial < 6; ++trial) {
    QMatrix e(a, 2, 2);
    do {
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) e(i, j) = QValue(a, std::vector<Rational>{Rational(c(rng), 8), Rational(c(rng), 16)});
    } while (exact_det(e).is_zero());
    const RegionSet s(2, {Piece{{q(a, "1/3"), q(a, "-w1")}, e}});
    const double t[2] = {freq(rng), freq(rng)};
    const auto oracle = quad_parallelogram(s.numeric_piece(0), t[0], t[1]);
    EXPECT_NEAR(std::abs(ft_indicator(s, t) - oracle), 0, 1e-9);
  }
}

TEST(Regions, TransformScalesVolume) {
  const auto s = intervals("[0, w1 - 1) u [1, 3 - w1)");
  QMatrix m(q2(), 1, 1);
  m(0, 0) = q("-w1");
  const auto t = transform_region(s, m);
  EXPECT_EQ(t.volume(), s.volume() * q("w1"));
  EXPECT_TRUE(t.contains({q("0")}));   // -w1 * 0
  EXPECT_FALSE(t.contains({q("-w1 * (w1 - 1)")}));
  const auto moved = translate_region(s, {q("1/2")});
  EXPECT_TRUE(moved.contains({q("1/2")}));
}

TEST(Regions, BoxContainment) {
  const auto a = q23();
  const auto b = RegionSet::box({q(a, "0"), q(a, "0")}, {q(a, "w1"), q(a, "1")});
  EXPECT_TRUE(b.contains({q(a, "1"), q(a, "0")}));
  EXPECT_FALSE(b.contains({q(a, "w1"), q(a, "1/2")}));
  EXPECT_EQ(b.volume(), q(a, "w1"));
  EXPECT_TRUE(b.axis_aligned());
}

TEST(Regions, EquidecompositionDetectsBadShift) {
  EquidecompCertificate c;
  c.alpha = {q("w1")};
  c.source = intervals("[0, w1 - 1) u [1, 3 - w1)");
  c.target = intervals("[0, w1 - 1) u [w1 - 1, 1)");
  c.shifts = {{q("0")}, {q("w1 - 2")}};
  EXPECT_TRUE(verify_equidecomposition(c).valid);
  c.shifts[1] = {q("w1/2 - 1")};
  const auto v = verify_equidecomposition(c);
  EXPECT_FALSE(v.valid);
  EXPECT_FALSE(v.violation.empty());
}
