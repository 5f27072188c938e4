#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "quasilab/riesz.hpp"

using namespace quasilab;
using namespace quasilab::testing;

namespace {

long double frac(long double x) { return x - std::floor(x); }

// One-dimensional points grouped in blocks: (value, block) pairs.
PointSet blocked(const std::vector<std::pair<double, std::int64_t>>& pts) {
  PointSet p;
  p.tag_width = 1;
  p.block_tag = 0;
  p.kind = PointKind::dual_model_set;
  for (const auto& [x, n] : pts) p.push(std::span<const double>(&x, 1), std::span<const std::int64_t>(&n, 1));
  return p;
}

PointSet one_per_block(long lo, long hi, double (*f)(long)) {
  std::vector<std::pair<double, std::int64_t>> pts;
  for (long n = lo; n <= hi; ++n) pts.emplace_back(f(n), n);
  return blocked(pts);
}

}  // namespace

TEST(Riesz, FractionalSequenceEnumeration) {
  const auto p = dual_model_points({q("w1")}, {q("1")}, intervals("[0, 1)"), -100, 100);
  const auto e = enumerate_blocks(p, -100, 100);
  ASSERT_EQ(e.size(), 201u);
  EXPECT_EQ(e.j_first, -100);
  for (std::int64_t n = -100; n <= 100; ++n) EXPECT_EQ(e.s_at(n), n);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const long j = e.j_first + static_cast<long>(i);
    EXPECT_NEAR(e.lambda[i], static_cast<double>(j + frac(j * std::sqrt(2.0L))), 1e-12);
  }
  EXPECT_EQ(e.max_block(), 1);
}

TEST(Riesz, EmptyAndDoubleBlocks) {
  const auto p = blocked({{-2.0, -2}, {0.7, 0}, {0.2, 0}, {3.1, 3}, {3.5, 3}});
  const auto e = enumerate_blocks(p, -2, 3);
  ASSERT_EQ(e.size(), 5u);
  EXPECT_EQ(e.s_at(0), 0);
  EXPECT_EQ(e.s_at(-2), -1);
  EXPECT_EQ(e.s_at(1), 2);
  EXPECT_EQ(e.s_at(3), 2);
  EXPECT_EQ(e.j_first, -1);
  // ascending within a block
  EXPECT_EQ(e.lambda, (std::vector<double>{-2.0, 0.2, 0.7, 3.1, 3.5}));
  EXPECT_EQ(e.rank, (std::vector<std::int64_t>{0, 0, 1, 0, 1}));
  EXPECT_EQ(e.max_block(), 2);
  EXPECT_THROW(enumerate_blocks(p, 1, 3), PreconditionError);
}

TEST(Riesz, DeltaOfIntegersIsZero) {
  const auto p = one_per_block(-50, 50, [](long n) { return static_cast<double>(n); });
  const auto e = enumerate_blocks(p);
  const std::vector<std::size_t> w{1, 4};
  const auto m = delta_and_means(e, q("1"), w, -20, 20);
  for (double d : m.delta.delta) EXPECT_DOUBLE_EQ(d, 0.0);
  EXPECT_DOUBLE_EQ(m.c_hat, 0.0);
  for (const auto& row : m.rows) EXPECT_DOUBLE_EQ(row.sup_deviation, 0.0);
}

TEST(Riesz, WindowDeviationBruteForce) {
  const auto p = dual_model_points({q("w1")}, {q("1")}, intervals("[0, w1 - 1) u [1, 3 - w1)"), -200, 200);
  const auto e = enumerate_blocks(p, -200, 200);
  const auto d = delta_sequence(e, q("3 - 2*w1"));
  const double c = 0.1;
  for (std::size_t n : {1u, 3u, 17u}) {
    const auto row = window_deviation(d, c, n, -30, 30);
    double best = 0;
    for (long k = -30; k <= 30; ++k) {
      double sum = 0;
      for (long j = k + 1; j <= k + static_cast<long>(n); ++j) sum += d.at(j);
      best = std::max(best, std::abs(sum / n - c));
    }
    EXPECT_NEAR(row.sup_deviation, best, 1e-12) << n;
  }
}

TEST(Riesz, AvdoninUniformSequenceAtFirstWindow) {
  // lambda_j = j / |I| with |I| = 2
  const auto p = one_per_block(-100, 100, [](long n) { return n / 2.0; });
  const auto m = delta_and_means(enumerate_blocks(p), q("2"), std::vector<std::size_t>{}, -40, 40);
  const auto v = avdonin_check(m, q("2"), 16);
  EXPECT_TRUE(v.satisfied);
  EXPECT_EQ(v.window, 1u);
  EXPECT_DOUBLE_EQ(v.threshold, 0.125);
  EXPECT_DOUBLE_EQ(v.margin, 0.125);
}

TEST(Riesz, AvdoninAlternatingNeedsTwo) {
  const auto p = one_per_block(-100, 100, [](long n) { return n + (n % 2 ? -0.3 : 0.3); });
  const auto m = delta_and_means(enumerate_blocks(p), q("1"), std::vector<std::size_t>{}, -40, 40);
  const auto v = avdonin_check(m, q("1"), 16);
  EXPECT_TRUE(v.satisfied);
  EXPECT_EQ(v.window, 2u);
  EXPECT_NEAR(v.min_gap, 0.4, 1e-12);
}

TEST(RieszProperty, AvdoninIsTranslationInvariant) {
  const auto base = dual_model_points({q("w1")}, {q("1")}, intervals("[0, 1)"), -300, 300);
  auto shifted = base;
  for (auto& x : shifted.coords) x += 0.37;
  auto verdict = [](const PointSet& p) {
    const auto m = delta_and_means(enumerate_blocks(p, -300, 300), q("1"), std::vector<std::size_t>{}, -100, 100);
    return avdonin_check(m, q("1"), 32);
  };
  const auto a = verdict(base);
  const auto b = verdict(shifted);
  EXPECT_EQ(a.satisfied, b.satisfied);
  EXPECT_EQ(a.window, b.window);
  EXPECT_NEAR(a.sup_deviation, b.sup_deviation, 1e-9);
  EXPECT_NEAR(b.c_hat - a.c_hat, 0.37, 1e-9);
}

TEST(Riesz, AvdoninRejectsCoincidentPoints) {
  const auto p = blocked({{0.0, 0}, {0.0, 0}, {1.0, 1}});
  const auto m = delta_and_means(enumerate_blocks(p), q("1"), std::vector<std::size_t>{}, 0, 0);
  EXPECT_THROW(avdonin_check(m, q("1"), 4), PreconditionError);
}

TEST(Riesz, GramOfIntegersIsIdentity) {
  const auto p = one_per_block(-10, 10, [](long n) { return static_cast<double>(n); });
  const auto g = gram_matrix(p, intervals("[0, 1)"));
  EXPECT_LT((g - Eigen::MatrixXcd::Identity(21, 21)).cwiseAbs().maxCoeff(), 1e-12);
  const auto e = extreme_eigs(g);
  EXPECT_NEAR(e.min, 1.0, 1e-12);
  EXPECT_NEAR(e.max, 1.0, 1e-12);
}

TEST(Riesz, GramHalfSpacedPair) {
  const auto p = one_per_block(0, 1, [](long n) { return n / 2.0; });
  const auto s = intervals("[0, 1)");
  const auto g = gram_matrix(p, s);
  EXPECT_NEAR(std::abs(g(0, 1)), 2 / std::numbers::pi, 1e-12);
  EXPECT_NEAR(std::abs(g(0, 1) - std::conj(g(1, 0))), 0.0, 1e-15);
  const auto e = extreme_eigs(g);
  EXPECT_NEAR(e.min, 1 - 2 / std::numbers::pi, 1e-12);
  EXPECT_NEAR(e.max, 1 + 2 / std::numbers::pi, 1e-12);
}

TEST(Riesz, GramDiagonalIsVolume) {
  const auto p = dual_model_points({q("w1")}, {q("1")}, intervals("[0, 1)"), -8, 8);
  const auto s = intervals("[0, w1 - 1) u [1, 3/2)");
  const auto g = gram_matrix(p, s);
  const double vol = s.volume().eval();
  for (Eigen::Index i = 0; i < g.rows(); ++i) EXPECT_NEAR(g(i, i).real(), vol, 1e-12);
}

TEST(Riesz, ExtremeEigsDiagonalAndNonHermitian) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 0.2;
  d(1, 1) = 5.0;
  const auto e = extreme_eigs(d);
  EXPECT_DOUBLE_EQ(e.min, 0.2);
  EXPECT_DOUBLE_EQ(e.max, 5.0);
  d(0, 1) = std::complex<double>(0, 1);
  EXPECT_THROW(extreme_eigs(d), PreconditionError);
}

TEST(RieszProperty, BoundTraceIsMonotone) {
  const auto p = dual_model_points({q("w1")}, {q("1")}, intervals("[0, 1)"), -60, 60);
  const std::vector<double> radii{5, 10, 20, 40};
  const auto rows = riesz_bound_trace(p, radii, intervals("[0, 1/2)"));
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].size, rows[i - 1].size);
    EXPECT_LE(rows[i].lambda_min, rows[i - 1].lambda_min + 1e-10);
    EXPECT_GE(rows[i].lambda_max, rows[i - 1].lambda_max - 1e-10);
  }
}

TEST(Riesz, DualityMeasureMismatchWarns) {
  DualityOptions opts;
  opts.radii = {10, 20};
  opts.avdonin_windows = 8;
  opts.disc_n = 1000;
  const auto r = duality_experiment({q("w1")}, {q("1")}, intervals("[0, 1)"), intervals("[0, 1/2)"), opts);
  EXPECT_FALSE(r.measures_match);
  EXPECT_FALSE(r.warning.empty());
  EXPECT_EQ(r.primal.size(), 2u);
  EXPECT_EQ(r.dual.size(), 2u);
  EXPECT_GT(r.primal_points, 0u);
  EXPECT_GT(r.dual_points, 0u);
}

TEST(Riesz, DualityMatchedMeasures) {
  DualityOptions opts;
  opts.radii = {10, 20};
  opts.avdonin_windows = 16;
  opts.disc_n = 1000;
  const auto r = duality_experiment({q("w1")}, {q("1")}, intervals("[0, 1)"), intervals("[0, 1)"), opts);
  EXPECT_TRUE(r.measures_match);
  EXPECT_TRUE(r.warning.empty());
  EXPECT_NEAR(r.dual_disc_max, 0.0, 1e-9);
  EXPECT_TRUE(r.avdonin.satisfied);
}
