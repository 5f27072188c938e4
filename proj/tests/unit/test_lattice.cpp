#include <gtest/gtest.h>

#include "helpers.hpp"
#include "quasilab/lattice.hpp"

using namespace quasilab;
using namespace quasilab::testing;

namespace {

std::vector<Integer> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Lattice, SpecialFormOneDimensional) {
  const auto a = q2();
  const auto lat = make_special_lattice({q(a, "w1")}, {q(a, "1")});
  // generator for (m, n) = (m + (w1 m - n), n - w1 m)
  const auto m = ints({1});
  EXPECT_EQ(special_point(lat.data, m, Integer(0)), (QVector{q(a, "1 + w1"), q(a, "-w1")}));
  EXPECT_EQ(special_point(lat.data, ints({0}), Integer(1)), (QVector{q(a, "-1"), q(a, "1")}));
  const auto det = exact_det(lat.gamma.basis());
  EXPECT_TRUE(det == q(a, "1") || det == q(a, "-1"));
}

TEST(Lattice, DualIsInverseTranspose) {
  const auto a = q23();
  const QVector alpha{q(a, "w1"), q(a, "w2")};
  const QVector beta{q(a, "1"), q(a, "w1")};
  const auto lat = make_special_lattice(alpha, beta);
  const auto dual = dual_lattice(lat.gamma);
  // both bases span the same lattice: integer coordinates both ways
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_TRUE(dual.coordinates(lat.gamma_star.generator(j)).has_value());
    EXPECT_TRUE(lat.gamma_star.coordinates(dual.generator(j)).has_value());
  }
  const auto p = integer_pairings(lat.gamma, lat.gamma_star);
  ASSERT_EQ(p.size(), 3u);
  for (const auto& row : p) EXPECT_EQ(row.size(), 3u);
}

TEST(LatticeProperty, DualPointFormulaMatchesDualBasis) {
  const auto a = q23();
  const QVector alpha{q(a, "w1"), q(a, "w2")};
  const QVector beta{q(a, "1"), q(a, "w1")};
  const auto lat = make_special_lattice(alpha, beta);
  for (long m1 = -2; m1 <= 2; ++m1)
    for (long m2 = -2; m2 <= 2; ++m2)
      for (long n = -2; n <= 2; ++n) {
        const auto m = ints({m1, m2});
        const auto p = special_point(lat.data, m, Integer(n));
        const auto ps = special_dual_point(lat.data, m, Integer(n));
        EXPECT_TRUE(lat.gamma.coordinates(p).has_value());
        EXPECT_TRUE(lat.gamma_star.coordinates(ps).has_value());
        // pairing with every primal generator is an integer
        for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(dot(ps, lat.gamma.generator(j)).is_rational());
      }
}

TEST(Lattice, RankChecksNameTheCondition) {
  const auto a = q23();
  try {
    make_special_lattice({q(a, "1/2")}, {q(a, "1")});
    FAIL() << "rational alpha accepted";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("(i)"), std::string::npos) << e.what();
  }
  try {
    // 1 + beta alpha = 1 + w1 * w1/2... choose beta with beta and 1 + beta alpha dependent
    make_special_lattice({q(a, "w1")}, {q(a, "0")});
    FAIL() << "degenerate beta accepted";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("(ii)"), std::string::npos) << e.what();
  }
}

TEST(Lattice, SingularBasisRejected) {
  const auto a = q2();
  EXPECT_THROW(Lattice(QMatrix::from_rows({{q(a, "1"), q(a, "2")}, {q(a, "2"), q(a, "4")}})), PreconditionError);
}

TEST(Lattice, ReductionRoundTrip) {
  const auto a = q2();
  const auto lat = make_special_lattice({q(a, "w1")}, {q(a, "1")});
  QMatrix scale = QMatrix::identity(a, 2);
  scale(0, 0) = q(a, "2");
  const Lattice l(scale * lat.gamma.basis());
  const auto r = reduce_to_special(l);
  EXPECT_EQ(r.A(0, 0), q(a, "1/2"));
  EXPECT_EQ(r.B, q(a, "1"));
  EXPECT_EQ(r.special.data.alpha[0], q(a, "w1"));
  EXPECT_EQ(r.special.data.beta[0], q(a, "1"));
  const auto mapped = transform_lattice(l, r.A, r.B);
  for (std::size_t j = 0; j < 2; ++j) EXPECT_TRUE(r.special.gamma.coordinates(mapped.generator(j)).has_value());
  // dual-side map carries L* onto Gamma*
  const auto dual_mapped = transform_lattice(dual_lattice(l), r.dual_A, r.dual_B);
  for (std::size_t j = 0; j < 2; ++j)
    EXPECT_TRUE(r.special.gamma_star.coordinates(dual_mapped.generator(j)).has_value());
}

TEST(LatticeProperty, ReductionOfScaledSpecialLattices) {
  const auto a = q23();
  const QVector alpha{q(a, "w1"), q(a, "w2")};
  const QVector beta{q(a, "1"), q(a, "w2")};
  const auto lat = make_special_lattice(alpha, beta);
  for (const char* s : {"3", "1/2", "w1"}) {
    QMatrix t = QMatrix::identity(a, 3);
    t(0, 0) = q(a, s);
    t(1, 1) = q(a, "2");
    t(2, 2) = q(a, "5");
    const Lattice l(t * lat.gamma.basis());
    const auto r = reduce_to_special(l);
    const auto mapped = transform_lattice(l, r.A, r.B);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(r.special.gamma.coordinates(mapped.generator(j)).has_value()) << s;
  }
}
