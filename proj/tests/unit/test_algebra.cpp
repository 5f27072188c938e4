#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace quasilab;
using namespace quasilab::testing;

TEST(Algebra, SquareRootProducts) {
  const auto a = q23();
  EXPECT_EQ(q(a, "w1") * q(a, "w1"), q(a, "2"));
  EXPECT_EQ(q(a, "w1") * q(a, "w2"), q(a, "w3"));
  EXPECT_EQ(q(a, "w3") * q(a, "w3"), q(a, "6"));
  EXPECT_EQ(q(a, "w2") * q(a, "w3"), q(a, "3*w1"));
}

TEST(Algebra, ParseAndPrintRoundTrip) {
  const auto a = q23();
  for (const char* s : {"3/2 + w1 - 2*w2", "-w1/2", "2w3", "0.25", "0", "-7/3*w2 + w3"}) {
    const auto v = q(a, s);
    EXPECT_EQ(q(a, v.to_string()), v) << s;
  }
  EXPECT_EQ(q(a, "0.25"), q(a, "1/4"));
}

TEST(Algebra, ParseErrors) {
  const auto a = q23();
  EXPECT_THROW(q(a, "w9"), ParseError);
  EXPECT_THROW(q(a, "1 +"), ParseError);
  EXPECT_THROW(q(a, ""), ParseError);
}

TEST(Algebra, DeclaredTableFromText) {
  const auto a = AlgebraSpec::parse("basis w1 = 1.2599210498948731647692528\nproduct w1 w1 = w2\n"
                                    "basis w2 = 1.5874010519681994747517056\nproduct w1 w2 = 2\nproduct w2 w2 = 2*w1\n");
  EXPECT_EQ(q(a, "w1") * q(a, "w1") * q(a, "w1"), q(a, "2"));
  const auto again = AlgebraSpec::parse(a->to_text());
  EXPECT_TRUE(a->same_as(*again));
}

TEST(Algebra, InconsistentTableRejected) {
  EXPECT_THROW(AlgebraSpec::parse("basis w1 = 1.5\nproduct w1 w1 = 2\n"), PreconditionError);
}

TEST(Algebra, MixedAlgebrasRejected) {
  EXPECT_THROW(q(q2(), "w1") + q(AlgebraSpec::parse("basis w1 = sqrt 3\n"), "w1"), AlgebraMismatch);
}

TEST(Algebra, InverseAndFloor) {
  const auto a = q23();
  const auto x = q(a, "1 + w1 - w2/3");
  EXPECT_EQ(x * x.inverse(), q(a, "1"));
  EXPECT_THROW(q(a, "0").inverse(), NotInvertible);
  EXPECT_EQ(q(a, "w1").floor(), 1);
  EXPECT_EQ(q(a, "-w1").floor(), -2);
  EXPECT_EQ(q(a, "3").floor(), 3);
  EXPECT_EQ(q(a, "w1 + w2 - w3").sign(), std::signbit(std::sqrt(2.0) + std::sqrt(3.0) - std::sqrt(6.0)) ? -1 : 1);
}

// Exact sign and floor against a 256-bit embedding on values close to integers.
TEST(AlgebraProperty, SignAndFloorMatchHighPrecision) {
  const auto a = q23();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> c(-50000, 50000);
  for (int i = 0; i < 300; ++i) {
    QValue v(a, std::vector<Rational>{Rational(c(rng), 97), Rational(c(rng), 89), Rational(c(rng), 83),
                                      Rational(c(rng), 79)});
    const mpf_class hp = v.eval_hp();
    EXPECT_EQ(v.sign(), sgn(hp));
    mpf_class fl;
    mpf_floor(fl.get_mpf_t(), hp.get_mpf_t());
    EXPECT_EQ(Integer(fl), v.floor());
    // near-integer: v - round(v) + 1e-15 sized rational nudges
    const QValue w = v - QValue(a, Rational(v.floor()));
    EXPECT_GE(w.sign(), 0);
    EXPECT_LT(compare(w, q(a, "1")), 0);
  }
}

TEST(AlgebraProperty, FieldAxioms) {
  const auto a = q23();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> c(-30, 30);
  auto rnd = [&] {
    return QValue(a, std::vector<Rational>{Rational(c(rng), 7), Rational(c(rng), 5), Rational(c(rng), 3),
                                           Rational(c(rng), 2)});
  };
  for (int i = 0; i < 100; ++i) {
    const auto x = rnd();
    const auto y = rnd();
    const auto z = rnd();
    EXPECT_EQ(x * (y + z), x * y + x * z);
    EXPECT_EQ((x * y) * z, x * (y * z));
    EXPECT_EQ(x * y, y * x);
    EXPECT_NEAR((x * y).eval(), x.eval() * y.eval(), 1e-9 * (1 + std::abs(x.eval() * y.eval())));
    if (!y.is_zero()) EXPECT_EQ(x * y * y.inverse(), x);
  }
}

TEST(Algebra, ModuleMembership) {
  const auto a = q23();
  const QVector alpha{q(a, "w1"), q(a, "w2")};
  const auto w = module_membership({q(a, "3*w1 - 2"), q(a, "3*w2 + 5")}, alpha);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->n, 3);
  EXPECT_EQ(w->m[0], -2);
  EXPECT_EQ(w->m[1], 5);
  EXPECT_FALSE(module_membership({q(a, "w1"), q(a, "0")}, alpha));
  EXPECT_FALSE(module_membership({q(a, "w1/2"), q(a, "w2/2")}, alpha));
}

TEST(Algebra, MeasureFormAndRank) {
  const auto a = q23();
  const QVector alpha{q(a, "w1"), q(a, "w2")};
  const auto f = measure_form(q(a, "2 - w2"), alpha);
  ASSERT_TRUE(f);
  EXPECT_EQ((*f)[0], 2);
  EXPECT_EQ((*f)[1], 0);
  EXPECT_EQ((*f)[2], -1);
  EXPECT_FALSE(measure_form(q(a, "w3"), alpha));
  const std::vector<QValue> vals{q(a, "1"), q(a, "w1"), q(a, "2 + 3*w1")};
  EXPECT_EQ(rational_rank(vals), 2u);
}

TEST(Algebra, IntegerCombinationDependentGenerators) {
  const auto a = q23();
  const std::vector<QValue> gens{q(a, "w1"), q(a, "2*w1")};
  EXPECT_THROW(integer_combination(q(a, "w1"), gens), PreconditionError);
}
