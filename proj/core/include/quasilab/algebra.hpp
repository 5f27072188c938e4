#pragma once

// Exact arithmetic in a user-declared commutative Q-algebra with basis
// w0 = 1, w1, ..., wk and a numeric embedding.
//
// The algebra is an axiom: linear independence of the embedded values over
// Q is never proven, only the product table's consistency with the
// embedding is checked.

#include <gmpxx.h>

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quasilab/error.hpp"

namespace quasilab {

using Integer = mpz_class;
using Rational = mpq_class;

/// Precision (bits) of the high-precision embedding used for sign decisions.
inline constexpr unsigned kEmbeddingBits = 256;

/// Table consistency tolerance: |num(wi)num(wj) - num(wi wj)| <= this.
inline constexpr double kEmbeddingTolerance = 1e-9;

class AlgebraSpec;
using AlgebraPtr = std::shared_ptr<const AlgebraSpec>;

class AlgebraSpec : public std::enable_shared_from_this<AlgebraSpec> {
 public:
  struct Basis {
    std::string name;
    mpf_class value;
    /// Set when declared as `sqrt N`; used to auto-derive products.
    std::optional<long> radicand;
  };

  /// Builds and validates an algebra. `basis` excludes w0. `table[i][j]`
  /// is the coefficient vector (length k+1) of wi*wj, for 0 <= i,j <= k.
  static AlgebraPtr create(std::vector<Basis> basis,
                           std::vector<std::vector<std::vector<Rational>>> table);

  /// Parses the line format
  ///   basis w1 = sqrt 2
  ///   basis w2 = 1.2599210498948731647672106
  ///   product w1 w2 = w3
  /// `#` starts a comment. Products among `sqrt` declarations are derived
  /// when they are rational multiples of a declared sqrt element.
  static AlgebraPtr parse(std::string_view text);
  static AlgebraPtr parse_file(const std::string& path);

  /// Q itself (only w0).
  static AlgebraPtr rationals();
  /// Q(sqrt2, sqrt3) with w1 = sqrt2, w2 = sqrt3, w3 = sqrt6.
  static AlgebraPtr sqrt2_sqrt3();

  std::size_t dim() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  double numeric(std::size_t i) const { return numeric_d_.at(i); }
  long double numeric_ld(std::size_t i) const { return numeric_ld_.at(i); }
  const mpf_class& numeric_hp(std::size_t i) const { return numeric_hp_.at(i); }

  const std::vector<Rational>& product(std::size_t i, std::size_t j) const {
    return table_[i * dim() + j];
  }

  /// Re-serializes in the text format accepted by parse().
  std::string to_text() const;

  bool same_as(const AlgebraSpec& other) const;

 private:
  AlgebraSpec() = default;

  std::vector<std::string> names_;
  std::vector<std::optional<long>> radicands_;
  std::vector<mpf_class> numeric_hp_;
  std::vector<double> numeric_d_;
  std::vector<long double> numeric_ld_;
  std::vector<std::vector<Rational>> table_;  // row-major dim x dim
};

enum class ArithOp { add, sub, mul };

/// Element of an algebra, stored as canonical rational coefficients.
class QValue {
 public:
  QValue() = default;
  explicit QValue(AlgebraPtr algebra);
  QValue(AlgebraPtr algebra, const Rational& r);
  QValue(AlgebraPtr algebra, std::vector<Rational> coeffs);

  static QValue basis(AlgebraPtr algebra, std::size_t i);

  /// Literal syntax: "3/2 + 1*w1 - 2*w2", "w1", "-w1/2", "2w3", "0.25".
  static QValue parse(AlgebraPtr algebra, std::string_view text);

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const Rational& coeff(std::size_t i) const { return coeffs_.at(i); }

  bool is_zero() const;
  bool is_rational() const;

  double eval() const;
  long double eval_ld() const;
  mpf_class eval_hp() const;

  /// Exact sign; throws AmbiguousBoundary when a nonzero value embeds
  /// below the 256-bit resolution (the declared algebra is inconsistent).
  int sign() const;
  Integer floor() const;
  QValue frac() const { return *this - QValue(algebra_, Rational(floor())); }

  /// Multiplicative inverse by solving the multiplication-matrix system;
  /// throws NotInvertible for zero divisors.
  QValue inverse() const;

  QValue operator-() const;
  QValue& operator+=(const QValue& o);
  QValue& operator-=(const QValue& o);
  QValue& operator*=(const QValue& o);
  QValue& operator*=(const Rational& r);

  friend QValue operator+(QValue a, const QValue& b) { return a += b; }
  friend QValue operator-(QValue a, const QValue& b) { return a -= b; }
  friend QValue operator*(const QValue& a, const QValue& b);
  friend QValue operator*(QValue a, const Rational& r) { return a *= r; }
  friend QValue operator*(const Rational& r, QValue a) { return a *= r; }

  /// Exact coefficient equality; never a numeric comparison.
  friend bool operator==(const QValue& a, const QValue& b);

  std::string to_string() const;

 private:
  void require_same(const QValue& o) const;

  AlgebraPtr algebra_;
  std::vector<Rational> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const QValue& v);

QValue qval_arith(const QValue& a, const QValue& b, ArithOp op);
inline double qval_eval(const QValue& a) { return a.eval(); }

/// Three-way exact comparison (sign of a - b).
int compare(const QValue& a, const QValue& b);

using QVector = std::vector<QValue>;

/// Witness for v = n*alpha + m.
struct ModuleWitness {
  Integer n;
  std::vector<Integer> m;
};

/// Decides v in Z*alpha + Z^d exactly. Absent when no integer solution
/// exists. Throws PreconditionError when the coefficient system is
/// rank-deficient (the declared alpha does not pin down n).
std::optional<ModuleWitness> module_membership(const QVector& v, const QVector& alpha);

/// Integer solution x of target = sum_i x_i * generators[i], exact.
/// Throws PreconditionError when the generators are Q-dependent.
std::optional<std::vector<Integer>> integer_combination(const QValue& target,
                                                        std::span<const QValue> generators);

/// gamma = n0 + n1 alpha1 + ... + nd alphad with integers n, or absent.
std::optional<std::vector<Integer>> measure_form(const QValue& gamma, const QVector& alpha);

/// Rank over Q of the coefficient vectors of the given values.
std::size_t rational_rank(std::span<const QValue> values);

/// Numeric embedding of a vector.
std::vector<double> eval(const QVector& v);

QVector parse_qvector(const AlgebraPtr& algebra, std::string_view text);
std::string to_string(const QVector& v);

}  // namespace quasilab
