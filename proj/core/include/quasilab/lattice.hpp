#pragma once

// Lattices in R^d x R over an algebra, their duals, the special form
//   Gamma  = { ((Id + beta alpha^T) m - beta n,  n - alpha^T m) }
//   Gamma* = { (m + alpha n,  (1 + beta^T alpha) n + beta^T m) }
// and the linear reduction of a general lattice to that form.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quasilab/linalg.hpp"

namespace quasilab {

class Lattice {
 public:
  /// `basis` is (d+1) x (d+1), columns are generators. Throws when
  /// singular. The dual basis is computed eagerly when det is invertible.
  explicit Lattice(QMatrix basis);

  std::size_t dim_d() const { return basis_.rows() - 1; }
  std::size_t ambient_dim() const { return basis_.rows(); }
  const QMatrix& basis() const { return basis_; }
  const AlgebraPtr& algebra() const { return basis_.algebra(); }
  const QValue& det() const { return det_; }
  bool has_dual() const { return dual_basis_.has_value(); }
  /// Throws NotInvertible when det is a zero divisor.
  const QMatrix& dual_basis() const;

  QVector generator(std::size_t j) const { return basis_.column(j); }
  /// basis * coords.
  QVector point(std::span<const Integer> coords) const;

  /// Coordinates of v in this basis (exact); absent when some coordinate
  /// is not an integer.
  std::optional<std::vector<Integer>> coordinates(const QVector& v) const;

 private:
  QMatrix basis_;
  QValue det_;
  std::optional<QMatrix> dual_basis_;
  std::optional<QMatrix> inverse_;
};

/// alpha, beta in R^d for the special form.
struct SpecialFormData {
  QVector alpha;
  QVector beta;

  /// Exact rank checks over Q; throws PreconditionError naming the failed
  /// condition: (i) {1, alpha_1..alpha_d} independent; (ii) {beta_1..beta_d,
  /// 1 + beta^T alpha} independent.
  void validate() const;
};

struct SpecialLattices {
  SpecialFormData data;
  Lattice gamma;
  Lattice gamma_star;
};

SpecialLattices make_special_lattice(const QVector& alpha, const QVector& beta);

/// Gamma generator for (m, n) and Gamma* generator for (m, n), straight from
/// the displayed formulas.
QVector special_point(const SpecialFormData& data, std::span<const Integer> m, const Integer& n);
QVector special_dual_point(const SpecialFormData& data, std::span<const Integer> m, const Integer& n);

/// Lattice whose basis is the exact inverse transpose.
Lattice dual_lattice(const Lattice& l);

/// Exact integer pairings <generator_i(a), generator_j(b)>; throws when some
/// pairing is not a rational integer.
std::vector<std::vector<Integer>> integer_pairings(const Lattice& a, const Lattice& b);

struct Reduction {
  /// T(x, y) = (A x, B y) maps L onto Gamma.
  QMatrix A;
  QValue B;
  /// The dual-side map (a^{-1}, 1/(e - c^T a^{-1} b)) taking L* onto Gamma*.
  QMatrix dual_A;
  QValue dual_B;
  SpecialLattices special;
  /// Integer matrix U with T(basis of L) = basis of Gamma * U, |det U| = 1.
  std::vector<std::vector<Integer>> change_of_basis;
};

/// Reduces a general-position lattice to special form following the
/// block decomposition of its dual basis M = [[a, b], [c^T, e]].
Reduction reduce_to_special(const Lattice& l);

/// Applies (x, y) -> (A x, B y) to each generator.
Lattice transform_lattice(const Lattice& l, const QMatrix& A, const QValue& B);

}  // namespace quasilab
