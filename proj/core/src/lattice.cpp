#include "quasilab/lattice.hpp"

namespace quasilab {

Lattice::Lattice(QMatrix basis) : basis_(std::move(basis)) {
  if (!basis_.square() || basis_.rows() < 2)
    throw PreconditionError("lattice basis must be square of size d+1 >= 2");
  det_ = exact_det(basis_);
  if (det_.is_zero()) throw PreconditionError("lattice basis is singular (exact det = 0)");
  try {
    inverse_ = adjugate(basis_) * det_.inverse();
    dual_basis_ = inverse_->transpose();
  } catch (const NotInvertible&) {
    // Singular in the algebra only: the real lattice exists, its dual is
    // not expressible.
  }
}

const QMatrix& Lattice::dual_basis() const {
  if (!dual_basis_)
    throw NotInvertible("det " + det_.to_string() + " is not invertible in the algebra");
  return *dual_basis_;
}

QVector Lattice::point(std::span<const Integer> coords) const {
  if (coords.size() != basis_.cols()) throw PreconditionError("lattice coordinate count mismatch");
  QVector v(basis_.rows(), QValue(algebra()));
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (coords[j] == 0) continue;
    const Rational c(coords[j]);
    for (std::size_t i = 0; i < basis_.rows(); ++i) v[i] += basis_(i, j) * c;
  }
  return v;
}

std::optional<std::vector<Integer>> Lattice::coordinates(const QVector& v) const {
  if (!inverse_) throw NotInvertible("lattice basis not invertible in the algebra");
  const QVector c = *inverse_ * v;
  std::vector<Integer> out;
  for (const auto& x : c) {
    if (!x.is_rational() || x.coeff(0).get_den() != 1) return std::nullopt;
    out.push_back(x.coeff(0).get_num());
  }
  return out;
}

void SpecialFormData::validate() const {
  const std::size_t d = alpha.size();
  if (d == 0 || beta.size() != d) throw PreconditionError("alpha and beta must have equal length d >= 1");
  const AlgebraPtr& alg = alpha[0].algebra();
  QVector first;
  first.emplace_back(alg, Rational(1));
  first.insert(first.end(), alpha.begin(), alpha.end());
  if (rational_rank(first) != d + 1)
    throw PreconditionError(
        "special form condition (i) violated: 1, alpha_1..alpha_d are not linearly independent over Q");
  QVector second = beta;
  second.push_back(QValue(alg, Rational(1)) + dot(beta, alpha));
  if (rational_rank(second) != d + 1)
    throw PreconditionError(
        "special form condition (ii) violated: beta_1..beta_d, 1 + beta^T alpha are not linearly "
        "independent over Q");
}

QVector special_point(const SpecialFormData& data, std::span<const Integer> m, const Integer& n) {
  const std::size_t d = data.alpha.size();
  const AlgebraPtr& alg = data.alpha[0].algebra();
  QValue am(alg);
  for (std::size_t i = 0; i < d; ++i) am += data.alpha[i] * Rational(m[i]);
  QVector p;
  p.reserve(d + 1);
  // (Id + beta alpha^T) m - beta n = m + beta (alpha^T m - n)
  const QValue shift = am - QValue(alg, Rational(n));
  for (std::size_t i = 0; i < d; ++i) p.push_back(QValue(alg, Rational(m[i])) + data.beta[i] * shift);
  p.push_back(QValue(alg, Rational(n)) - am);
  return p;
}

QVector special_dual_point(const SpecialFormData& data, std::span<const Integer> m, const Integer& n) {
  const std::size_t d = data.alpha.size();
  const AlgebraPtr& alg = data.alpha[0].algebra();
  QVector p;
  p.reserve(d + 1);
  for (std::size_t i = 0; i < d; ++i) p.push_back(QValue(alg, Rational(m[i])) + data.alpha[i] * Rational(n));
  QValue last = (QValue(alg, Rational(1)) + dot(data.beta, data.alpha)) * Rational(n);
  for (std::size_t i = 0; i < d; ++i) last += data.beta[i] * Rational(m[i]);
  p.push_back(std::move(last));
  return p;
}

SpecialLattices make_special_lattice(const QVector& alpha, const QVector& beta) {
  SpecialFormData data{alpha, beta};
  data.validate();
  const std::size_t d = alpha.size();
  const AlgebraPtr& alg = alpha[0].algebra();
  std::vector<QVector> gcols;
  std::vector<QVector> hcols;
  for (std::size_t j = 0; j <= d; ++j) {
    std::vector<Integer> m(d, Integer(0));
    Integer n(0);
    if (j < d) {
      m[j] = 1;
    } else {
      n = 1;
    }
    gcols.push_back(special_point(data, m, n));
    hcols.push_back(special_dual_point(data, m, n));
  }
  (void)alg;
  return SpecialLattices{std::move(data), Lattice(QMatrix::from_columns(gcols)),
                         Lattice(QMatrix::from_columns(hcols))};
}

Lattice dual_lattice(const Lattice& l) { return Lattice(l.dual_basis()); }

std::vector<std::vector<Integer>> integer_pairings(const Lattice& a, const Lattice& b) {
  const std::size_t n = a.ambient_dim();
  if (b.ambient_dim() != n) throw PreconditionError("pairing of lattices of different dimension");
  std::vector<std::vector<Integer>> out(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const QValue p = dot(a.generator(i), b.generator(j));
      if (!p.is_rational() || p.coeff(0).get_den() != 1)
        throw PreconditionError("pairing <g" + std::to_string(i) + ", g*" + std::to_string(j) +
                                "> = " + p.to_string() + " is not an integer");
      out[i][j] = p.coeff(0).get_num();
    }
  return out;
}

Lattice transform_lattice(const Lattice& l, const QMatrix& A, const QValue& B) {
  const std::size_t d = l.dim_d();
  if (A.rows() != d || A.cols() != d) throw PreconditionError("transform block A must be d x d");
  std::vector<QVector> cols;
  for (std::size_t j = 0; j <= d; ++j) {
    QVector g = l.generator(j);
    QVector x(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(d));
    QVector col = A * x;
    col.push_back(B * g[d]);
    cols.push_back(std::move(col));
  }
  return Lattice(QMatrix::from_columns(cols));
}

Reduction reduce_to_special(const Lattice& l) {
  const std::size_t d = l.dim_d();
  const QMatrix& M = l.dual_basis();
  const AlgebraPtr& alg = l.algebra();
  QMatrix a(alg, d, d);
  QVector b;
  QVector c;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) a(i, j) = M(i, j);
    b.push_back(M(i, d));
    c.push_back(M(d, i));
  }
  const QValue& e = M(d, d);
  QMatrix a_inv;
  try {
    a_inv = inverse(a);
  } catch (const NotInvertible&) {
    throw NotInvertible("reduce_to_special: block a of the dual basis is singular in the algebra");
  }
  const QVector a_inv_b = a_inv * b;
  const QValue schur = e - dot(c, a_inv_b);
  if (schur.is_zero()) throw NotInvertible("reduce_to_special: e - c^T a^{-1} b = 0");
  const QValue schur_inv = schur.inverse();

  QVector alpha = a_inv_b;
  QVector beta;
  for (const auto& ci : c) beta.push_back(ci * schur_inv);

  Reduction r{a.transpose(), schur, a_inv, schur_inv, make_special_lattice(alpha, beta), {}};

  const Lattice image = transform_lattice(l, r.A, r.B);
  r.change_of_basis.assign(d + 1, std::vector<Integer>(d + 1));
  for (std::size_t j = 0; j <= d; ++j) {
    const auto coords = r.special.gamma.coordinates(image.generator(j));
    if (!coords)
      throw PreconditionError("reduce_to_special: T(L) is not contained in Gamma (generator " +
                              std::to_string(j) + ")");
    for (std::size_t i = 0; i <= d; ++i) r.change_of_basis[i][j] = (*coords)[i];
  }
  // Unimodular change of basis <=> T(L) = Gamma.
  const QValue ratio = image.det() * r.special.gamma.det().inverse();
  if (!ratio.is_rational() || abs(ratio.coeff(0)) != 1)
    throw PreconditionError("reduce_to_special: T(L) is a proper sublattice of Gamma");
  return r;
}

}  // namespace quasilab
