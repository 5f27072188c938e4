#include "quasilab/linalg.hpp"

#include <numeric>
#include <sstream>

namespace quasilab {

QMatrix::QMatrix(AlgebraPtr algebra, std::size_t rows, std::size_t cols)
    : algebra_(std::move(algebra)), rows_(rows), cols_(cols), data_(rows * cols, QValue(algebra_)) {}

QMatrix QMatrix::identity(AlgebraPtr algebra, std::size_t n) {
  QMatrix m(algebra, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = QValue(algebra, Rational(1));
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rows) {
  if (rows.empty() || rows[0].empty()) throw PreconditionError("empty matrix");
  QMatrix m(rows[0][0].algebra(), rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw PreconditionError("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

QMatrix QMatrix::from_columns(const std::vector<QVector>& cols) {
  return from_rows(cols).transpose();
}

QVector QMatrix::column(std::size_t j) const {
  QVector v;
  v.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
  return v;
}

QVector QMatrix::row(std::size_t i) const {
  return QVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                 data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

QMatrix QMatrix::transpose() const {
  QMatrix t(algebra_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QMatrix QMatrix::minor_matrix(std::size_t skip_row, std::size_t skip_col) const {
  QMatrix m(algebra_, rows_ - 1, cols_ - 1);
  for (std::size_t i = 0, r = 0; i < rows_; ++i) {
    if (i == skip_row) continue;
    for (std::size_t j = 0, c = 0; j < cols_; ++j) {
      if (j == skip_col) continue;
      m(r, c++) = (*this)(i, j);
    }
    ++r;
  }
  return m;
}

Eigen::MatrixXd QMatrix::numeric() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).eval();
  return m;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_) throw PreconditionError("matrix product dimension mismatch");
  QMatrix c(a.algebra_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) {
      QValue s(a.algebra_);
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
        s += a(i, k) * b(k, j);
      }
      c(i, j) = std::move(s);
    }
  return c;
}

QMatrix operator*(const QMatrix& a, const QValue& s) {
  QMatrix c = a;
  for (auto& x : c.data_) x = x * s;
  return c;
}

QVector operator*(const QMatrix& a, const QVector& v) {
  if (a.cols_ != v.size()) throw PreconditionError("matrix-vector dimension mismatch");
  QVector out;
  out.reserve(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    QValue s(a.algebra_);
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(i, k).is_zero() || v[k].is_zero()) continue;
      s += a(i, k) * v[k];
    }
    out.push_back(std::move(s));
  }
  return out;
}

bool operator==(const QMatrix& a, const QMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string QMatrix::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ", ";
    os << quasilab::to_string(row(i));
  }
  os << ")";
  return os.str();
}

namespace {

QValue cofactor_det(const QMatrix& m, std::vector<std::size_t>& rows, std::size_t col) {
  const std::size_t n = m.cols();
  if (col == n) return QValue(m.algebra(), Rational(1));
  QValue det(m.algebra());
  int sign = 1;
  for (std::size_t idx = 0; idx < rows.size(); ++idx) {
    const std::size_t r = rows[idx];
    if (!m(r, col).is_zero()) {
      std::vector<std::size_t> rest;
      rest.reserve(rows.size() - 1);
      for (std::size_t t = 0; t < rows.size(); ++t)
        if (t != idx) rest.push_back(rows[t]);
      QValue term = m(r, col) * cofactor_det(m, rest, col + 1);
      if (sign > 0) {
        det += term;
      } else {
        det -= term;
      }
    }
    sign = -sign;
  }
  return det;
}

}  // namespace

QValue exact_det(const QMatrix& m) {
  if (!m.square()) throw PreconditionError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return QValue(AlgebraSpec::rationals(), Rational(1));
  if (n <= 5) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    return cofactor_det(m, rows, 0);
  }
  // Gaussian elimination; pivots must be invertible in the algebra.
  QMatrix a = m;
  QValue det(m.algebra(), Rational(1));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) return QValue(m.algebra());
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det = det * a(c, c);
    const QValue inv = a(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c).is_zero()) continue;
      const QValue f = a(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

QMatrix adjugate(const QMatrix& m) {
  if (!m.square()) throw PreconditionError("adjugate of a non-square matrix");
  const std::size_t n = m.rows();
  QMatrix adj(m.algebra(), n, n);
  if (n == 1) {
    adj(0, 0) = QValue(m.algebra(), Rational(1));
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      QValue c = exact_det(m.minor_matrix(i, j));
      adj(j, i) = ((i + j) % 2 == 0) ? c : -c;
    }
  return adj;
}

QMatrix inverse(const QMatrix& m) {
  const QValue det = exact_det(m);
  if (det.is_zero()) throw NotInvertible("singular matrix");
  return adjugate(m) * det.inverse();
}

QValue dot(const QVector& a, const QVector& b) {
  if (a.size() != b.size() || a.empty()) throw PreconditionError("dot: dimension mismatch");
  QValue s(a[0].algebra());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero() || b[i].is_zero()) continue;
    s += a[i] * b[i];
  }
  return s;
}

bool is_integer_matrix(const QMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const QValue& x = m(i, j);
      if (!x.is_rational() || x.coeff(0).get_den() != 1) return false;
    }
  return true;
}

}  // namespace quasilab
