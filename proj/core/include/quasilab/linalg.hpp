#pragma once

// Small dense matrices over an algebra. Basis matrices follow the
// column-generator convention everywhere: column j is generator j.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quasilab/algebra.hpp"

namespace quasilab {

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(AlgebraPtr algebra, std::size_t rows, std::size_t cols);

  static QMatrix identity(AlgebraPtr algebra, std::size_t n);
  /// Builds from rows; all entries must share one algebra.
  static QMatrix from_rows(const std::vector<QVector>& rows);
  static QMatrix from_columns(const std::vector<QVector>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  const AlgebraPtr& algebra() const { return algebra_; }

  QValue& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const QValue& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  QVector column(std::size_t j) const;
  QVector row(std::size_t i) const;
  QMatrix transpose() const;
  QMatrix minor_matrix(std::size_t skip_row, std::size_t skip_col) const;

  Eigen::MatrixXd numeric() const;

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator*(const QMatrix& a, const QValue& s);
  friend QVector operator*(const QMatrix& a, const QVector& v);
  friend bool operator==(const QMatrix& a, const QMatrix& b);

  std::string to_string() const;

 private:
  AlgebraPtr algebra_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<QValue> data_;
};

/// Exact determinant (cofactor expansion up to 5x5, elimination with
/// algebra inverses beyond).
QValue exact_det(const QMatrix& m);

QMatrix adjugate(const QMatrix& m);

/// adj(m) / det(m); throws NotInvertible when det is a zero divisor.
QMatrix inverse(const QMatrix& m);

QValue dot(const QVector& a, const QVector& b);

/// Exact integer matrix check: every entry is a rational integer.
bool is_integer_matrix(const QMatrix& m);

}  // namespace quasilab
