#pragma once

#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "rscalc/rational.h"

namespace rscalc {

/// Dense matrix of exact rationals. Used for plant data, gains and FIR taps
/// whenever a result must later be checked symbolically.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(int rows, int cols);
  QMatrix(int rows, int cols, std::vector<Rational> row_major);
  QMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static QMatrix identity(int n);
  static QMatrix zero(int rows, int cols) { return QMatrix(rows, cols); }
  /// Exact binary expansion of every double.
  static QMatrix from_eigen(const Eigen::MatrixXd& m);
  /// Continued-fraction approximation of every entry within `tol`.
  static QMatrix rationalized(const Eigen::MatrixXd& m, double tol);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  const Rational& operator()(int i, int j) const { return data_[i * cols_ + j]; }
  Rational& operator()(int i, int j) { return data_[i * cols_ + j]; }

  Eigen::MatrixXd to_eigen() const;
  QMatrix transpose() const;
  bool is_zero() const;

  QMatrix block(int row, int col, int rows, int cols) const;
  void set_block(int row, int col, const QMatrix& value);
  QMatrix col(int j) const { return block(0, j, rows_, 1); }

  friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a);
  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator*(const Rational& s, const QMatrix& a);
  friend bool operator==(const QMatrix& a, const QMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

QMatrix hstack(const QMatrix& a, const QMatrix& b);

/// Rank by exact Gaussian elimination.
int exact_rank(const QMatrix& m);

/// Some exact solution X of m X = rhs; throws SingularError when the
/// system is inconsistent. Free variables are set to zero.
QMatrix exact_solve(const QMatrix& m, const QMatrix& rhs);

/// Exact inverse; throws SingularError.
QMatrix exact_inverse(const QMatrix& m);

double spectral_radius(const Eigen::MatrixXd& m);

}  // namespace rscalc
