#include "rscalc/exact_matrix.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "rscalc/error.h"

namespace rscalc {

namespace {

void require_same_shape(const QMatrix& a, const QMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
  }
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> row_reduce(QMatrix& m, int pivot_cols) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < pivot_cols && row < m.rows(); ++col) {
    int sel = -1;
    for (int i = row; i < m.rows(); ++i) {
      if (m(i, col) != 0) {
        sel = i;
        break;
      }
    }
    if (sel < 0) continue;
    if (sel != row) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
    }
    const Rational inv = 1 / m(row, col);
    for (int j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (int j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

QMatrix::QMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("QMatrix: negative size");
}

QMatrix::QMatrix(int rows, int cols, std::vector<Rational> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (rows < 0 || cols < 0 || data_.size() != static_cast<size_t>(rows) * cols) {
    throw std::invalid_argument("QMatrix: entry count does not match shape");
  }
}

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) {
      throw std::invalid_argument("QMatrix: ragged initializer");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

QMatrix QMatrix::identity(int n) {
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_eigen(const Eigen::MatrixXd& m) {
  QMatrix q(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < q.rows(); ++i) {
    for (int j = 0; j < q.cols(); ++j) q(i, j) = Rational(m(i, j));
  }
  return q;
}

QMatrix QMatrix::rationalized(const Eigen::MatrixXd& m, double tol) {
  QMatrix q(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < q.rows(); ++i) {
    for (int j = 0; j < q.cols(); ++j) q(i, j) = rationalize(m(i, j), tol);
  }
  return q;
}

Eigen::MatrixXd QMatrix::to_eigen() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).get_d();
  }
  return m;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

bool QMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q == 0; });
}

QMatrix QMatrix::block(int row, int col, int rows, int cols) const {
  if (row < 0 || col < 0 || row + rows > rows_ || col + cols > cols_) {
    throw std::out_of_range("QMatrix::block out of range");
  }
  QMatrix b(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) b(i, j) = (*this)(row + i, col + j);
  }
  return b;
}

void QMatrix::set_block(int row, int col, const QMatrix& value) {
  if (row < 0 || col < 0 || row + value.rows() > rows_ || col + value.cols() > cols_) {
    throw std::out_of_range("QMatrix::set_block out of range");
  }
  for (int i = 0; i < value.rows(); ++i) {
    for (int j = 0; j < value.cols(); ++j) (*this)(row + i, col + j) = value(i, j);
  }
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  require_same_shape(a, b, "QMatrix +");
  QMatrix r = a;
  for (size_t k = 0; k < r.data_.size(); ++k) r.data_[k] += b.data_[k];
  return r;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  require_same_shape(a, b, "QMatrix -");
  QMatrix r = a;
  for (size_t k = 0; k < r.data_.size(); ++k) r.data_[k] -= b.data_[k];
  return r;
}

QMatrix operator-(const QMatrix& a) {
  QMatrix r = a;
  for (auto& q : r.data_) q = -q;
  return r;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("QMatrix *: inner dimension mismatch");
  QMatrix r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

QMatrix operator*(const Rational& s, const QMatrix& a) {
  QMatrix r = a;
  for (auto& q : r.data_) q *= s;
  return r;
}

bool operator==(const QMatrix& a, const QMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

QMatrix hstack(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row count mismatch");
  QMatrix r(a.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(0, a.cols(), b);
  return r;
}

int exact_rank(const QMatrix& m) {
  QMatrix work = m;
  return static_cast<int>(row_reduce(work, work.cols()).size());
}

QMatrix exact_solve(const QMatrix& m, const QMatrix& rhs) {
  if (m.rows() != rhs.rows()) throw std::invalid_argument("exact_solve: row count mismatch");
  QMatrix aug = hstack(m, rhs);
  const std::vector<int> pivots = row_reduce(aug, m.cols());
  const int rank = static_cast<int>(pivots.size());
  for (int i = rank; i < aug.rows(); ++i) {
    for (int j = m.cols(); j < aug.cols(); ++j) {
      if (aug(i, j) != 0) throw SingularError("exact_solve: inconsistent linear system");
    }
  }
  QMatrix x(m.cols(), rhs.cols());
  for (int r = 0; r < rank; ++r) {
    for (int j = 0; j < rhs.cols(); ++j) x(pivots[r], j) = aug(r, m.cols() + j);
  }
  return x;
}

QMatrix exact_inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("exact_inverse: matrix not square");
  if (exact_rank(m) != m.rows()) throw SingularError("exact_inverse: singular matrix");
  return exact_solve(m, QMatrix::identity(m.rows()));
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace rscalc
