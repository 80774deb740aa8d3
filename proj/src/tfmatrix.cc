#include "rscalc/tfmatrix.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rscalc/error.h"

namespace rscalc {

// ---------------------------------------------------------------- SignalSpace

SignalSpace::SignalSpace(std::vector<SignalBlock> blocks) : blocks_(std::move(blocks)) {
  std::set<std::string> seen;
  for (const auto& b : blocks_) {
    if (b.dim <= 0) throw std::invalid_argument("signal block '" + b.name + "' must have positive dimension");
    if (!seen.insert(b.name).second) {
      throw std::invalid_argument("duplicate signal block name '" + b.name + "'");
    }
    total_ += b.dim;
  }
}

bool SignalSpace::contains(const std::string& name) const {
  return std::any_of(blocks_.begin(), blocks_.end(), [&](const SignalBlock& b) { return b.name == name; });
}

int SignalSpace::index(const std::string& name) const {
  for (size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].name == name) return static_cast<int>(k);
  }
  throw std::invalid_argument("unknown signal block '" + name + "' in " + to_string(*this));
}

int SignalSpace::offset(const std::string& name) const {
  const int k = index(name);
  int off = 0;
  for (int i = 0; i < k; ++i) off += blocks_[i].dim;
  return off;
}

int SignalSpace::dim(const std::string& name) const { return blocks_[index(name)].dim; }

SignalSpace SignalSpace::concat(const SignalSpace& other) const {
  std::vector<SignalBlock> all = blocks_;
  all.insert(all.end(), other.blocks_.begin(), other.blocks_.end());
  return SignalSpace(std::move(all));
}

std::string to_string(const SignalSpace& s) {
  std::string out = "{";
  for (size_t k = 0; k < s.blocks().size(); ++k) {
    if (k) out += ", ";
    out += s.blocks()[k].name + ":" + std::to_string(s.blocks()[k].dim);
  }
  return out + "}";
}

// ---------------------------------------------------------------- TFMatrix

TFMatrix::TFMatrix(SignalSpace rows, SignalSpace cols)
    : rows_(std::move(rows)),
      cols_(std::move(cols)),
      entries_(static_cast<size_t>(rows_.total()) * cols_.total()) {}

TFMatrix::TFMatrix(SignalSpace rows, SignalSpace cols, std::vector<RatFun> row_major)
    : rows_(std::move(rows)), cols_(std::move(cols)), entries_(std::move(row_major)) {
  if (entries_.size() != static_cast<size_t>(rows_.total()) * cols_.total()) {
    throw std::invalid_argument("TFMatrix: entry count does not match signal spaces");
  }
}

TFMatrix TFMatrix::identity(const SignalSpace& space) {
  TFMatrix m(space, space);
  for (int i = 0; i < space.total(); ++i) m(i, i) = RatFun(1);
  return m;
}

TFMatrix TFMatrix::constant(const SignalSpace& rows, const SignalSpace& cols, const QMatrix& q) {
  if (q.rows() != rows.total() || q.cols() != cols.total()) {
    throw std::invalid_argument("TFMatrix::constant: shape does not match signal spaces");
  }
  TFMatrix m(rows, cols);
  for (int i = 0; i < q.rows(); ++i) {
    for (int j = 0; j < q.cols(); ++j) m(i, j) = RatFun(q(i, j));
  }
  return m;
}

TFMatrix TFMatrix::embed(const SignalSpace& space, const std::string& name) {
  const int off = space.offset(name);
  const int d = space.dim(name);
  TFMatrix m(space, SignalSpace::single(name, d));
  for (int k = 0; k < d; ++k) m(off + k, k) = RatFun(1);
  return m;
}

TFMatrix TFMatrix::stack(const std::vector<std::vector<TFMatrix>>& grid) {
  if (grid.empty() || grid.front().empty()) throw std::invalid_argument("TFMatrix::stack: empty grid");
  SignalSpace rows = grid.front().front().rows();
  for (size_t i = 1; i < grid.size(); ++i) rows = rows.concat(grid[i].front().rows());
  SignalSpace cols = grid.front().front().cols();
  for (size_t j = 1; j < grid.front().size(); ++j) cols = cols.concat(grid.front()[j].cols());
  TFMatrix m(rows, cols);
  int row_off = 0;
  for (const auto& grid_row : grid) {
    if (grid_row.size() != grid.front().size()) throw std::invalid_argument("TFMatrix::stack: ragged grid");
    int col_off = 0;
    const int h = grid_row.front().num_rows();
    for (size_t j = 0; j < grid_row.size(); ++j) {
      const TFMatrix& b = grid_row[j];
      if (b.rows() != grid_row.front().rows() || b.cols() != grid.front()[j].cols()) {
        throw std::invalid_argument("TFMatrix::stack: block spaces do not line up");
      }
      for (int r = 0; r < h; ++r) {
        for (int c = 0; c < b.num_cols(); ++c) m(row_off + r, col_off + c) = b(r, c);
      }
      col_off += b.num_cols();
    }
    row_off += h;
  }
  return m;
}

TFMatrix TFMatrix::block(const std::string& row_name, const std::string& col_name) const {
  const int r0 = rows_.offset(row_name), c0 = cols_.offset(col_name);
  const int h = rows_.dim(row_name), w = cols_.dim(col_name);
  TFMatrix b(SignalSpace::single(row_name, h), SignalSpace::single(col_name, w));
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  }
  return b;
}

TFMatrix TFMatrix::column_block(const std::string& col_name) const {
  const int c0 = cols_.offset(col_name), w = cols_.dim(col_name);
  TFMatrix b(rows_, SignalSpace::single(col_name, w));
  for (int i = 0; i < num_rows(); ++i) {
    for (int j = 0; j < w; ++j) b(i, j) = (*this)(i, c0 + j);
  }
  return b;
}

TFMatrix TFMatrix::row_block(const std::string& row_name) const {
  const int r0 = rows_.offset(row_name), h = rows_.dim(row_name);
  TFMatrix b(SignalSpace::single(row_name, h), cols_);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < num_cols(); ++j) b(i, j) = (*this)(r0 + i, j);
  }
  return b;
}

void TFMatrix::set_block(const std::string& row_name, const std::string& col_name, const TFMatrix& value) {
  const int r0 = rows_.offset(row_name), c0 = cols_.offset(col_name);
  if (value.num_rows() != rows_.dim(row_name) || value.num_cols() != cols_.dim(col_name)) {
    throw std::invalid_argument("TFMatrix::set_block: block shape mismatch");
  }
  for (int i = 0; i < value.num_rows(); ++i) {
    for (int j = 0; j < value.num_cols(); ++j) (*this)(r0 + i, c0 + j) = value(i, j);
  }
}

TFMatrix TFMatrix::relabeled(const SignalSpace& rows, const SignalSpace& cols) const {
  if (rows.total() != num_rows() || cols.total() != num_cols()) {
    throw std::invalid_argument("TFMatrix::relabeled: total dimensions differ");
  }
  return TFMatrix(rows, cols, entries_);
}

bool TFMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const RatFun& r) { return r.is_zero(); });
}

TFMatrix TFMatrix::transpose() const {
  TFMatrix t(cols_, rows_);
  for (int i = 0; i < num_rows(); ++i) {
    for (int j = 0; j < num_cols(); ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

TFMatrix TFMatrix::inverse() const {
  if (!is_square()) throw std::invalid_argument("TFMatrix::inverse: matrix is not square");
  const int n = num_rows();
  std::vector<std::vector<RatFun>> left(n, std::vector<RatFun>(n));
  std::vector<std::vector<RatFun>> right(n, std::vector<RatFun>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) left[i][j] = (*this)(i, j);
    right[i][i] = RatFun(1);
  }
  std::vector<bool> col_used(n, false);
  std::vector<int> pivot_col(n);
  for (int k = 0; k < n; ++k) {
    // Full pivoting on the nonzero entry of lowest total degree keeps the
    // intermediate degrees small.
    int best_r = -1, best_c = -1, best_size = std::numeric_limits<int>::max();
    for (int i = k; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (col_used[j] || left[i][j].is_zero()) continue;
        const int size = left[i][j].num().degree() + left[i][j].den().degree();
        if (size < best_size) {
          best_size = size;
          best_r = i;
          best_c = j;
        }
      }
    }
    if (best_r < 0) throw SingularError("transfer matrix is singular (determinant identically zero)");
    std::swap(left[k], left[best_r]);
    std::swap(right[k], right[best_r]);
    col_used[best_c] = true;
    pivot_col[k] = best_c;
    const RatFun inv = left[k][best_c].inverse();
    for (int j = 0; j < n; ++j) {
      if (!left[k][j].is_zero()) left[k][j] *= inv;
      if (!right[k][j].is_zero()) right[k][j] *= inv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || left[i][best_c].is_zero()) continue;
      const RatFun f = left[i][best_c];
      for (int j = 0; j < n; ++j) {
        if (!left[k][j].is_zero()) left[i][j] -= f * left[k][j];
        if (!right[k][j].is_zero()) right[i][j] -= f * right[k][j];
      }
    }
  }
  // Row k of the reduced system has its unit pivot in column pivot_col[k],
  // so that row of E becomes row pivot_col[k] of the inverse.
  TFMatrix inv(cols_, rows_);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) inv(pivot_col[k], j) = right[k][j];
  }
  return inv;
}

TFMatrix operator+(const TFMatrix& a, const TFMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw std::invalid_argument("TFMatrix +: signal spaces differ (" + to_string(a.rows_) + "x" +
                                to_string(a.cols_) + " vs " + to_string(b.rows_) + "x" + to_string(b.cols_) + ")");
  }
  TFMatrix r = a;
  for (size_t k = 0; k < r.entries_.size(); ++k) r.entries_[k] += b.entries_[k];
  return r;
}

TFMatrix operator-(const TFMatrix& a) {
  TFMatrix r = a;
  for (auto& e : r.entries_) e = -e;
  return r;
}

TFMatrix operator-(const TFMatrix& a, const TFMatrix& b) { return a + (-b); }

TFMatrix operator*(const TFMatrix& a, const TFMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw std::invalid_argument("TFMatrix *: column space " + to_string(a.cols_) + " does not match row space " +
                                to_string(b.rows_));
  }
  TFMatrix r(a.rows_, b.cols_);
  const int inner = a.num_cols();
  for (int i = 0; i < a.num_rows(); ++i) {
    for (int j = 0; j < b.num_cols(); ++j) {
      RatFun acc;
      for (int k = 0; k < inner; ++k) {
        const RatFun& x = a(i, k);
        const RatFun& y = b(k, j);
        if (x.is_zero() || y.is_zero()) continue;
        acc += x * y;
      }
      r(i, j) = std::move(acc);
    }
  }
  return r;
}

TFMatrix operator*(const RatFun& s, const TFMatrix& a) {
  TFMatrix r = a;
  for (auto& e : r.entries_) e *= s;
  return r;
}

TFClassification classify(const TFMatrix& m, double tol) {
  TFClassification c;
  for (const auto& e : m.entries()) {
    const Properness p = classify(e);
    if (p == Properness::kImproper) c.all_proper = false;
    if (p != Properness::kStrictlyProper) c.all_strictly_proper = false;
    if (c.in_rh_inf && !is_stable(e, tol)) c.in_rh_inf = false;
  }
  c.in_zinv_rh_inf = c.in_rh_inf && c.all_strictly_proper;
  return c;
}

std::string to_string(const TFMatrix& m) {
  std::ostringstream os;
  os << to_string(m.rows()) << " <- " << to_string(m.cols()) << "\n";
  for (int i = 0; i < m.num_rows(); ++i) {
    os << "  [";
    for (int j = 0; j < m.num_cols(); ++j) os << (j ? ", " : "") << to_string(m(i, j));
    os << "]\n";
  }
  return os.str();
}

}  // namespace rscalc
