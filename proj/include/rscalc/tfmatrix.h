#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "rscalc/exact_matrix.h"
#include "rscalc/ratfun.h"

namespace rscalc {

struct SignalBlock {
  std::string name;
  int dim = 0;
  friend bool operator==(const SignalBlock&, const SignalBlock&) = default;
};

/// Ordered list of named signal blocks; the stacked vector of all of them is
/// the closed-loop signal vector a transfer matrix acts on or produces.
class SignalSpace {
 public:
  SignalSpace() = default;
  SignalSpace(std::vector<SignalBlock> blocks);  // NOLINT
  SignalSpace(std::initializer_list<SignalBlock> blocks)
      : SignalSpace(std::vector<SignalBlock>(blocks)) {}

  static SignalSpace single(const std::string& name, int dim) { return SignalSpace({{name, dim}}); }

  const std::vector<SignalBlock>& blocks() const { return blocks_; }
  int total() const { return total_; }
  bool contains(const std::string& name) const;
  /// Throws std::invalid_argument for unknown names.
  int offset(const std::string& name) const;
  int dim(const std::string& name) const;
  int index(const std::string& name) const;
  /// Block-structured concatenation; names must stay unique.
  SignalSpace concat(const SignalSpace& other) const;

  friend bool operator==(const SignalSpace&, const SignalSpace&) = default;

 private:
  std::vector<SignalBlock> blocks_;
  int total_ = 0;
};

std::string to_string(const SignalSpace& s);

/// Matrix of rational functions mapping the `cols` signal space to the
/// `rows` signal space. Arithmetic requires conforming spaces (names and
/// dimensions), so a product such as B * Phi_u only type-checks when the
/// signals line up.
class TFMatrix {
 public:
  TFMatrix() = default;
  /// Zero matrix.
  TFMatrix(SignalSpace rows, SignalSpace cols);
  TFMatrix(SignalSpace rows, SignalSpace cols, std::vector<RatFun> row_major);

  static TFMatrix identity(const SignalSpace& space);
  static TFMatrix zero(const SignalSpace& rows, const SignalSpace& cols) { return {rows, cols}; }
  static TFMatrix constant(const SignalSpace& rows, const SignalSpace& cols, const QMatrix& m);
  /// Column block e_name: identity on the rows of `name`, zero elsewhere.
  static TFMatrix embed(const SignalSpace& space, const std::string& name);
  /// Assembles a block grid; row spaces come from the first column of the
  /// grid and column spaces from the first row.
  static TFMatrix stack(const std::vector<std::vector<TFMatrix>>& grid);

  const SignalSpace& rows() const { return rows_; }
  const SignalSpace& cols() const { return cols_; }
  int num_rows() const { return rows_.total(); }
  int num_cols() const { return cols_.total(); }
  bool is_square() const { return num_rows() == num_cols(); }

  const RatFun& operator()(int i, int j) const { return entries_[index(i, j)]; }
  RatFun& operator()(int i, int j) { return entries_[index(i, j)]; }
  const std::vector<RatFun>& entries() const { return entries_; }

  /// Sub-matrix from signal `col_name` to signal `row_name`.
  TFMatrix block(const std::string& row_name, const std::string& col_name) const;
  /// All rows, columns of one block.
  TFMatrix column_block(const std::string& col_name) const;
  TFMatrix row_block(const std::string& row_name) const;
  void set_block(const std::string& row_name, const std::string& col_name, const TFMatrix& value);
  /// Same entries over differently labeled spaces of equal total size.
  TFMatrix relabeled(const SignalSpace& rows, const SignalSpace& cols) const;

  bool is_zero() const;
  TFMatrix transpose() const;
  /// Exact inverse by Gauss-Jordan elimination over the rational-function
  /// field; throws SingularError when the determinant is identically zero.
  TFMatrix inverse() const;

  friend TFMatrix operator+(const TFMatrix& a, const TFMatrix& b);
  friend TFMatrix operator-(const TFMatrix& a, const TFMatrix& b);
  friend TFMatrix operator-(const TFMatrix& a);
  friend TFMatrix operator*(const TFMatrix& a, const TFMatrix& b);
  friend TFMatrix operator*(const RatFun& s, const TFMatrix& a);
  friend bool operator==(const TFMatrix& a, const TFMatrix& b) = default;

 private:
  size_t index(int i, int j) const { return static_cast<size_t>(i) * num_cols() + j; }

  SignalSpace rows_;
  SignalSpace cols_;
  std::vector<RatFun> entries_;
};

struct TFClassification {
  bool all_proper = true;
  bool all_strictly_proper = true;
  bool in_rh_inf = true;
  bool in_zinv_rh_inf = true;
};

TFClassification classify(const TFMatrix& m, double tol = kDefaultPoleTolerance);

inline bool in_rh_inf(const TFMatrix& m, double tol = kDefaultPoleTolerance) {
  return classify(m, tol).in_rh_inf;
}
inline bool in_zinv_rh_inf(const TFMatrix& m, double tol = kDefaultPoleTolerance) {
  return classify(m, tol).in_zinv_rh_inf;
}

std::string to_string(const TFMatrix& m);

}  // namespace rscalc
