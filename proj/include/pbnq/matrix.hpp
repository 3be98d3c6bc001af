#pragma once

#include <cstdint>
#include <vector>

#include "pbnq/errors.hpp"

namespace pbnq {

// Absolute tolerance used for probability comparisons unless the caller
// passes something else.
inline constexpr double kDefaultTol = 1e-9;

// Hard cap on any matrix dimension. Requests beyond it are rejected with
// SizeGuardError instead of being attempted.
inline constexpr long long kMaxDim = 1LL << 20;

void check_dims(long long rows, long long cols);

// The i-th canonical basis vector of length `dim` (all indices 1-based).
struct CanonicalIndex {
  int value;
  int dim;
  CanonicalIndex(int value, int dim);
};

// One nonzero of a sparse column; `row` is 1-based.
struct Entry {
  int row;
  double value;
};

bool operator==(const Entry& a, const Entry& b);

// General real matrix stored as sparse columns with strictly increasing
// row indices. Treated as immutable once built; all operations return
// fresh matrices.
class SparseMatrix {
 public:
  SparseMatrix(int rows, int cols);

  static SparseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  // j in 1..cols.
  const std::vector<Entry>& column(int j) const;
  void set_column(int j, std::vector<Entry> entries);

  double at(int i, int j) const;

  bool approx_equal(const SparseMatrix& other, double tol) const;

 private:
  int rows_;
  int cols_;
  std::vector<std::vector<Entry>> columns_;
};

// Matrix whose every column is a canonical basis vector; column j carries
// the basis vector selected by col_target[j].
class LogicalMatrix {
 public:
  LogicalMatrix(int rows, std::vector<int> col_targets);

  static LogicalMatrix identity(int n);
  static LogicalMatrix canonical_vector(const CanonicalIndex& delta);

  int rows() const { return rows_; }
  int cols() const { return static_cast<int>(col_target_.size()); }
  int target(int j) const;  // row index of the 1 in column j

  // True iff every row index 1..rows appears among the column targets.
  bool full_row_rank() const;

  SparseMatrix to_sparse() const;

  friend bool operator==(const LogicalMatrix& a, const LogicalMatrix& b) = default;

 private:
  int rows_;
  std::vector<int> col_target_;
};

// Column-stochastic real matrix: entries in [0,1] (within tol), every
// column summing to one within tol. The invariant is checked on
// construction, so any operation producing a StochasticMatrix has already
// revalidated it.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(SparseMatrix data, double tol = kDefaultTol);

  static StochasticMatrix from_logical(const LogicalMatrix& m);

  int rows() const { return data_.rows(); }
  int cols() const { return data_.cols(); }
  const std::vector<Entry>& column(int j) const { return data_.column(j); }
  double at(int i, int j) const { return data_.at(i, j); }
  const SparseMatrix& data() const { return data_; }

  bool approx_equal(const StochasticMatrix& other, double tol) const {
    return data_.approx_equal(other.data_, tol);
  }

 private:
  SparseMatrix data_;
};

// Dense (0,1)-matrix over a row-major bitset. Rows are padded to whole
// 64-bit words so row comparison and meet reduce to word operations.
class ZeroOneMatrix {
 public:
  ZeroOneMatrix(int rows, int cols);

  static ZeroOneMatrix identity(int n);
  static ZeroOneMatrix all_ones(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool get(int i, int j) const;
  void set(int i, int j, bool value);

  bool is_reflexive() const;
  bool is_symmetric() const;

  bool rows_equal(int i1, int i2) const;

  friend ZeroOneMatrix meet(const ZeroOneMatrix& a, const ZeroOneMatrix& b);
  friend bool operator==(const ZeroOneMatrix& a, const ZeroOneMatrix& b) = default;

 private:
  int rows_;
  int cols_;
  int words_per_row_;
  std::vector<std::uint64_t> bits_;
};

// Kronecker product.
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

// Ordinary matrix product (shapes must match exactly).
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

// Left semitensor product (A ⊗ I_{l/r1})(B ⊗ I_{l/k2}) with
// l = lcm(r1, k2). Coincides with the ordinary product when r1 = k2.
SparseMatrix stp(const SparseMatrix& a, const SparseMatrix& b);

// stp of canonical vectors stays canonical:
// δ_{k1}^i ⋉ δ_{k2}^j = δ_{k1·k2}^{(i-1)·k2 + j}.
CanonicalIndex stp(const CanonicalIndex& a, const CanonicalIndex& b);

// stp of logical matrices is logical (checked exactly on extraction).
LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b);

// stp of column-stochastic matrices is column-stochastic.
StochasticMatrix stp(const StochasticMatrix& a, const StochasticMatrix& b,
                     double tol = kDefaultTol);

// Columns (u-1)·N+1 .. u·N of P, where N = P.rows() and P has N·u.dim
// columns. Bit-identical to stp(P, δ_M^u).
StochasticMatrix select_input_block(const StochasticMatrix& p, const CanonicalIndex& u);

// Elementwise AND of two equally sized (0,1)-matrices.
ZeroOneMatrix meet(const ZeroOneMatrix& a, const ZeroOneMatrix& b);

}  // namespace pbnq
