#include "pbnq/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pbnq {

void check_dims(long long rows, long long cols) {
  if (rows < 1 || cols < 1) {
    throw DimensionError("matrix dimensions must be positive, got " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (rows > kMaxDim || cols > kMaxDim) {
    throw SizeGuardError("matrix of size " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " exceeds the dimension cap " +
                         std::to_string(kMaxDim));
  }
}

CanonicalIndex::CanonicalIndex(int value, int dim) : value(value), dim(dim) {
  if (dim < 1 || value < 1 || value > dim) {
    throw ValidationError("canonical index " + std::to_string(value) +
                          " out of range 1.." + std::to_string(dim));
  }
}

bool operator==(const Entry& a, const Entry& b) {
  return a.row == b.row && a.value == b.value;
}

SparseMatrix::SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  check_dims(rows, cols);
  columns_.resize(static_cast<std::size_t>(cols));
}

SparseMatrix SparseMatrix::identity(int n) {
  SparseMatrix m(n, n);
  for (int j = 1; j <= n; ++j) m.set_column(j, {{j, 1.0}});
  return m;
}

const std::vector<Entry>& SparseMatrix::column(int j) const {
  if (j < 1 || j > cols_) {
    throw DimensionError("column index " + std::to_string(j) + " out of range 1.." +
                         std::to_string(cols_));
  }
  return columns_[static_cast<std::size_t>(j - 1)];
}

void SparseMatrix::set_column(int j, std::vector<Entry> entries) {
  if (j < 1 || j > cols_) {
    throw DimensionError("column index " + std::to_string(j) + " out of range 1.." +
                         std::to_string(cols_));
  }
  int prev = 0;
  for (const Entry& e : entries) {
    if (e.row <= prev || e.row > rows_) {
      throw ValidationError("column " + std::to_string(j) +
                            ": row indices must be strictly increasing and in 1.." +
                            std::to_string(rows_));
    }
    prev = e.row;
  }
  columns_[static_cast<std::size_t>(j - 1)] = std::move(entries);
}

double SparseMatrix::at(int i, int j) const {
  for (const Entry& e : column(j)) {
    if (e.row == i) return e.value;
    if (e.row > i) break;
  }
  return 0.0;
}

bool SparseMatrix::approx_equal(const SparseMatrix& other, double tol) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) return false;
  for (int j = 1; j <= cols_; ++j) {
    const auto& a = column(j);
    const auto& b = other.column(j);
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() || ib < b.size()) {
      if (ib == b.size() || (ia < a.size() && a[ia].row < b[ib].row)) {
        if (std::abs(a[ia].value) > tol) return false;
        ++ia;
      } else if (ia == a.size() || b[ib].row < a[ia].row) {
        if (std::abs(b[ib].value) > tol) return false;
        ++ib;
      } else {
        if (std::abs(a[ia].value - b[ib].value) > tol) return false;
        ++ia;
        ++ib;
      }
    }
  }
  return true;
}

LogicalMatrix::LogicalMatrix(int rows, std::vector<int> col_targets)
    : rows_(rows), col_target_(std::move(col_targets)) {
  check_dims(rows, static_cast<long long>(col_target_.size()));
  for (int t : col_target_) {
    if (t < 1 || t > rows_) {
      throw ValidationError("logical matrix column target " + std::to_string(t) +
                            " out of range 1.." + std::to_string(rows_));
    }
  }
}

LogicalMatrix LogicalMatrix::identity(int n) {
  std::vector<int> t(static_cast<std::size_t>(n));
  std::iota(t.begin(), t.end(), 1);
  return LogicalMatrix(n, std::move(t));
}

LogicalMatrix LogicalMatrix::canonical_vector(const CanonicalIndex& delta) {
  return LogicalMatrix(delta.dim, {delta.value});
}

int LogicalMatrix::target(int j) const {
  if (j < 1 || j > cols()) {
    throw DimensionError("column index " + std::to_string(j) + " out of range 1.." +
                         std::to_string(cols()));
  }
  return col_target_[static_cast<std::size_t>(j - 1)];
}

bool LogicalMatrix::full_row_rank() const {
  std::vector<bool> seen(static_cast<std::size_t>(rows_), false);
  for (int t : col_target_) seen[static_cast<std::size_t>(t - 1)] = true;
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

SparseMatrix LogicalMatrix::to_sparse() const {
  SparseMatrix m(rows_, cols());
  for (int j = 1; j <= cols(); ++j) m.set_column(j, {{target(j), 1.0}});
  return m;
}

StochasticMatrix::StochasticMatrix(SparseMatrix data, double tol) : data_(std::move(data)) {
  for (int j = 1; j <= data_.cols(); ++j) {
    double sum = 0.0;
    for (const Entry& e : data_.column(j)) {
      if (e.value < -tol || e.value > 1.0 + tol) {
        throw ValidationError("stochastic matrix entry (" + std::to_string(e.row) + "," +
                              std::to_string(j) + ") = " + std::to_string(e.value) +
                              " outside [0,1]");
      }
      sum += e.value;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw ValidationError("stochastic matrix column " + std::to_string(j) + " sums to " +
                            std::to_string(sum) + ", expected 1");
    }
  }
}

StochasticMatrix StochasticMatrix::from_logical(const LogicalMatrix& m) {
  return StochasticMatrix(m.to_sparse(), 0.0);
}

ZeroOneMatrix::ZeroOneMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  check_dims(rows, cols);
  words_per_row_ = (cols + 63) / 64;
  bits_.assign(static_cast<std::size_t>(rows) * words_per_row_, 0);
}

ZeroOneMatrix ZeroOneMatrix::identity(int n) {
  ZeroOneMatrix m(n, n);
  for (int i = 1; i <= n; ++i) m.set(i, i, true);
  return m;
}

ZeroOneMatrix ZeroOneMatrix::all_ones(int rows, int cols) {
  ZeroOneMatrix m(rows, cols);
  for (int i = 1; i <= rows; ++i)
    for (int j = 1; j <= cols; ++j) m.set(i, j, true);
  return m;
}

bool ZeroOneMatrix::get(int i, int j) const {
  std::size_t word = static_cast<std::size_t>(i - 1) * words_per_row_ + (j - 1) / 64;
  return (bits_[word] >> ((j - 1) % 64)) & 1u;
}

void ZeroOneMatrix::set(int i, int j, bool value) {
  if (i < 1 || i > rows_ || j < 1 || j > cols_) {
    throw DimensionError("(0,1)-matrix index (" + std::to_string(i) + "," +
                         std::to_string(j) + ") out of range");
  }
  std::size_t word = static_cast<std::size_t>(i - 1) * words_per_row_ + (j - 1) / 64;
  std::uint64_t mask = 1ULL << ((j - 1) % 64);
  if (value)
    bits_[word] |= mask;
  else
    bits_[word] &= ~mask;
}

bool ZeroOneMatrix::is_reflexive() const {
  if (rows_ != cols_) return false;
  for (int i = 1; i <= rows_; ++i)
    if (!get(i, i)) return false;
  return true;
}

bool ZeroOneMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 1; i <= rows_; ++i)
    for (int j = i + 1; j <= cols_; ++j)
      if (get(i, j) != get(j, i)) return false;
  return true;
}

bool ZeroOneMatrix::rows_equal(int i1, int i2) const {
  std::size_t a = static_cast<std::size_t>(i1 - 1) * words_per_row_;
  std::size_t b = static_cast<std::size_t>(i2 - 1) * words_per_row_;
  for (int w = 0; w < words_per_row_; ++w)
    if (bits_[a + w] != bits_[b + w]) return false;
  return true;
}

ZeroOneMatrix meet(const ZeroOneMatrix& a, const ZeroOneMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw DimensionError("meet of " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                         " with " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  }
  ZeroOneMatrix out = a;
  for (std::size_t w = 0; w < out.bits_.size(); ++w) out.bits_[w] &= b.bits_[w];
  return out;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  long long rows = static_cast<long long>(a.rows()) * b.rows();
  long long cols = static_cast<long long>(a.cols()) * b.cols();
  check_dims(rows, cols);
  SparseMatrix out(static_cast<int>(rows), static_cast<int>(cols));
  for (int ja = 1; ja <= a.cols(); ++ja) {
    for (int jb = 1; jb <= b.cols(); ++jb) {
      std::vector<Entry> col;
      for (const Entry& ea : a.column(ja)) {
        for (const Entry& eb : b.column(jb)) {
          col.push_back({(ea.row - 1) * b.rows() + eb.row, ea.value * eb.value});
        }
      }
      out.set_column((ja - 1) * b.cols() + jb, std::move(col));
    }
  }
  return out;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("product of " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " with " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  SparseMatrix out(a.rows(), b.cols());
  std::vector<double> scratch(static_cast<std::size_t>(a.rows()) + 1, 0.0);
  std::vector<int> touched;
  for (int j = 1; j <= b.cols(); ++j) {
    touched.clear();
    for (const Entry& eb : b.column(j)) {
      for (const Entry& ea : a.column(eb.row)) {
        if (scratch[static_cast<std::size_t>(ea.row)] == 0.0) touched.push_back(ea.row);
        scratch[static_cast<std::size_t>(ea.row)] += ea.value * eb.value;
      }
    }
    std::sort(touched.begin(), touched.end());
    std::vector<Entry> col;
    col.reserve(touched.size());
    for (int r : touched) {
      if (scratch[static_cast<std::size_t>(r)] != 0.0) {
        col.push_back({r, scratch[static_cast<std::size_t>(r)]});
      }
      scratch[static_cast<std::size_t>(r)] = 0.0;
    }
    out.set_column(j, std::move(col));
  }
  return out;
}

SparseMatrix stp(const SparseMatrix& a, const SparseMatrix& b) {
  long long l = std::lcm<long long>(a.cols(), b.rows());
  if (a.cols() == b.rows()) return multiply(a, b);
  long long pa = l / a.cols();
  long long pb = l / b.rows();
  check_dims(a.rows() * pa, l);
  check_dims(l, b.cols() * pb);
  return multiply(kron(a, SparseMatrix::identity(static_cast<int>(pa))),
                  kron(b, SparseMatrix::identity(static_cast<int>(pb))));
}

CanonicalIndex stp(const CanonicalIndex& a, const CanonicalIndex& b) {
  long long dim = static_cast<long long>(a.dim) * b.dim;
  check_dims(dim, 1);
  return CanonicalIndex((a.value - 1) * b.dim + b.value, static_cast<int>(dim));
}

LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b) {
  SparseMatrix s = stp(a.to_sparse(), b.to_sparse());
  std::vector<int> targets(static_cast<std::size_t>(s.cols()));
  for (int j = 1; j <= s.cols(); ++j) {
    const auto& col = s.column(j);
    if (col.size() != 1 || col[0].value != 1.0) {
      throw ValidationError("stp of logical matrices produced a non-logical column");
    }
    targets[static_cast<std::size_t>(j - 1)] = col[0].row;
  }
  return LogicalMatrix(s.rows(), std::move(targets));
}

StochasticMatrix stp(const StochasticMatrix& a, const StochasticMatrix& b, double tol) {
  return StochasticMatrix(stp(a.data(), b.data()), tol);
}

StochasticMatrix select_input_block(const StochasticMatrix& p, const CanonicalIndex& u) {
  int n = p.rows();
  if (p.cols() != n * u.dim) {
    throw DimensionError("expected " + std::to_string(n) + "x" +
                         std::to_string(static_cast<long long>(n) * u.dim) +
                         " transition matrix, got " + std::to_string(n) + "x" +
                         std::to_string(p.cols()));
  }
  SparseMatrix out(n, n);
  for (int j = 1; j <= n; ++j) {
    out.set_column(j, p.column((u.value - 1) * n + j));
  }
  // Columns are copied verbatim from an already validated matrix.
  return StochasticMatrix(std::move(out), 1.0);
}

}  // namespace pbnq
