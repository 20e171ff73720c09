#pragma once

#include <memory>
#include <span>
#include <vector>

#include "apheat/types.hpp"

namespace apheat {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Coordinate-format accumulator used during assembly.
class TripletList {
 public:
  TripletList(int rows, int cols) : rows_(rows), cols_(cols) {}

  void add(int row, int col, double value) { entries_.push_back({row, col, value}); }
  void reserve(std::size_t n) { entries_.reserve(n); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Triplet>& entries() const { return entries_; }

 private:
  int rows_, cols_;
  std::vector<Triplet> entries_;
};

/// Compressed-row matrix with sorted, duplicate-free columns in each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
               std::vector<double> values);

  static SparseMatrix zero(int rows, int cols);
  static SparseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  /// Entry lookup by binary search; zero when not stored.
  double at(int row, int col) const;

  std::vector<double> multiply(std::span<const double> x) const;
  SparseMatrix transpose() const;
  SparseMatrix scaled(double s) const;
  double max_abs() const;
  /// max |A - A^T| <= rel_tol * max |A|.
  bool is_symmetric(double rel_tol = 1e-12) const;
  /// Dense row-major copy, for small-instance checks.
  std::vector<double> to_dense() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Sums duplicates and sorts each row. Throws on out-of-range indices.
SparseMatrix finalize(const TripletList& triplets);

/// Linear combination sum_k w_k A_k of equally sized matrices.
SparseMatrix combine(std::span<const std::pair<double, const SparseMatrix*>> terms);

/// Direct LU solver with partial pivoting and a fill-reducing column
/// ordering. The symbolic analysis is kept and reused as long as the sparsity
/// pattern of successive matrices stays the same.
class LuSolver {
 public:
  LuSolver();
  ~LuSolver();
  LuSolver(LuSolver&&) noexcept;
  LuSolver& operator=(LuSolver&&) noexcept;

  void factorize(const SparseMatrix& a);
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Factorize and solve once; throws SingularMatrixError on a zero pivot.
std::vector<double> lu_solve(const SparseMatrix& a, std::span<const double> rhs);

/// ||A x - b||_inf / (||A||_inf ||x||_inf + ||b||_inf).
double relative_residual(const SparseMatrix& a, std::span<const double> x,
                         std::span<const double> b);

}  // namespace apheat
