#include "apheat/sparse.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>
#include <string>

namespace apheat {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_ptr,
                           std::vector<int> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (static_cast<int>(row_ptr_.size()) != rows_ + 1 || col_idx_.size() != values_.size() ||
      static_cast<std::size_t>(row_ptr_.back()) != values_.size())
    throw Error("SparseMatrix: inconsistent compressed-row arrays");
}

SparseMatrix SparseMatrix::zero(int rows, int cols) {
  return SparseMatrix(rows, cols, std::vector<int>(rows + 1, 0), {}, {});
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<int> ptr(n + 1), idx(n);
  std::iota(ptr.begin(), ptr.end(), 0);
  std::iota(idx.begin(), idx.end(), 0);
  return SparseMatrix(n, n, std::move(ptr), std::move(idx), std::vector<double>(n, 1.0));
}

double SparseMatrix::at(int row, int col) const {
  const auto first = col_idx_.begin() + row_ptr_[row];
  const auto last = col_idx_.begin() + row_ptr_[row + 1];
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return values_[it - col_idx_.begin()];
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != cols_) throw Error("SparseMatrix::multiply: size mismatch");
  std::vector<double> y(rows_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[r] = s;
  }
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<int> ptr(cols_ + 1, 0);
  for (int c : col_idx_) ++ptr[c + 1];
  std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
  std::vector<int> idx(nnz());
  std::vector<double> val(nnz());
  std::vector<int> next(ptr.begin(), ptr.end() - 1);
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int dst = next[col_idx_[k]]++;
      idx[dst] = r;
      val[dst] = values_[k];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(ptr), std::move(idx), std::move(val));
}

SparseMatrix SparseMatrix::scaled(double s) const {
  SparseMatrix m = *this;
  for (double& v : m.values_) v *= s;
  return m;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool SparseMatrix::is_symmetric(double rel_tol) const {
  if (rows_ != cols_) return false;
  const double bound = rel_tol * max_abs();
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      if (std::abs(values_[k] - at(col_idx_[k], r)) > bound) return false;
  return true;
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      d[static_cast<std::size_t>(r) * cols_ + col_idx_[k]] = values_[k];
  return d;
}

SparseMatrix finalize(const TripletList& triplets) {
  const int rows = triplets.rows();
  const int cols = triplets.cols();
  const auto& entries = triplets.entries();

  std::vector<int> count(rows + 1, 0);
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw Error("finalize: entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                  ") outside a " + std::to_string(rows) + "x" + std::to_string(cols) +
                  " matrix");
    ++count[t.row + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());

  // Bucket by row, keeping insertion order so summation order is deterministic.
  std::vector<std::pair<int, double>> bucket(entries.size());
  std::vector<int> next(count.begin(), count.end() - 1);
  for (const auto& t : entries) bucket[next[t.row]++] = {t.col, t.value};

  std::vector<int> ptr(rows + 1, 0);
  std::vector<int> idx;
  std::vector<double> val;
  idx.reserve(entries.size());
  val.reserve(entries.size());
  for (int r = 0; r < rows; ++r) {
    auto first = bucket.begin() + count[r];
    auto last = bucket.begin() + count[r + 1];
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!idx.empty() && static_cast<int>(idx.size()) > ptr[r] && idx.back() == it->first) {
        val.back() += it->second;
      } else {
        idx.push_back(it->first);
        val.push_back(it->second);
      }
    }
    ptr[r + 1] = static_cast<int>(idx.size());
  }
  return SparseMatrix(rows, cols, std::move(ptr), std::move(idx), std::move(val));
}

SparseMatrix combine(std::span<const std::pair<double, const SparseMatrix*>> terms) {
  if (terms.empty()) throw Error("combine: no terms");
  const int rows = terms.front().second->rows();
  const int cols = terms.front().second->cols();
  for (const auto& [w, m] : terms)
    if (m->rows() != rows || m->cols() != cols) throw Error("combine: dimension mismatch");

  std::vector<int> ptr(rows + 1, 0);
  std::vector<int> idx;
  std::vector<double> val;
  std::vector<int> slot(cols, -1);
  for (int r = 0; r < rows; ++r) {
    const int begin = static_cast<int>(idx.size());
    for (const auto& [w, m] : terms) {
      const auto mp = m->row_ptr();
      const auto mi = m->col_idx();
      const auto mv = m->values();
      for (int k = mp[r]; k < mp[r + 1]; ++k) {
        const int c = mi[k];
        if (slot[c] < 0) {
          slot[c] = static_cast<int>(idx.size());
          idx.push_back(c);
          val.push_back(w * mv[k]);
        } else {
          val[slot[c]] += w * mv[k];
        }
      }
    }
    // Sort the row segment by column.
    const int end = static_cast<int>(idx.size());
    std::vector<std::pair<int, double>> seg;
    seg.reserve(end - begin);
    for (int k = begin; k < end; ++k) {
      seg.emplace_back(idx[k], val[k]);
      slot[idx[k]] = -1;
    }
    std::sort(seg.begin(), seg.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (int k = begin; k < end; ++k) {
      idx[k] = seg[k - begin].first;
      val[k] = seg[k - begin].second;
    }
    ptr[r + 1] = end;
  }
  return SparseMatrix(rows, cols, std::move(ptr), std::move(idx), std::move(val));
}

struct LuSolver::Impl {
  using EigenMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
  Eigen::SparseLU<EigenMatrix, Eigen::COLAMDOrdering<int>> lu;
  std::vector<int> pattern_ptr;
  std::vector<int> pattern_idx;
  int n = 0;
  bool factorized = false;
};

LuSolver::LuSolver() : impl_(std::make_unique<Impl>()) {}
LuSolver::~LuSolver() = default;
LuSolver::LuSolver(LuSolver&&) noexcept = default;
LuSolver& LuSolver::operator=(LuSolver&&) noexcept = default;

namespace {

long trailing_index(const std::string& message) {
  static const std::regex re("(\\d+)\\s*$");
  std::smatch m;
  if (std::regex_search(message, m, re)) return std::stol(m[1]);
  return -1;
}

}  // namespace

void LuSolver::factorize(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw Error("LuSolver: matrix must be square");
  const int n = a.rows();

  using RowMap = Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>>;
  RowMap view(n, n, static_cast<int>(a.nnz()), a.row_ptr().data(), a.col_idx().data(),
              a.values().data());
  Impl::EigenMatrix m = view;
  m.makeCompressed();

  const bool same_pattern =
      impl_->factorized && impl_->n == n &&
      std::equal(a.row_ptr().begin(), a.row_ptr().end(), impl_->pattern_ptr.begin(),
                 impl_->pattern_ptr.end()) &&
      std::equal(a.col_idx().begin(), a.col_idx().end(), impl_->pattern_idx.begin(),
                 impl_->pattern_idx.end());
  if (!same_pattern) {
    impl_->lu.analyzePattern(m);
    impl_->pattern_ptr.assign(a.row_ptr().begin(), a.row_ptr().end());
    impl_->pattern_idx.assign(a.col_idx().begin(), a.col_idx().end());
    impl_->n = n;
  }
  impl_->factorized = false;
  impl_->lu.factorize(m);
  if (impl_->lu.info() != Eigen::Success) {
    const std::string msg = impl_->lu.lastErrorMessage();
    const long pivot = trailing_index(msg);
    throw SingularMatrixError("lu_solve: singular pivot" +
                                  (pivot >= 0 ? " at row " + std::to_string(pivot - 1) : "") +
                                  " (" + msg + ")",
                              pivot >= 0 ? pivot - 1 : -1);
  }
  impl_->factorized = true;
}

std::vector<double> LuSolver::solve(std::span<const double> rhs) const {
  if (!impl_->factorized) throw Error("LuSolver::solve called before factorize");
  if (static_cast<int>(rhs.size()) != impl_->n) throw Error("LuSolver::solve: size mismatch");
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), impl_->n);
  Eigen::VectorXd x = impl_->lu.solve(b);
  return std::vector<double>(x.data(), x.data() + x.size());
}

std::vector<double> lu_solve(const SparseMatrix& a, std::span<const double> rhs) {
  LuSolver solver;
  solver.factorize(a);
  return solver.solve(rhs);
}

double relative_residual(const SparseMatrix& a, std::span<const double> x,
                         std::span<const double> b) {
  const auto ax = a.multiply(x);
  double r = 0.0, xn = 0.0, bn = 0.0, an = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    r = std::max(r, std::abs(ax[i] - b[i]));
    bn = std::max(bn, std::abs(b[i]));
  }
  for (double v : x) xn = std::max(xn, std::abs(v));
  const auto ptr = a.row_ptr();
  const auto val = a.values();
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int k = ptr[i]; k < ptr[i + 1]; ++k) s += std::abs(val[k]);
    an = std::max(an, s);
  }
  const double denom = an * xn + bn;
  return denom > 0.0 ? r / denom : r;
}

}  // namespace apheat
