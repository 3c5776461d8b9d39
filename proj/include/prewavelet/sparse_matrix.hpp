#pragma once

// Row-compressed real matrix. Column indices are strictly increasing within a
// row and no exact zeros are stored.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace prewavelet {

using Vector = std::vector<double>;

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  /// Duplicates are summed; entries summing to exactly zero are dropped.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets) {
    for (const auto& t : triplets)
      if (t.row >= rows || t.col >= cols)
        throw std::out_of_range("triplet outside matrix shape");
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m(rows, cols);
    m.col_idx_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    std::size_t p = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      while (p < triplets.size() && triplets[p].row == r) {
        const std::size_t c = triplets[p].col;
        double v = 0.0;
        while (p < triplets.size() && triplets[p].row == r && triplets[p].col == c)
          v += triplets[p++].value;
        if (v != 0.0) {
          m.col_idx_.push_back(c);
          m.values_.push_back(v);
        }
      }
      m.row_ptr_[r + 1] = m.col_idx_.size();
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_cols(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<double> row_values_mut(std::size_t r) {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  double at(std::size_t r, std::size_t c) const {
    const auto cs = row_cols(r);
    const auto it = std::lower_bound(cs.begin(), cs.end(), c);
    if (it == cs.end() || *it != c) return 0.0;
    return values_[row_ptr_[r] + static_cast<std::size_t>(it - cs.begin())];
  }

  Vector multiply(std::span<const double> x) const {
    if (x.size() != cols_) throw std::invalid_argument("multiply: dimension mismatch");
    Vector y(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      double s = 0.0;
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += values_[p] * x[col_idx_[p]];
      y[r] = s;
    }
    return y;
  }

  /// A^T x.
  Vector multiply_transposed(std::span<const double> x) const {
    if (x.size() != rows_)
      throw std::invalid_argument("multiply_transposed: dimension mismatch");
    Vector y(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
        y[col_idx_[p]] += values_[p] * x[r];
    return y;
  }

  SparseMatrix transposed() const {
    SparseMatrix t(cols_, rows_);
    std::vector<std::size_t> count(cols_ + 1, 0);
    for (auto c : col_idx_) ++count[c + 1];
    for (std::size_t c = 0; c < cols_; ++c) count[c + 1] += count[c];
    t.row_ptr_ = count;
    t.col_idx_.resize(nnz());
    t.values_.resize(nnz());
    auto next = count;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
        const auto dst = next[col_idx_[p]]++;
        t.col_idx_[dst] = r;
        t.values_[dst] = values_[p];
      }
    return t;
  }

  /// Sparse product with a dense accumulator per row.
  SparseMatrix operator*(const SparseMatrix& b) const;

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_symmetric(double tol = 0.0) const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
        if (std::abs(values_[p] - at(col_idx_[p], r)) > tol) return false;
    return true;
  }

  /// Dense row-major copy, for small oracles.
  std::vector<double> to_dense() const {
    std::vector<double> d(rows_ * cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
        d[r * cols_ + col_idx_[p]] = values_[p];
    return d;
  }

 private:
  friend class SparseRowBuilder;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// Builds a SparseMatrix row by row; each row must be pushed in increasing
/// column order. Zeros are skipped.
class SparseRowBuilder {
 public:
  SparseRowBuilder(std::size_t rows, std::size_t cols) : m_(rows, cols) { m_.row_ptr_.assign(1, 0); }
  void push(std::size_t col, double value) {
    if (value == 0.0) return;
    m_.col_idx_.push_back(col);
    m_.values_.push_back(value);
  }
  void end_row() { m_.row_ptr_.push_back(m_.col_idx_.size()); }
  SparseMatrix finish() && {
    if (m_.row_ptr_.size() != m_.rows_ + 1) throw std::logic_error("SparseRowBuilder: wrong number of rows");
    return std::move(m_);
  }

 private:
  SparseMatrix m_;
};

inline SparseMatrix SparseMatrix::operator*(const SparseMatrix& b) const {
  if (cols_ != b.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
  SparseRowBuilder out(rows_, b.cols_);
  std::vector<double> acc(b.cols_, 0.0);
  std::vector<char> touched(b.cols_, 0);
  std::vector<std::size_t> pattern;
  for (std::size_t r = 0; r < rows_; ++r) {
    pattern.clear();
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      const double a = values_[p];
      const std::size_t k = col_idx_[p];
      for (std::size_t q = b.row_ptr_[k]; q < b.row_ptr_[k + 1]; ++q) {
        const auto c = b.col_idx_[q];
        if (!touched[c]) {
          touched[c] = 1;
          pattern.push_back(c);
        }
        acc[c] += a * b.values_[q];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (auto c : pattern) {
      out.push(c, acc[c]);
      acc[c] = 0.0;
      touched[c] = 0;
    }
    out.end_row();
  }
  return std::move(out).finish();
}

/// Text dump: "rows cols nnz" header, then 1-based "row col value" triples.
inline void write_matrix_text(std::ostream& os, const SparseMatrix& m) {
  os << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  os << std::setprecision(17);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto cs = m.row_cols(r);
    const auto vs = m.row_values(r);
    for (std::size_t p = 0; p < cs.size(); ++p) os << r + 1 << ' ' << cs[p] + 1 << ' ' << vs[p] << '\n';
  }
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm_inf(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace prewavelet
