#pragma once

// Small dense kernels: elimination rank, Gauss-Jordan inverse, and a
// reduced-row-echelon nullspace with a caller-fixed column order. Used for
// local wavelet construction and as independent oracles in verification.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace prewavelet {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw std::invalid_argument("DenseMatrix: size mismatch");
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<double>& data() const { return data_; }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("dense product: dimension mismatch");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Numerical rank by Gaussian elimination with partial pivoting.
/// Pivots below rel_tol * max|A| count as zero.
inline std::size_t rank(DenseMatrix a, double rel_tol = 1e-10) {
  const double tol = rel_tol * std::max(a.max_abs(), 1e-300);
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    for (std::size_t q = r + 1; q < a.rows(); ++q)
      if (std::abs(a(q, c)) > std::abs(a(piv, c))) piv = q;
    if (std::abs(a(piv, c)) <= tol) continue;
    for (std::size_t cc = c; cc < a.cols(); ++cc) std::swap(a(r, cc), a(piv, cc));
    for (std::size_t q = r + 1; q < a.rows(); ++q) {
      const double f = a(q, c) / a(r, c);
      if (f == 0.0) continue;
      for (std::size_t cc = c; cc < a.cols(); ++cc) a(q, cc) -= f * a(r, cc);
    }
    ++r;
  }
  return r;
}

/// Gauss-Jordan inverse with partial pivoting; throws on a singular matrix.
inline DenseMatrix inverse(DenseMatrix a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix not square");
  const std::size_t n = a.rows();
  DenseMatrix inv = DenseMatrix::identity(n);
  const double tol = 1e-14 * std::max(a.max_abs(), 1e-300);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t q = c + 1; q < n; ++q)
      if (std::abs(a(q, c)) > std::abs(a(piv, c))) piv = q;
    if (std::abs(a(piv, c)) <= tol) throw std::domain_error("inverse: singular matrix");
    if (piv != c)
      for (std::size_t cc = 0; cc < n; ++cc) {
        std::swap(a(c, cc), a(piv, cc));
        std::swap(inv(c, cc), inv(piv, cc));
      }
    const double d = a(c, c);
    for (std::size_t cc = 0; cc < n; ++cc) {
      a(c, cc) /= d;
      inv(c, cc) /= d;
    }
    for (std::size_t q = 0; q < n; ++q) {
      if (q == c) continue;
      const double f = a(q, c);
      if (f == 0.0) continue;
      for (std::size_t cc = 0; cc < n; ++cc) {
        a(q, cc) -= f * a(c, cc);
        inv(q, cc) -= f * inv(c, cc);
      }
    }
  }
  return inv;
}

/// Dense Gaussian elimination solve, used as an oracle.
inline std::vector<double> dense_solve(const DenseMatrix& a, const std::vector<double>& b) {
  const DenseMatrix inv = inverse(a);
  std::vector<double> x(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) x[i] += inv(i, j) * b[j];
  return x;
}

/// Nullspace basis from the reduced row-echelon form, columns processed in
/// their stored order. Row pivots are chosen by largest magnitude (ties go to
/// the lowest row), so the result is deterministic. One vector per free column,
/// in column order: v[free] = 1, v[pivot_r] = -R(r, free).
inline std::vector<std::vector<double>> rref_nullspace(DenseMatrix a, double rel_tol = 1e-10) {
  const double tol = rel_tol * std::max(a.max_abs(), 1e-300);
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::size_t> pivot_cols;
  std::vector<char> is_pivot(cols, 0);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    for (std::size_t q = r + 1; q < rows; ++q)
      if (std::abs(a(q, c)) > std::abs(a(piv, c))) piv = q;
    if (std::abs(a(piv, c)) <= tol) continue;
    if (piv != r)
      for (std::size_t cc = 0; cc < cols; ++cc) std::swap(a(r, cc), a(piv, cc));
    const double d = a(r, c);
    for (std::size_t cc = 0; cc < cols; ++cc) a(r, cc) /= d;
    a(r, c) = 1.0;
    for (std::size_t q = 0; q < rows; ++q) {
      if (q == r) continue;
      const double f = a(q, c);
      if (f == 0.0) continue;
      for (std::size_t cc = 0; cc < cols; ++cc) a(q, cc) -= f * a(r, cc);
      a(q, c) = 0.0;
    }
    pivot_cols.push_back(c);
    is_pivot[c] = 1;
    ++r;
  }
  std::vector<std::vector<double>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<double> v(cols, 0.0);
    v[f] = 1.0;
    for (std::size_t p = 0; p < pivot_cols.size(); ++p) {
      const double x = a(p, f);
      v[pivot_cols[p]] = std::abs(x) <= tol ? 0.0 : -x;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace prewavelet
