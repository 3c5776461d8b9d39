#pragma once

// Sparse symmetric solvers: up-looking Cholesky in the natural ordering and
// unpreconditioned (optionally Jacobi) conjugate gradients.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "prewavelet/sparse_matrix.hpp"

namespace prewavelet {

/// Raised when a Cholesky pivot is not positive.
class NotPositiveDefinite : public std::domain_error {
 public:
  explicit NotPositiveDefinite(std::size_t row)
      : std::domain_error("matrix is not positive definite (pivot " + std::to_string(row) + ")"),
        row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

struct SolverReport {
  std::size_t iterations = 0;  // 0 for direct solves
  double relative_residual = 0.0;
  double seconds = 0.0;
  bool converged = true;
};

template <typename Vec>
struct Solution {
  Vec x;
  SolverReport report;
};

inline double relative_residual(const SparseMatrix& a, std::span<const double> x,
                                std::span<const double> b) {
  const Vector ax = a.multiply(x);
  double rr = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    rr += (ax[i] - b[i]) * (ax[i] - b[i]);
    bb += b[i] * b[i];
  }
  if (bb == 0.0) return std::sqrt(rr);
  return std::sqrt(rr / bb);
}

/// L L^T factor of an SPD matrix, lower triangle stored by columns.
///
/// Symbolic analysis computes the elimination tree and the row patterns of L
/// (row subtree reach); the numeric phase is the classic up-looking scheme. No
/// fill-reducing permutation is applied, which is fine up to a few hundred
/// thousand unknowns on banded problems.
class SparseCholesky {
 public:
  SparseCholesky() = default;
  explicit SparseCholesky(const SparseMatrix& a) { factorize(a); }

  void factorize(const SparseMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
    n_ = a.rows();
    const std::size_t n = n_;
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

    // Elimination tree from the strictly lower part of each row.
    std::vector<std::size_t> parent(n, none), ancestor(n, none);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t c : a.row_cols(k)) {
        if (c >= k) break;
        std::size_t i = c;
        while (i != none && i < k) {
          const std::size_t next = ancestor[i];
          ancestor[i] = k;
          if (next == none) {
            parent[i] = k;
            break;
          }
          i = next;
        }
      }
    }

    // Column counts via row reach.
    std::vector<std::size_t> mark(n, none), counts(n, 1);
    for (std::size_t k = 0; k < n; ++k) {
      mark[k] = k;
      for (std::size_t c : a.row_cols(k)) {
        if (c >= k) break;
        for (std::size_t i = c; mark[i] != k; i = parent[i]) {
          ++counts[i];
          mark[i] = k;
        }
      }
    }
    col_ptr_.assign(n + 1, 0);
    for (std::size_t c = 0; c < n; ++c) col_ptr_[c + 1] = col_ptr_[c] + counts[c];
    row_idx_.assign(col_ptr_[n], 0);
    values_.assign(col_ptr_[n], 0.0);

    std::vector<std::size_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
    std::vector<double> x(n, 0.0);
    std::vector<std::size_t> stack(n);
    std::fill(mark.begin(), mark.end(), none);
    for (std::size_t k = 0; k < n; ++k) {
      // Pattern of row k of L in topological order.
      std::size_t top = n;
      mark[k] = k;
      const auto cols = a.row_cols(k);
      const auto vals = a.row_values(k);
      double diag = 0.0;
      for (std::size_t p = 0; p < cols.size(); ++p) {
        const std::size_t c = cols[p];
        if (c > k) break;
        if (c == k) {
          diag = vals[p];
          continue;
        }
        x[c] = vals[p];
        std::size_t len = 0;
        std::size_t i = c;
        for (; mark[i] != k; i = parent[i]) {
          stack[len++] = i;
          mark[i] = k;
        }
        while (len > 0) stack[--top] = stack[--len];
      }
      double d = diag;
      for (; top < n; ++top) {
        const std::size_t j = stack[top];
        const double lkj = x[j] / values_[col_ptr_[j]];
        x[j] = 0.0;
        for (std::size_t p = col_ptr_[j] + 1; p < fill[j]; ++p) x[row_idx_[p]] -= values_[p] * lkj;
        d -= lkj * lkj;
        row_idx_[fill[j]] = k;
        values_[fill[j]++] = lkj;
      }
      if (!(d > 0.0)) throw NotPositiveDefinite(k);
      row_idx_[fill[k]] = k;
      values_[fill[k]++] = std::sqrt(d);
    }
  }

  std::size_t size() const { return n_; }
  std::size_t factor_nnz() const { return values_.size(); }

  Vector solve(std::span<const double> b) const {
    if (b.size() != n_) throw std::invalid_argument("cholesky solve: dimension mismatch");
    Vector x(b.begin(), b.end());
    for (std::size_t j = 0; j < n_; ++j) {
      x[j] /= values_[col_ptr_[j]];
      for (std::size_t p = col_ptr_[j] + 1; p < col_ptr_[j + 1]; ++p) x[row_idx_[p]] -= values_[p] * x[j];
    }
    for (std::size_t j = n_; j-- > 0;) {
      for (std::size_t p = col_ptr_[j] + 1; p < col_ptr_[j + 1]; ++p) x[j] -= values_[p] * x[row_idx_[p]];
      x[j] /= values_[col_ptr_[j]];
    }
    return x;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<std::size_t> row_idx_;
  std::vector<double> values_;
};

inline Solution<Vector> cholesky_solve(const SparseMatrix& a, std::span<const double> b) {
  if (a.rows() != a.cols() || b.size() != a.rows())
    throw std::invalid_argument("cholesky_solve: dimension mismatch");
  const auto t0 = std::chrono::steady_clock::now();
  SparseCholesky chol(a);
  Solution<Vector> out{chol.solve(b), {}};
  out.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.report.relative_residual = relative_residual(a, out.x, b);
  return out;
}

struct CgOptions {
  double tolerance = 1e-10;  // on ||Ax - b||_2 / ||b||_2
  std::size_t max_iterations = 0;  // 0: 10 * n
  bool jacobi = false;
};

/// Conjugate gradients from x0 = 0. Non-convergence is reported through
/// report.converged; the last iterate is returned either way.
inline Solution<Vector> cg_solve(const SparseMatrix& a, std::span<const double> b,
                                 const CgOptions& opt = {}) {
  if (a.rows() != a.cols() || b.size() != a.rows())
    throw std::invalid_argument("cg_solve: dimension mismatch");
  if (!(opt.tolerance > 0.0)) throw std::invalid_argument("cg_solve: tolerance must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = a.rows();
  const std::size_t max_it = opt.max_iterations ? opt.max_iterations : 10 * n + 10;

  Solution<Vector> out{Vector(n, 0.0), {}};
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    out.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

  Vector inv_diag(n, 1.0);
  if (opt.jacobi)
    for (std::size_t i = 0; i < n; ++i) {
      const double d = a.at(i, i);
      if (!(d > 0.0)) throw NotPositiveDefinite(i);
      inv_diag[i] = 1.0 / d;
    }

  Vector r(b.begin(), b.end()), z(n), p(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  double rnorm = bnorm;
  std::size_t it = 0;
  while (rnorm / bnorm > opt.tolerance && it < max_it) {
    const Vector ap = a.multiply(p);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) throw NotPositiveDefinite(it);
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rnorm = norm2(r);
    ++it;
  }
  out.report.iterations = it;
  out.report.converged = rnorm / bnorm <= opt.tolerance;
  out.report.relative_residual = relative_residual(a, out.x, b);
  out.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace prewavelet
