// Hermitian eigensolver: cyclic Jacobi with complex Givens rotations.
// Off-diagonal threshold 1e-12, hard cap of 100 sweeps.  Robust and exact
// enough (residuals ~1e-13) at the dimensions this project uses (<= 1024).
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "efilab/complex_matrix.hpp"

namespace efilab {

inline constexpr double kJacobiOffdiagThreshold = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kHermitianTol = 1e-9;

struct EigResult {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // columns, matching values
};

namespace detail {

// One cyclic Jacobi pass over A (in place), optionally accumulating V.
// Returns the largest off-diagonal magnitude seen before rotation.
inline double jacobi_sweep(ComplexMatrix& A, ComplexMatrix* V) {
  const std::size_t n = A.rows;
  double off = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const cplx apq = A.at(p, q);
      const double m = std::abs(apq);
      off = std::max(off, m);
      if (m <= kJacobiOffdiagThreshold) continue;

      const double app = A.at(p, p).real();
      const double aqq = A.at(q, q).real();
      const cplx phase = apq / m;  // e^{i phi}
      const double tau = (aqq - app) / (2.0 * m);
      const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      const cplx sp = s * phase;              // s e^{i phi}
      const cplx cp = c * phase;              // c e^{i phi}
      const cplx spc = s * std::conj(phase);  // s e^{-i phi}
      const cplx cpc = c * std::conj(phase);  // c e^{-i phi}

      // A <- A * J with J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p,q)
      for (std::size_t r = 0; r < n; ++r) {
        const cplx xp = A.at(r, p), xq = A.at(r, q);
        A.at(r, p) = c * xp - spc * xq;
        A.at(r, q) = s * xp + cpc * xq;
      }
      // A <- J^dagger * A
      for (std::size_t r = 0; r < n; ++r) {
        const cplx xp = A.at(p, r), xq = A.at(q, r);
        A.at(p, r) = c * xp - sp * xq;
        A.at(q, r) = s * xp + cp * xq;
      }
      A.at(p, q) = 0.0;
      A.at(q, p) = 0.0;
      if (V) {
        for (std::size_t r = 0; r < n; ++r) {
          const cplx xp = V->at(r, p), xq = V->at(r, q);
          V->at(r, p) = c * xp - spc * xq;
          V->at(r, q) = s * xp + cpc * xq;
        }
      }
    }
  }
  return off;
}

inline void jacobi_run(ComplexMatrix& A, ComplexMatrix* V) {
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (jacobi_sweep(A, V) <= kJacobiOffdiagThreshold) return;
  }
  // Check convergence after the final sweep as well.
  double off = 0.0;
  for (std::size_t p = 0; p < A.rows; ++p)
    for (std::size_t q = p + 1; q < A.cols; ++q) off = std::max(off, std::abs(A.at(p, q)));
  if (off > kJacobiOffdiagThreshold)
    throw std::runtime_error("jacobi eigensolver failed to converge within 100 sweeps");
}

}  // namespace detail

// Full eigendecomposition of a Hermitian matrix; eigenvalues descending.
inline EigResult eig_hermitian(const ComplexMatrix& h) {
  if (h.rows != h.cols) throw std::invalid_argument("eig_hermitian: matrix not square");
  if (!finite_entries(h)) throw std::invalid_argument("eig_hermitian: non-finite entries");
  if (!is_hermitian(h, kHermitianTol))
    throw std::invalid_argument("eig_hermitian: matrix not Hermitian within 1e-9");
  ComplexMatrix A = hermitize(h);
  ComplexMatrix V = ComplexMatrix::identity(A.rows);
  detail::jacobi_run(A, &V);

  const std::size_t n = A.rows;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = A.at(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

  EigResult r;
  r.values.resize(n);
  r.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    r.values[k] = diag[order[k]];
    for (std::size_t i = 0; i < n; ++i) r.vectors.at(i, k) = V.at(i, order[k]);
  }
  return r;
}

// Eigenvalues only (descending); skips eigenvector accumulation.
inline std::vector<double> eigvals_hermitian(const ComplexMatrix& h) {
  if (h.rows != h.cols) throw std::invalid_argument("eigvals_hermitian: matrix not square");
  if (!is_hermitian(h, kHermitianTol))
    throw std::invalid_argument("eigvals_hermitian: matrix not Hermitian within 1e-9");
  ComplexMatrix A = hermitize(h);
  detail::jacobi_run(A, nullptr);
  std::vector<double> vals(A.rows);
  for (std::size_t i = 0; i < A.rows; ++i) vals[i] = A.at(i, i).real();
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  return vals;
}

// Trace norm of a Hermitian matrix.  Large matrices produced here are very
// low-rank (partial traces of modest pure states), so the range is compressed
// with pivoted Gram-Schmidt before the eigensolve.
inline double trace_norm_hermitian(const ComplexMatrix& delta) {
  const std::size_t n = delta.rows;
  if (n != delta.cols) throw std::invalid_argument("trace_norm: matrix not square");
  if (n <= 64) {
    double s = 0.0;
    for (double v : eigvals_hermitian(delta)) s += std::abs(v);
    return s;
  }

  const double pivot_tol = 1e-13 * std::max(1.0, max_abs(delta)) * n;
  // Column copies; orthonormal basis of the range grows in `basis`.
  std::vector<std::vector<cplx>> cols(n, std::vector<cplx>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) cols[j][i] = delta.at(i, j);
  std::vector<double> norm2(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (const cplx& z : cols[j]) s += std::norm(z);
    norm2[j] = s;
  }

  std::vector<std::vector<cplx>> basis;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t piv = 0;
    for (std::size_t j = 1; j < n; ++j)
      if (norm2[j] > norm2[piv]) piv = j;
    const double nn = std::sqrt(std::max(norm2[piv], 0.0));
    if (nn <= pivot_tol) break;
    std::vector<cplx> q = cols[piv];
    for (cplx& z : q) z /= nn;
    // Deflate every remaining column.
    for (std::size_t j = 0; j < n; ++j) {
      if (norm2[j] <= 0.0) continue;
      cplx ip = 0.0;
      for (std::size_t i = 0; i < n; ++i) ip += std::conj(q[i]) * cols[j][i];
      if (ip == cplx{}) continue;
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cols[j][i] -= ip * q[i];
        s += std::norm(cols[j][i]);
      }
      norm2[j] = s;
    }
    norm2[piv] = 0.0;
    basis.push_back(std::move(q));
  }

  const std::size_t r = basis.size();
  if (r == 0) return 0.0;
  // B = Q^dagger Delta Q restricted to the range; same nonzero spectrum.
  ComplexMatrix DQ(n, r);
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = 0.0;
      const cplx* row = &delta.a[i * n];
      const std::vector<cplx>& q = basis[k];
      for (std::size_t j = 0; j < n; ++j) s += row[j] * q[j];
      DQ.at(i, k) = s;
    }
  ComplexMatrix B(r, r);
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t l = 0; l < r; ++l) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += std::conj(basis[k][i]) * DQ.at(i, l);
      B.at(k, l) = s;
    }
  double s = 0.0;
  for (double v : eigvals_hermitian(hermitize(B))) s += std::abs(v);
  return s;
}

// PSD square root via the spectral decomposition.  Eigenvalues in [-1e-9, 0)
// are clamped to zero; anything more negative is an error.
inline ComplexMatrix sqrt_psd(const ComplexMatrix& h, double neg_tol = 1e-9) {
  EigResult e = eig_hermitian(h);
  const std::size_t n = h.rows;
  ComplexMatrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    double v = e.values[k];
    if (v < -neg_tol)
      throw std::invalid_argument("sqrt_psd: matrix has eigenvalue below -1e-9");
    if (v < 0.0) v = 0.0;
    const double sv = std::sqrt(v);
    if (sv == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vi = sv * e.vectors.at(i, k);
      for (std::size_t j = 0; j < n; ++j) r.at(i, j) += vi * std::conj(e.vectors.at(j, k));
    }
  }
  return r;
}

}  // namespace efilab
