// Dense complex matrices, row-major.  Small and self-contained: everything in
// this project lives at <= 2^10 dimensions, where simple loops are plenty.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace efilab {

using cplx = std::complex<double>;

struct ComplexMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> a;  // a[r * cols + c]

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  cplx& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const cplx& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
};

inline bool finite_entries(const ComplexMatrix& m) {
  for (const cplx& z : m.a)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix r(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) r.at(j, i) = std::conj(m.at(i, j));
  return r;
}

inline ComplexMatrix operator*(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix product: shape mismatch");
  ComplexMatrix r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t k = 0; k < x.cols; ++k) {
      const cplx v = x.at(i, k);
      if (v == cplx{}) continue;
      const cplx* yrow = &y.a[k * y.cols];
      cplx* rrow = &r.a[i * r.cols];
      for (std::size_t j = 0; j < y.cols; ++j) rrow[j] += v * yrow[j];
    }
  }
  return r;
}

inline ComplexMatrix operator+(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("matrix sum: shape mismatch");
  ComplexMatrix r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
  return r;
}

inline ComplexMatrix operator-(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("matrix difference: shape mismatch");
  ComplexMatrix r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
  return r;
}

inline ComplexMatrix operator*(cplx s, const ComplexMatrix& m) {
  ComplexMatrix r = m;
  for (cplx& z : r.a) z *= s;
  return r;
}

inline cplx trace(const ComplexMatrix& m) {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(m.rows, m.cols); ++i) t += m.at(i, i);
  return t;
}

inline ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix r(x.rows * y.rows, x.cols * y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) {
      const cplx v = x.at(i, j);
      if (v == cplx{}) continue;
      for (std::size_t k = 0; k < y.rows; ++k)
        for (std::size_t l = 0; l < y.cols; ++l)
          r.at(i * y.rows + k, j * y.cols + l) = v * y.at(k, l);
    }
  return r;
}

inline double max_abs(const ComplexMatrix& m) {
  double mx = 0.0;
  for (const cplx& z : m.a) mx = std::max(mx, std::abs(z));
  return mx;
}

inline double max_abs_diff(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double mx = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) mx = std::max(mx, std::abs(x.a[i] - y.a[i]));
  return mx;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows != m.cols) return false;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = i; j < m.cols; ++j)
      if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > tol) return false;
  return true;
}

inline bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows != m.cols) return false;
  const ComplexMatrix p = adjoint(m) * m;
  return max_abs_diff(p, ComplexMatrix::identity(m.rows)) <= tol;
}

// Averages away the anti-Hermitian part; used before eigensolves to absorb
// round-off from long operation chains.
inline ComplexMatrix hermitize(const ComplexMatrix& m) {
  ComplexMatrix r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      r.at(i, j) = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
  return r;
}

}  // namespace efilab
