// State distance measures and the optimal two-outcome discriminator.
#pragma once

#include <cstring>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "efilab/eig.hpp"
#include "efilab/states.hpp"

namespace efilab {

namespace detail {

inline void require_same_layout(const DensityMatrix& a, const DensityMatrix& b,
                                const char* op) {
  if (!(a.layout == b.layout))
    throw std::invalid_argument(std::string(op) + ": layout mismatch");
}

// Deterministic argument ordering so the symmetric measures are bit-exactly
// symmetric in their arguments.
inline bool canonical_before(const ComplexMatrix& a, const ComplexMatrix& b) {
  for (std::size_t i = 0; i < a.a.size(); ++i) {
    if (a.a[i].real() != b.a[i].real()) return a.a[i].real() < b.a[i].real();
    if (a.a[i].imag() != b.a[i].imag()) return a.a[i].imag() < b.a[i].imag();
  }
  return false;
}

}  // namespace detail

// Trace distance, (1/2)||rho - sigma||_1.
inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::require_same_layout(rho, sigma, "trace_distance");
  const bool swap = detail::canonical_before(sigma.mat, rho.mat);
  const DensityMatrix& x = swap ? sigma : rho;
  const DensityMatrix& y = swap ? rho : sigma;
  return 0.5 * trace_norm_hermitian(hermitize(x.mat - y.mat));
}

// Fidelity in the squared convention, (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::require_same_layout(rho, sigma, "fidelity");
  const bool swap = detail::canonical_before(sigma.mat, rho.mat);
  const DensityMatrix& x = swap ? sigma : rho;
  const DensityMatrix& y = swap ? rho : sigma;
  const ComplexMatrix sx = sqrt_psd(hermitize(x.mat));
  const ComplexMatrix inner = hermitize(sx * y.mat * sx);
  const std::vector<double> ev = eigvals_hermitian(inner);
  // sqrt amplifies noise near zero; eigenvalues at round-off scale are junk.
  const double clamp = 1e-14 * std::max(1.0, ev.empty() ? 0.0 : ev.front());
  double s = 0.0;
  for (double v : ev)
    if (v > clamp) s += std::sqrt(v);
  const double f = s * s;
  return std::min(std::max(f, 0.0), 1.0 + 1e-12);
}

struct MeasurementOutcome {
  std::string label;
  ComplexMatrix projector;
};

struct Measurement {
  std::vector<MeasurementOutcome> outcomes;

  void validate(double tol = 1e-9) const {
    if (outcomes.empty()) throw std::invalid_argument("measurement has no outcomes");
    const std::size_t d = outcomes.front().projector.rows;
    ComplexMatrix sum(d, d);
    for (const MeasurementOutcome& o : outcomes) {
      if (o.projector.rows != d || o.projector.cols != d)
        throw std::invalid_argument("measurement projector shapes differ");
      if (!is_hermitian(o.projector, tol))
        throw std::invalid_argument("measurement projector not Hermitian");
      if (max_abs_diff(o.projector * o.projector, o.projector) > tol)
        throw std::invalid_argument("measurement projector not idempotent");
      sum = sum + o.projector;
    }
    if (max_abs_diff(sum, ComplexMatrix::identity(d)) > tol)
      throw std::invalid_argument("measurement projectors do not sum to identity");
  }
};

struct HelstromResult {
  Measurement measurement;  // outcomes "rho", "sigma"
  double success = 0.0;     // (1 + TD)/2
};

// Optimal discrimination of an equal mixture of rho and sigma.  The "rho"
// projector spans the strictly positive eigenvectors of rho - sigma; zero
// eigenvalues go to the "sigma" outcome so results are deterministic.
inline HelstromResult helstrom(const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::require_same_layout(rho, sigma, "helstrom");
  const ComplexMatrix delta = hermitize(rho.mat - sigma.mat);
  const EigResult e = eig_hermitian(delta);
  const std::size_t d = delta.rows;

  ComplexMatrix plus(d, d);
  double td = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    td += std::abs(e.values[k]);
    if (e.values[k] <= kJacobiOffdiagThreshold) continue;
    for (std::size_t i = 0; i < d; ++i) {
      const cplx vi = e.vectors.at(i, k);
      for (std::size_t j = 0; j < d; ++j)
        plus.at(i, j) += vi * std::conj(e.vectors.at(j, k));
    }
  }
  td *= 0.5;

  HelstromResult r;
  r.measurement.outcomes.push_back({"rho", plus});
  r.measurement.outcomes.push_back({"sigma", ComplexMatrix::identity(d) - plus});
  r.success = 0.5 * (1.0 + td);
  return r;
}

// Success probability of an arbitrary two-outcome measurement (first outcome
// claims "rho") on an equal mixture of the two states.
inline double discrimination_success(const ComplexMatrix& claim_rho_projector,
                                     const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::require_same_layout(rho, sigma, "discrimination_success");
  const std::size_t d = rho.mat.rows;
  const ComplexMatrix rest = ComplexMatrix::identity(d) - claim_rho_projector;
  return 0.5 * trace(claim_rho_projector * rho.mat).real() +
         0.5 * trace(rest * sigma.mat).real();
}

}  // namespace efilab
