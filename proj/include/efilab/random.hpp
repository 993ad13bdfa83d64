// Seeded sampling of states, unitaries and measurements.  Every sampled
// quantity in tests and reports flows through one of these, so a seed pins
// the whole run.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "efilab/complex_matrix.hpp"
#include "efilab/states.hpp"

namespace efilab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::mt19937_64& engine() { return gen_; }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }

  std::uint64_t integer(std::uint64_t lo, std::uint64_t hi) {  // inclusive
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(gen_);
  }

  cplx gaussian() {
    std::normal_distribution<double> d(0.0, 1.0);
    return {d(gen_), d(gen_)};
  }

  ComplexMatrix ginibre(std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (cplx& z : m.a) z = gaussian();
    return m;
  }

  // Haar-random unitary: QR of a Ginibre matrix via modified Gram-Schmidt.
  ComplexMatrix unitary(std::size_t d) {
    ComplexMatrix g = ginibre(d, d);
    for (std::size_t c = 0; c < d; ++c) {
      for (std::size_t prev = 0; prev < c; ++prev) {
        cplx ip = 0.0;
        for (std::size_t r = 0; r < d; ++r) ip += std::conj(g.at(r, prev)) * g.at(r, c);
        for (std::size_t r = 0; r < d; ++r) g.at(r, c) -= ip * g.at(r, prev);
      }
      double nn = 0.0;
      for (std::size_t r = 0; r < d; ++r) nn += std::norm(g.at(r, c));
      nn = std::sqrt(nn);
      for (std::size_t r = 0; r < d; ++r) g.at(r, c) /= nn;
    }
    return g;
  }

  ComplexMatrix hermitian(std::size_t d) {
    ComplexMatrix g = ginibre(d, d);
    return hermitize(g);
  }

  PureState pure_state(const RegisterLayout& layout) {
    PureState s;
    s.layout = layout;
    s.amps.resize(std::size_t{1} << layout.total_qubits());
    double nn = 0.0;
    for (cplx& z : s.amps) {
      z = gaussian();
      nn += std::norm(z);
    }
    nn = std::sqrt(nn);
    for (cplx& z : s.amps) z /= nn;
    return s;
  }

  // Random mixed state of the given rank (Ginibre construction).
  DensityMatrix density(const RegisterLayout& layout, std::size_t rank = 0) {
    const std::size_t d = std::size_t{1} << layout.total_qubits();
    if (rank == 0 || rank > d) rank = d;
    ComplexMatrix g = ginibre(d, rank);
    ComplexMatrix m = g * adjoint(g);
    const double tr = trace(m).real();
    DensityMatrix rho;
    rho.layout = layout;
    rho.mat = (cplx{1.0 / tr} * m);
    rho.mat = hermitize(rho.mat);
    return rho;
  }

  // Random rank-k projector (span of k columns of a Haar unitary).
  ComplexMatrix projector(std::size_t d, std::size_t k) {
    ComplexMatrix u = unitary(d);
    ComplexMatrix p(d, d);
    for (std::size_t col = 0; col < k; ++col)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          p.at(i, j) += u.at(i, col) * std::conj(u.at(j, col));
    return hermitize(p);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace efilab
