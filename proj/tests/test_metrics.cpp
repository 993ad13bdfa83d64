#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "efilab/metrics.hpp"
#include "efilab/random.hpp"
#include "efilab/states.hpp"

using namespace efilab;

namespace {

RegisterLayout one_qubit(const std::string& name = "q") {
  return RegisterLayout({{name, 1}});
}

DensityMatrix pure_dm(const RegisterLayout& layout, std::vector<cplx> amps) {
  PureState s;
  s.layout = layout;
  s.amps = std::move(amps);
  return density_from_pure(s);
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

DensityMatrix ket0() { return pure_dm(one_qubit(), {1.0, 0.0}); }
DensityMatrix ket1() { return pure_dm(one_qubit(), {0.0, 1.0}); }
DensityMatrix ket_plus() { return pure_dm(one_qubit(), {kInvSqrt2, kInvSqrt2}); }

DensityMatrix maximally_mixed() {
  DensityMatrix rho;
  rho.layout = one_qubit();
  rho.mat = ComplexMatrix(2, 2);
  rho.mat.at(0, 0) = 0.5;
  rho.mat.at(1, 1) = 0.5;
  return rho;
}

DensityMatrix conjugated(const DensityMatrix& rho, const ComplexMatrix& u) {
  DensityMatrix out;
  out.layout = rho.layout;
  out.mat = hermitize(u * rho.mat * adjoint(u));
  return out;
}

// Independent oracle for pure states: TD = sqrt(1 - |<psi|phi>|^2).
double pure_td_oracle(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx ip = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ip += std::conj(a[i]) * b[i];
  return std::sqrt(std::max(0.0, 1.0 - std::norm(ip)));
}

}  // namespace

TEST_CASE("trace distance: reference values") {
  REQUIRE(trace_distance(ket0(), ket1()) == Catch::Approx(1.0).margin(1e-12));
  // Pure-state closed form sqrt(1 - |<0|+>|^2) = 1/sqrt(2).
  const double expected = pure_td_oracle({1.0, 0.0}, {kInvSqrt2, kInvSqrt2});
  REQUIRE(expected == Catch::Approx(kInvSqrt2).margin(1e-15));
  REQUIRE(trace_distance(ket0(), ket_plus()) == Catch::Approx(expected).margin(1e-12));
  // Eigenvalues of I/2 - |0><0| are +-1/2.
  REQUIRE(trace_distance(maximally_mixed(), ket0()) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("trace distance: layout mismatch rejected") {
  DensityMatrix a = ket0();
  DensityMatrix b = pure_dm(one_qubit("r"), {1.0, 0.0});
  REQUIRE_THROWS_AS(trace_distance(a, b), std::invalid_argument);
}

TEST_CASE("fidelity: reference values") {
  REQUIRE(fidelity(ket0(), ket0()) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(fidelity(ket0(), ket_plus()) == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(fidelity(ket0(), ket1()) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("metric properties on random states") {
  Rng rng(42);
  const RegisterLayout lay({{"q", 2}});
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix a = rng.density(lay);
    const DensityMatrix b = rng.density(lay);
    const DensityMatrix c = rng.density(lay);
    const double tab = trace_distance(a, b);
    const double f = fidelity(a, b);

    // Symmetry is bit-exact by construction.
    REQUIRE(trace_distance(b, a) == tab);
    REQUIRE(fidelity(b, a) == f);
    // F^2 + TD^2 <= 1.
    REQUIRE(f * f + tab * tab <= 1.0 + 1e-9);
    // Triangle inequality.
    REQUIRE(trace_distance(a, c) <= tab + trace_distance(b, c) + 1e-9);
    // Range.
    REQUIRE(tab >= -1e-12);
    REQUIRE(tab <= 1.0 + 1e-12);
  }
}

TEST_CASE("unitary invariance of TD and fidelity") {
  Rng rng(5);
  const RegisterLayout lay({{"q", 2}});
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix a = rng.density(lay);
    const DensityMatrix b = rng.density(lay);
    const ComplexMatrix u = rng.unitary(4);
    REQUIRE(trace_distance(conjugated(a, u), conjugated(b, u)) ==
            Catch::Approx(trace_distance(a, b)).margin(1e-9));
    REQUIRE(fidelity(conjugated(a, u), conjugated(b, u)) ==
            Catch::Approx(fidelity(a, b)).margin(1e-9));
  }
}

TEST_CASE("contractivity of TD under partial trace") {
  Rng rng(9);
  const RegisterLayout lay({{"a", 1}, {"b", 1}});
  for (int trial = 0; trial < 30; ++trial) {
    const DensityMatrix x = rng.density(lay);
    const DensityMatrix y = rng.density(lay);
    const double full = trace_distance(x, y);
    const double reduced =
        trace_distance(partial_trace(x, {"a"}), partial_trace(y, {"a"}));
    REQUIRE(reduced <= full + 1e-9);
  }
}

TEST_CASE("pure-state law TD = sqrt(1 - F)") {
  Rng rng(17);
  const RegisterLayout lay({{"q", 2}});
  for (int trial = 0; trial < 30; ++trial) {
    const PureState a = rng.pure_state(lay);
    const PureState b = rng.pure_state(lay);
    const DensityMatrix da = density_from_pure(a);
    const DensityMatrix db = density_from_pure(b);
    const double td = trace_distance(da, db);
    const double f = fidelity(da, db);
    REQUIRE(td == Catch::Approx(std::sqrt(std::max(0.0, 1.0 - f))).margin(1e-9));
    REQUIRE(td == Catch::Approx(pure_td_oracle(a.amps, b.amps)).margin(1e-9));
  }
}

TEST_CASE("helstrom: reference values and attainment") {
  const HelstromResult orth = helstrom(ket0(), ket1());
  REQUIRE(orth.success == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(max_abs_diff(orth.measurement.outcomes[0].projector, ket0().mat) < 1e-9);
  REQUIRE(max_abs_diff(orth.measurement.outcomes[1].projector, ket1().mat) < 1e-9);

  const HelstromResult zp = helstrom(ket0(), ket_plus());
  REQUIRE(zp.success == Catch::Approx(0.5 * (1.0 + kInvSqrt2)).margin(1e-9));

  const HelstromResult same = helstrom(ket_plus(), ket_plus());
  REQUIRE(same.success == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("helstrom: measurement is valid and optimal among random measurements") {
  Rng rng(23);
  const RegisterLayout lay({{"q", 2}});
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix a = rng.density(lay);
    const DensityMatrix b = rng.density(lay);
    const HelstromResult h = helstrom(a, b);
    h.measurement.validate(1e-8);
    const double attained =
        discrimination_success(h.measurement.outcomes[0].projector, a, b);
    REQUIRE(attained == Catch::Approx(h.success).margin(1e-9));
    for (int probe = 0; probe < 50; ++probe) {
      const ComplexMatrix p = rng.projector(4, 1 + rng.integer(0, 2));
      REQUIRE(discrimination_success(p, a, b) <= h.success + 1e-9);
    }
  }
}
