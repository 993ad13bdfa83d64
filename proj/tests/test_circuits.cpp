#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "efilab/circuit.hpp"
#include "efilab/metrics.hpp"
#include "efilab/random.hpp"

using namespace efilab;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

GateCircuit plus_circuit() {
  GateCircuit c;
  c.layout = RegisterLayout({{"c", 1}});
  c.outputs = {"c"};
  c.gates = {g1(GateKind::H, qaddr("c"))};
  return c;
}

// Exact k-qubit unitary of a gate list, for oracle comparisons.
ComplexMatrix circuit_unitary(const GateCircuit& c) {
  const int n = c.layout.total_qubits();
  const std::size_t d = std::size_t{1} << n;
  ComplexMatrix u(d, d);
  for (std::size_t col = 0; col < d; ++col) {
    PureState psi = basis_state(c.layout, col);
    for (const Gate& g : c.gates) apply_gate(psi, g);
    for (std::size_t row = 0; row < d; ++row) u.at(row, col) = psi.amps[row];
  }
  return u;
}

}  // namespace

TEST_CASE("run_generator: H gives |+><+|") {
  const DensityMatrix rho = run_generator(plus_circuit());
  REQUIRE(std::abs(rho.mat.at(0, 0) - cplx{0.5}) < 1e-12);
  REQUIRE(std::abs(rho.mat.at(0, 1) - cplx{0.5}) < 1e-12);
}

TEST_CASE("run_generator: Bell pair reduced to one side is I/2") {
  GateCircuit c;
  c.layout = RegisterLayout({{"c", 1}, {"r", 1}});
  c.outputs = {"c"};
  c.gates = {g1(GateKind::H, qaddr("r")), g2(GateKind::CNOT, qaddr("r"), qaddr("c"))};
  const DensityMatrix rho = run_generator(c);
  REQUIRE(std::abs(rho.mat.at(0, 0) - cplx{0.5}) < 1e-12);
  REQUIRE(std::abs(rho.mat.at(1, 1) - cplx{0.5}) < 1e-12);
  REQUIRE(std::abs(rho.mat.at(0, 1)) < 1e-12);
}

TEST_CASE("run_generator: empty circuit emits the all-zero state") {
  GateCircuit c;
  c.layout = RegisterLayout({{"a", 2}});
  c.outputs = {"a"};
  const DensityMatrix rho = run_generator(c);
  REQUIRE(std::abs(rho.mat.at(0, 0) - cplx{1.0}) < 1e-15);
}

TEST_CASE("run_generator: bound inputs and unbound errors") {
  GateCircuit c;
  c.layout = RegisterLayout({{"in", 2}, {"out", 2}});
  c.inputs = {"in"};
  c.outputs = {"out"};
  c.gates = {g2(GateKind::CNOT, qaddr("in", 0), qaddr("out", 0)),
             g2(GateKind::CNOT, qaddr("in", 1), qaddr("out", 1))};
  REQUIRE_THROWS_WITH(run_generator(c), Catch::Matchers::ContainsSubstring("unbound input"));
  const DensityMatrix rho = run_generator(c, {{"in", 2}});  // |10>
  REQUIRE(std::abs(rho.mat.at(2, 2) - cplx{1.0}) < 1e-12);
}

TEST_CASE("gate validation") {
  GateCircuit c;
  c.layout = RegisterLayout({{"a", 1}});
  c.outputs = {"a"};
  SECTION("unknown target register") {
    c.gates = {g1(GateKind::X, qaddr("b"))};
    REQUIRE_THROWS_AS(validate_circuit(c), std::invalid_argument);
  }
  SECTION("non-unitary raw gate") {
    ComplexMatrix m(2, 2);
    m.at(0, 0) = 2.0;
    c.gates = {raw1(qaddr("a"), m)};
    REQUIRE_THROWS_WITH(validate_circuit(c),
                        Catch::Matchers::ContainsSubstring("non-unitary raw gate"));
  }
  SECTION("arity mismatch") {
    c.gates = {Gate{GateKind::CNOT, {qaddr("a")}, std::nullopt}};
    REQUIRE_THROWS_AS(validate_circuit(c), std::invalid_argument);
  }
  SECTION("repeated targets") {
    c.layout = RegisterLayout({{"a", 2}});
    c.gates = {g2(GateKind::CNOT, qaddr("a", 0), qaddr("a", 0))};
    REQUIRE_THROWS_AS(validate_circuit(c), std::invalid_argument);
  }
}

TEST_CASE("toffoli decomposition matches the exact 8x8 matrix") {
  GateCircuit c;
  c.layout = RegisterLayout({{"a", 1}, {"b", 1}, {"t", 1}});
  append_toffoli(c.gates, qaddr("a"), qaddr("b"), qaddr("t"));
  const ComplexMatrix u = circuit_unitary(c);
  ComplexMatrix want = ComplexMatrix::identity(8);
  want.at(6, 6) = 0.0;
  want.at(7, 7) = 0.0;
  want.at(6, 7) = 1.0;
  want.at(7, 6) = 1.0;
  REQUIRE(max_abs_diff(u, want) < 1e-12);
}

TEST_CASE("controlled-gate emission matches block-diagonal oracles") {
  Rng rng(21);
  const RegisterLayout lay({{"c", 1}, {"x", 1}, {"y", 1}});
  const std::vector<Gate> plain = {
      g1(GateKind::H, qaddr("x")),
      g1(GateKind::T, qaddr("y")),
      raw1(qaddr("x"), rng.unitary(2)),
      g2(GateKind::CNOT, qaddr("x"), qaddr("y")),
      g2(GateKind::CZ, qaddr("x"), qaddr("y")),
      g2(GateKind::SWAP, qaddr("x"), qaddr("y")),
  };
  for (const Gate& g : plain) {
    GateCircuit c;
    c.layout = lay;
    append_controlled(c.gates, qaddr("c"), g);
    const ComplexMatrix u = circuit_unitary(c);
    // Oracle: diag(I_4, U_g embedded on x,y).
    GateCircuit sub;
    sub.layout = RegisterLayout({{"x", 1}, {"y", 1}});
    sub.gates = {g};
    const ComplexMatrix ug = circuit_unitary(sub);
    ComplexMatrix want(8, 8);
    for (int i = 0; i < 4; ++i) want.at(i, i) = 1.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) want.at(4 + i, 4 + j) = ug.at(i, j);
    REQUIRE(max_abs_diff(u, want) < 1e-12);
  }
}

TEST_CASE("mcx with 3 and 4 controls") {
  for (int k : {3, 4}) {
    GateCircuit c;
    std::vector<Register> regs;
    std::vector<QubitAddr> controls;
    for (int i = 0; i < k; ++i) {
      regs.push_back({"c" + std::to_string(i), 1});
      controls.push_back(qaddr("c" + std::to_string(i)));
    }
    regs.push_back({"t", 1});
    regs.push_back({"s", 2});
    c.layout = RegisterLayout(regs);
    append_mcx(c.gates, controls, qaddr("t"),
               {qaddr("s", 0), qaddr("s", 1)});
    const ComplexMatrix u = circuit_unitary(c);
    const int n = k + 3;
    const std::size_t d = std::size_t{1} << n;
    for (std::size_t col = 0; col < d; ++col) {
      // scratch must stay clean: only consider scratch = 0 columns
      if (col & 0x3) continue;
      const bool all_on = ((col >> 3) == (std::size_t{1} << k) - 1);
      const std::size_t want_row = all_on ? (col ^ 0x4) : col;
      REQUIRE(std::abs(u.at(want_row, col) - cplx{1.0}) < 1e-12);
    }
  }
}

TEST_CASE("component splitting matches the monolithic run") {
  Rng rng(37);
  // Two disconnected blocks plus an interleaved idle register.
  GateCircuit c;
  c.layout = RegisterLayout({{"a", 1}, {"idle", 1}, {"b", 2}});
  c.outputs = {"a", "idle", "b"};
  c.gates = {g1(GateKind::H, qaddr("a")),
             raw1(qaddr("b", 0), rng.unitary(2)),
             g2(GateKind::CNOT, qaddr("b", 0), qaddr("b", 1))};
  const DensityMatrix split = run_generator(c);  // takes the component path
  // Monolithic oracle: single pure run reduced directly.
  const PureState psi = run_pure(c);
  const DensityMatrix mono = reduce_pure(psi, {"a", "idle", "b"});
  REQUIRE(max_abs_diff(split.mat, mono.mat) < 1e-12);
}

TEST_CASE("apply_channel: readout circuit distinguishes basis states") {
  GateCircuit d;
  d.layout = RegisterLayout({{"c", 1}, {"o", 1}});
  d.inputs = {"c"};
  d.outputs = {"o"};
  d.gates = {g2(GateKind::CNOT, qaddr("c"), qaddr("o"))};

  DensityMatrix zero;
  zero.layout = RegisterLayout({{"c", 1}});
  zero.mat = ComplexMatrix(2, 2);
  zero.mat.at(0, 0) = 1.0;
  const DensityMatrix out = apply_channel(d, zero);
  REQUIRE(std::abs(out.mat.at(0, 0) - cplx{1.0}) < 1e-12);

  DensityMatrix plus = run_generator(plus_circuit());
  const DensityMatrix out_plus = apply_channel(d, plus);
  REQUIRE(std::abs(out_plus.mat.at(1, 1) - cplx{0.5}) < 1e-12);

  // layout name must match the channel input
  DensityMatrix renamed = plus;
  renamed.layout = RegisterLayout({{"q", 1}});
  REQUIRE_THROWS_AS(apply_channel(d, renamed), std::invalid_argument);
}
