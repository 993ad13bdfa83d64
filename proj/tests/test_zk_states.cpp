#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "efilab/metrics.hpp"
#include "efilab/zk_states.hpp"

using namespace efilab;

namespace {

LocalStep local(const std::string& party, const RegisterLayout& lay,
                std::vector<Gate> gates) {
  LocalStep s;
  s.party = party;
  s.circuit.layout = lay;
  s.circuit.gates = std::move(gates);
  return s;
}

// k = 1, three qubits: the verifier entangles with the message, the prover
// swaps in a fresh |0> response.
RoundedProtocol swap_response_protocol() {
  RoundedProtocol rp;
  ProtocolSpec& p = rp.spec;
  p.layout = RegisterLayout({{"v", 1}, {"msg", 1}, {"p", 1}});
  p.owner0 = {{"v", "A"}, {"msg", "A"}, {"p", "B"}};
  p.steps = {
      local("A", RegisterLayout({{"v", 1}, {"msg", 1}}),
            {g1(GateKind::H, qaddr("v")), g2(GateKind::CNOT, qaddr("v"), qaddr("msg"))}),
      SendStep{"msg", "B"},
      local("B", RegisterLayout({{"msg", 1}, {"p", 1}}),
            {g2(GateKind::SWAP, qaddr("msg"), qaddr("p"))}),
      SendStep{"msg", "A"},
  };
  rp.rounds = {{0, 2}};
  rp.message = "msg";
  return rp;
}

// The verifier never touches the message; the prover does nothing.
RoundedProtocol inert_protocol() {
  RoundedProtocol rp;
  ProtocolSpec& p = rp.spec;
  p.layout = RegisterLayout({{"v", 1}, {"msg", 1}, {"p", 1}});
  p.owner0 = {{"v", "A"}, {"msg", "A"}, {"p", "B"}};
  p.steps = {
      local("A", RegisterLayout({{"v", 1}}), {g1(GateKind::H, qaddr("v"))}),
      SendStep{"msg", "B"},
      local("B", RegisterLayout({{"p", 1}}), {g1(GateKind::I, qaddr("p"))}),
      SendStep{"msg", "A"},
  };
  rp.rounds = {{0, 2}};
  rp.message = "msg";
  return rp;
}

// k = 2, four qubits, both rounds genuinely move information.
RoundedProtocol two_round_protocol() {
  RoundedProtocol rp;
  ProtocolSpec& p = rp.spec;
  p.layout = RegisterLayout({{"v0", 1}, {"v1", 1}, {"msg", 1}, {"p0", 1}});
  p.owner0 = {{"v0", "A"}, {"v1", "A"}, {"msg", "A"}, {"p0", "B"}};
  p.steps = {
      local("A", RegisterLayout({{"v0", 1}, {"msg", 1}}),
            {g1(GateKind::H, qaddr("v0")), g2(GateKind::CNOT, qaddr("v0"), qaddr("msg"))}),
      SendStep{"msg", "B"},
      local("B", RegisterLayout({{"msg", 1}, {"p0", 1}}),
            {g2(GateKind::CNOT, qaddr("msg"), qaddr("p0")), g1(GateKind::H, qaddr("msg"))}),
      SendStep{"msg", "A"},
      local("A", RegisterLayout({{"v1", 1}, {"msg", 1}}),
            {g2(GateKind::CNOT, qaddr("msg"), qaddr("v1")), g1(GateKind::T, qaddr("msg"))}),
      SendStep{"msg", "B"},
      local("B", RegisterLayout({{"msg", 1}, {"p0", 1}}),
            {g2(GateKind::CZ, qaddr("p0"), qaddr("msg"))}),
      SendStep{"msg", "A"},
  };
  rp.rounds = {{0, 2}, {4, 6}};
  rp.message = "msg";
  return rp;
}

}  // namespace

TEST_CASE("k=1 swap-response: stored response differs from the outgoing message") {
  const InstanceStatePair pair = extract_instance_states(swap_response_protocol());
  REQUIRE(pair.rho_factors.size() == 1);
  REQUIRE(pair.xi_factors.size() == 1);

  // Oracle, built by hand: xi_1 is a Bell pair on (v, msg); rho_1 is
  // I/2 (x) |0><0| because the prover swapped the message out.
  const RegisterLayout lay({{"v", 1}, {"msg", 1}});
  PureState bell;
  bell.layout = lay;
  const double s = 1.0 / std::sqrt(2.0);
  bell.amps = {s, 0.0, 0.0, s};
  const DensityMatrix xi_oracle = density_from_pure(bell);
  DensityMatrix rho_oracle;
  rho_oracle.layout = lay;
  rho_oracle.mat = ComplexMatrix(4, 4);
  rho_oracle.mat.at(0, 0) = 0.5;
  rho_oracle.mat.at(2, 2) = 0.5;

  REQUIRE(max_abs_diff(pair.xi_factors[0].mat, xi_oracle.mat) < 1e-12);
  REQUIRE(max_abs_diff(pair.rho_factors[0].mat, rho_oracle.mat) < 1e-12);
  REQUIRE(pair.farness.value ==
          Catch::Approx(trace_distance(rho_oracle, xi_oracle)).margin(1e-9));
  REQUIRE_FALSE(pair.farness.lower_bound);
  // Closed form for this difference: (sqrt(5) + 1) / 4.
  REQUIRE(pair.farness.value ==
          Catch::Approx((std::sqrt(5.0) + 1.0) / 4.0).margin(1e-9));
}

TEST_CASE("inert protocol: prover action cannot move the verifier's state") {
  const InstanceStatePair pair = extract_instance_states(inert_protocol());
  REQUIRE(pair.farness.value == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(max_abs_diff(pair.rho_factors[0].mat, pair.xi_factors[0].mat) < 1e-12);
}

TEST_CASE("k=2: both factor lists have exactly two entries") {
  const InstanceStatePair pair = extract_instance_states(two_round_protocol());
  REQUIRE(pair.rho_factors.size() == 2);
  REQUIRE(pair.xi_factors.size() == 2);
  REQUIRE_FALSE(pair.farness.lower_bound);
}

TEST_CASE("snapshot extraction agrees with truncated re-runs") {
  for (const RoundedProtocol& rp :
       {swap_response_protocol(), inert_protocol(), two_round_protocol()}) {
    const InstanceStatePair pair = extract_instance_states(rp);
    for (std::size_t i = 0; i < pair.rho_factors.size(); ++i) {
      const DensityMatrix trunc = truncated_round_state(rp, static_cast<int>(i));
      REQUIRE(max_abs_diff(pair.rho_factors[i].mat, trunc.mat) <= 1e-9);
    }
  }
}

TEST_CASE("honest-run factors are identical to the extracted ones") {
  // The truncated re-run is the honest-interaction state after i rounds; the
  // purified executions share every operation, so equality is exact.
  const RoundedProtocol rp = two_round_protocol();
  const InstanceStatePair pair = extract_instance_states(rp);
  for (std::size_t i = 0; i < pair.rho_factors.size(); ++i) {
    const DensityMatrix trunc = truncated_round_state(rp, static_cast<int>(i));
    REQUIRE(max_abs_diff(pair.rho_factors[i].mat, trunc.mat) == 0.0);
  }
}

TEST_CASE("instance_farness: exact and lower-bound modes") {
  // Factors (|0> vs |+>) and (|0> vs |0>).
  const RegisterLayout lay({{"q", 1}});
  auto pure = [&](std::vector<cplx> amps) {
    PureState s;
    s.layout = lay;
    s.amps = std::move(amps);
    return density_from_pure(s);
  };
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<DensityMatrix> rho = {pure({1.0, 0.0}), pure({1.0, 0.0})};
  const std::vector<DensityMatrix> xi = {pure({s, s}), pure({1.0, 0.0})};

  const FarnessValue exact = instance_farness(rho, xi, 10);
  REQUIRE_FALSE(exact.lower_bound);
  REQUIRE(exact.value == Catch::Approx(s).margin(1e-9));

  const FarnessValue lower = instance_farness(rho, xi, 1);  // forces the bound
  REQUIRE(lower.lower_bound);
  REQUIRE(lower.value == Catch::Approx(s).margin(1e-9));
  REQUIRE(lower.value <= exact.value + 1e-9);

  // Identical factor lists collapse to zero, single factors reduce to TD.
  REQUIRE(instance_farness(rho, rho, 10).value == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(instance_farness({rho[0]}, {xi[0]}, 10).value == Catch::Approx(s).margin(1e-9));
}

TEST_CASE("malformed round structures are rejected") {
  RoundedProtocol rp = swap_response_protocol();
  SECTION("round pointing at a send step") {
    rp.rounds = {{1, 2}};
    REQUIRE_THROWS_AS(extract_instance_states(rp), std::invalid_argument);
  }
  SECTION("missing return send") {
    rp.spec.steps.pop_back();
    REQUIRE_THROWS_WITH(extract_instance_states(rp),
                        Catch::Matchers::ContainsSubstring("out and back"));
  }
  SECTION("non-message register sent") {
    rp.spec.steps.push_back(SendStep{"v", "B"});
    REQUIRE_THROWS_WITH(extract_instance_states(rp),
                        Catch::Matchers::ContainsSubstring("only the message register"));
  }
}
