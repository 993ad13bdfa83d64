#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "efilab/ot.hpp"
#include "efilab/random.hpp"

using namespace efilab;

namespace {

GateCircuit const_circuit(const std::vector<Gate>& gates) {
  GateCircuit c;
  c.layout = RegisterLayout({{"c", 1}});
  c.outputs = {"c"};
  c.gates = gates;
  return c;
}

CommitmentScheme binding_scheme() {
  return from_efi({const_circuit({}), const_circuit({g1(GateKind::X, qaddr("c"))}), 1});
}

CommitmentScheme hiding_scheme() {
  return from_efi({const_circuit({g1(GateKind::H, qaddr("c"))}),
                   const_circuit({g1(GateKind::H, qaddr("c"))}), 1});
}

GateCircuit random_generator(Rng& rng) {
  GateCircuit c;
  c.layout = RegisterLayout({{"c", 1}, {"anc", 1}});
  c.outputs = {"c"};
  const int n_gates = 2 + static_cast<int>(rng.integer(0, 3));
  for (int i = 0; i < n_gates; ++i) {
    switch (rng.integer(0, 2)) {
      case 0: c.gates.push_back(raw1(qaddr("c"), rng.unitary(2))); break;
      case 1: c.gates.push_back(raw1(qaddr("anc"), rng.unitary(2))); break;
      default: c.gates.push_back(g2(GateKind::CNOT, qaddr("anc"), qaddr("c"))); break;
    }
  }
  return c;
}

}  // namespace

TEST_CASE("ck88: correct on all eight input combinations") {
  REQUIRE(ot_correctness(naive_ck88()) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("ck88: every honest run returns x_b") {
  const OtProtocol ot = naive_ck88();
  Rng rng(4);
  for (int x0 = 0; x0 < 2; ++x0)
    for (int x1 = 0; x1 < 2; ++x1)
      for (int b = 0; b < 2; ++b) {
        const ExecutionTrace t = run_protocol(
            ot.spec,
            {{"m0", std::uint64_t(x0)}, {"m1", std::uint64_t(x1)}, {"bq", std::uint64_t(b)}},
            RunMode::Honest, &rng);
        REQUIRE(t.outcomes.at("out") == std::uint64_t(b == 0 ? x0 : x1));
      }
}

TEST_CASE("ck88: the sender's view does not depend on the choice bit") {
  const OtProtocol ot = naive_ck88();
  const DensityMatrix v0 = semi_honest_view(ot.spec, "B", {{"m0", 1}, {"m1", 0}, {"bq", 0}});
  const DensityMatrix v1 = semi_honest_view(ot.spec, "B", {{"m0", 1}, {"m1", 0}, {"bq", 1}});
  REQUIRE(trace_distance(v0, v1) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("ck88: a purified receiver recovers the unreceived bit") {
  // Views for the two values of x_{1-b} are orthogonal, so Helstrom wins.
  const OtProtocol ot = naive_ck88();
  const DensityMatrix w0 = semi_honest_view(ot.spec, "A", {{"m0", 0}, {"m1", 0}, {"bq", 0}});
  const DensityMatrix w1 = semi_honest_view(ot.spec, "A", {{"m0", 0}, {"m1", 1}, {"bq", 0}});
  REQUIRE(helstrom(w0, w1).success == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("ck88 attacks: p_a = 1, p_b = 1/2, a tight tradeoff") {
  const AttackReport rep = cgs_check(naive_ck88());
  REQUIRE(rep.p_a_star == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(rep.p_a_star_conditioned == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(rep.p_b_star == Catch::Approx(0.5).margin(1e-9));
  REQUIRE(rep.cgs_lhs == Catch::Approx(2.0).margin(1e-6));
  REQUIRE_FALSE(rep.violation);
}

TEST_CASE("broken basis choice drops correctness to 1/2 but not the tradeoff") {
  const OtProtocol broken = naive_ck88(true);
  REQUIRE(ot_correctness(broken) == Catch::Approx(0.5).margin(1e-9));
  const AttackReport rep = cgs_check(broken);
  REQUIRE(rep.cgs_lhs >= 2.0 - kCgsTolerance);
  REQUIRE_FALSE(rep.violation);
}

TEST_CASE("committed OT: correctness 1 for both extreme schemes") {
  REQUIRE(ot_correctness(build_ot_from_commitment(binding_scheme())) ==
          Catch::Approx(1.0).margin(1e-9));
  REQUIRE(ot_correctness(build_ot_from_commitment(hiding_scheme())) ==
          Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("committed OT with a perfectly binding scheme: collapse erases x_{1-b}") {
  const OtProtocol ot = build_ot_from_commitment(binding_scheme());
  const ReceiverAttack ra = receiver_attack(ot);
  REQUIRE(ra.p_a_star == Catch::Approx(0.5).margin(1e-6));
  const SenderAttack sa = sender_attack(ot);
  REQUIRE(sa.p_b_star == Catch::Approx(0.75).margin(1e-6));
  const AttackReport rep = cgs_check(ot);
  REQUIRE(rep.cgs_lhs == Catch::Approx(2.0).margin(1e-6));
}

TEST_CASE("committed OT with a perfectly hiding scheme: the sender learns nothing") {
  const OtProtocol ot = build_ot_from_commitment(hiding_scheme());
  const SenderAttack sa = sender_attack(ot);
  REQUIRE(sa.p_b_star == Catch::Approx(0.5).margin(1e-6));
  const ReceiverAttack ra = receiver_attack(ot);
  REQUIRE(ra.p_a_star == Catch::Approx(1.0).margin(1e-6));
  const AttackReport rep = cgs_check(ot);
  REQUIRE(rep.cgs_lhs == Catch::Approx(2.0).margin(1e-6));
}

TEST_CASE("conditioned and folded receiver readings agree at correctness 1") {
  for (const OtProtocol& ot :
       {naive_ck88(), build_ot_from_commitment(binding_scheme()),
        build_ot_from_commitment(hiding_scheme())}) {
    const ReceiverAttack ra = receiver_attack(ot);
    REQUIRE(ra.p_a_star == Catch::Approx(ra.p_a_star_conditioned).margin(1e-6));
  }
}

TEST_CASE("attacks do not change correctness") {
  const OtProtocol ot = build_ot_from_commitment(binding_scheme());
  const double before = ot_correctness(ot);
  cgs_check(ot);
  REQUIRE(ot_correctness(ot) == before);
}

TEST_CASE("ot_to_efi: farness reference values") {
  SECTION("ck88 pair is orthogonal on the receiver side") {
    REQUIRE(farness(ot_to_efi(naive_ck88())) == Catch::Approx(1.0).margin(1e-6));
  }
  SECTION("binding instantiation keeps the sender-side distance") {
    const OtProtocol ot = build_ot_from_commitment(binding_scheme());
    const double f = farness(ot_to_efi(ot));
    REQUIRE(f >= 0.5 - 1e-6);
  }
}

TEST_CASE("ot_to_efi: farness dominates both attack distances") {
  Rng rng(2024);
  std::vector<OtProtocol> zoo{naive_ck88(), naive_ck88(true),
                              build_ot_from_commitment(binding_scheme()),
                              build_ot_from_commitment(hiding_scheme())};
  for (int i = 0; i < 3; ++i) {
    const CommitmentScheme s =
        from_efi({random_generator(rng), random_generator(rng), 1});
    zoo.push_back(build_ot_from_commitment(s));
  }
  for (const OtProtocol& ot : zoo) {
    const AttackReport rep = cgs_check(ot);
    REQUIRE_FALSE(rep.violation);
    const double td_g = trace_distance(rep.g0, rep.g1);
    const double td_h = trace_distance(rep.h0, rep.h1);
    const double f = farness(ot_to_efi(ot));
    REQUIRE(f >= std::max(td_g, td_h) - 1e-9);
    const double best = std::max(rep.p_a_star, rep.p_b_star);
    if (best >= 2.0 / 3.0) REQUIRE(f >= 1.0 / 3.0 - 1e-6);
  }
}
