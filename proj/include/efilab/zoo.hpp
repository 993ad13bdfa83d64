// Seeded construction of small EFI generators and the protocol zoo used by
// the verification suites.
#pragma once

#include <string>
#include <vector>

#include "efilab/commitment.hpp"
#include "efilab/efi.hpp"
#include "efilab/ot.hpp"
#include "efilab/random.hpp"

namespace efilab {

// Random generator circuit with a 1-qubit output and one ancilla; gates stay
// within the controllable set so the circuit can be committed coherently.
inline GateCircuit random_efi_generator(Rng& rng, int ancillas = 1) {
  GateCircuit c;
  std::vector<Register> regs{{"c", 1}};
  for (int a = 0; a < ancillas; ++a) regs.push_back({"anc" + std::to_string(a), 1});
  c.layout = RegisterLayout(std::move(regs));
  c.outputs = {"c"};
  std::vector<QubitAddr> qs{qaddr("c")};
  for (int a = 0; a < ancillas; ++a) qs.push_back(qaddr("anc" + std::to_string(a)));
  const int n_gates = 2 + static_cast<int>(rng.integer(0, 4));
  for (int i = 0; i < n_gates; ++i) {
    const QubitAddr t = qs[rng.integer(0, qs.size() - 1)];
    switch (rng.integer(0, 3)) {
      case 0:
        c.gates.push_back(raw1(t, rng.unitary(2)));
        break;
      case 1:
        c.gates.push_back(g1(GateKind::H, t));
        break;
      default: {
        const QubitAddr u = qs[rng.integer(0, qs.size() - 1)];
        if (u == t)
          c.gates.push_back(raw1(t, rng.unitary(2)));
        else
          c.gates.push_back(g2(GateKind::CNOT, t, u));
        break;
      }
    }
  }
  return c;
}

inline EfiPair random_efi_pair(Rng& rng) {
  return {random_efi_generator(rng), random_efi_generator(rng), 1};
}

inline GateCircuit basis_generator(bool one) {
  GateCircuit c;
  c.layout = RegisterLayout({{"c", 1}});
  c.outputs = {"c"};
  if (one) c.gates = {g1(GateKind::X, qaddr("c"))};
  return c;
}

inline GateCircuit plus_generator() {
  GateCircuit c = basis_generator(false);
  c.gates = {g1(GateKind::H, qaddr("c"))};
  return c;
}

// The orthogonal pair: perfectly far, perfectly binding as a commitment.
inline EfiPair efi_pair_zero_one() { return {basis_generator(false), basis_generator(true), 1}; }
// Identical generators: zero farness, perfectly hiding as a commitment.
inline EfiPair efi_pair_identical() { return {plus_generator(), plus_generator(), 1}; }
// The workhorse (|0>, |+>) pair.
inline EfiPair efi_pair_zero_plus() { return {basis_generator(false), plus_generator(), 1}; }

struct ZooEntry {
  std::string name;
  OtProtocol protocol;
};

// CK88, both extreme committed instantiations, the broken-basis variant, and
// `random_count` random committed instantiations.
inline std::vector<ZooEntry> protocol_zoo(Rng& rng, int random_count) {
  std::vector<ZooEntry> zoo;
  zoo.push_back({"ck88", naive_ck88()});
  zoo.push_back({"ck88-broken-basis", naive_ck88(true)});
  zoo.push_back({"committed-binding", build_ot_from_commitment(from_efi(efi_pair_zero_one()))});
  zoo.push_back({"committed-hiding", build_ot_from_commitment(from_efi(efi_pair_identical()))});
  for (int i = 0; i < random_count; ++i) {
    const CommitmentScheme s = from_efi(random_efi_pair(rng));
    zoo.push_back({"committed-random-" + std::to_string(i + 1), build_ot_from_commitment(s)});
  }
  return zoo;
}

}  // namespace efilab
