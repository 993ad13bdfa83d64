// EFI candidate pairs: two generator circuits with a shared output layout.
// Farness is the exact trace distance of the generated states; amplification
// tensors copies and checks the majority-vote bound 1 - exp(-n TD / 2).
#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "efilab/circuit.hpp"
#include "efilab/metrics.hpp"

namespace efilab {

struct EfiPair {
  GateCircuit gen0;
  GateCircuit gen1;
  int security_parameter = 1;  // informational only
};

inline RegisterLayout output_layout(const GateCircuit& c) {
  std::set<std::string> out(c.outputs.begin(), c.outputs.end());
  std::vector<Register> regs;
  for (const Register& r : c.layout.regs)
    if (out.count(r.name)) regs.push_back(r);
  return RegisterLayout(std::move(regs));
}

inline void validate_efi_pair(const EfiPair& p) {
  validate_circuit(p.gen0);
  validate_circuit(p.gen1);
  if (!(output_layout(p.gen0) == output_layout(p.gen1)))
    throw std::invalid_argument("EFI generators must share an output layout");
  if (!p.gen0.inputs.empty() || !p.gen1.inputs.empty())
    throw std::invalid_argument("EFI generators take no inputs");
}

inline double farness(const EfiPair& p, int dm_cap = kDefaultDmCap) {
  validate_efi_pair(p);
  return trace_distance(run_generator(p.gen0, {}, dm_cap),
                        run_generator(p.gen1, {}, dm_cap));
}

// n disjoint copies of a generator; registers get a per-copy suffix.
inline GateCircuit tensor_copies(const GateCircuit& c, int n) {
  GateCircuit out;
  std::vector<Register> regs;
  for (int k = 1; k <= n; ++k) {
    std::map<std::string, std::string> names;
    for (const Register& r : c.layout.regs)
      names[r.name] = r.name + "_" + std::to_string(k);
    const GateCircuit copy = rename_registers(c, names);
    regs.insert(regs.end(), copy.layout.regs.begin(), copy.layout.regs.end());
    out.inputs.insert(out.inputs.end(), copy.inputs.begin(), copy.inputs.end());
    out.outputs.insert(out.outputs.end(), copy.outputs.begin(), copy.outputs.end());
    out.gates.insert(out.gates.end(), copy.gates.begin(), copy.gates.end());
  }
  out.layout = RegisterLayout(std::move(regs));
  return out;
}

inline EfiPair amplify(const EfiPair& p, int n, int dm_cap = kDefaultDmCap) {
  validate_efi_pair(p);
  if (n < 1) throw std::invalid_argument("amplify: need n >= 1");
  if (n * output_layout(p.gen0).total_qubits() > dm_cap)
    throw std::invalid_argument("amplify: result exceeds the qubit cap");
  EfiPair out;
  out.gen0 = tensor_copies(p.gen0, n);
  out.gen1 = tensor_copies(p.gen1, n);
  out.security_parameter = p.security_parameter;
  return out;
}

struct AmplificationRow {
  int n = 0;
  double actual = 0.0;  // TD(rho^n, sigma^n)
  double bound = 0.0;   // 1 - exp(-n TD / 2)
  bool violation = false;
};

struct AmplificationReport {
  double base_td = 0.0;
  std::vector<AmplificationRow> rows;
  bool any_violation = false;
};

inline AmplificationReport amplification_check(const EfiPair& p, int n_max,
                                               int dm_cap = kDefaultDmCap) {
  AmplificationReport rep;
  rep.base_td = farness(p, dm_cap);
  for (int n = 1; n <= n_max; ++n) {
    AmplificationRow row;
    row.n = n;
    row.actual = farness(amplify(p, n, dm_cap), dm_cap);
    row.bound = 1.0 - std::exp(-double(n) * rep.base_td / 2.0);
    row.violation = row.bound > row.actual + 1e-9;
    rep.any_violation |= row.violation;
    rep.rows.push_back(row);
  }
  return rep;
}

// |Pr[d(xi_0) = 1] - Pr[d(xi_1) = 1]| for a 1-bit-output distinguisher
// circuit, computed exactly from the density matrices.
inline double distinguisher_advantage(const EfiPair& p, const GateCircuit& d,
                                      int dm_cap = kDefaultDmCap) {
  validate_efi_pair(p);
  validate_circuit(d);
  const RegisterLayout out_lay = output_layout(d);
  if (out_lay.total_qubits() != 1)
    throw std::invalid_argument("distinguisher must have a 1-qubit output");
  auto prob_one = [&](const GateCircuit& gen) {
    const DensityMatrix xi = run_generator(gen, {}, dm_cap);
    const DensityMatrix out = apply_channel(d, xi, dm_cap);
    return out.mat.at(1, 1).real();
  };
  return std::abs(prob_one(p.gen0) - prob_one(p.gen1));
}

}  // namespace efilab
