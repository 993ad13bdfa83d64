// Gate circuits over named registers, with designated inputs (basis states
// bound at call time) and outputs (everything else is traced out at the end).
// Running a circuit this way realizes a channel from classical inputs to a
// density matrix on the output registers.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "efilab/gates.hpp"
#include "efilab/states.hpp"
#include "efilab/version.hpp"

namespace efilab {

struct GateCircuit {
  RegisterLayout layout;
  std::vector<std::string> inputs;   // registers bound to basis states at run time
  std::vector<std::string> outputs;  // registers kept; the rest are traced out
  std::vector<Gate> gates;
};

inline void validate_gate(const Gate& g, const RegisterLayout& layout) {
  const int arity = gate_arity(g.kind);
  if (static_cast<int>(g.targets.size()) != arity)
    throw std::invalid_argument(std::string("gate ") + gate_name(g.kind) + " expects " +
                                std::to_string(arity) + " target(s)");
  std::set<int> seen;
  for (const QubitAddr& t : g.targets) {
    const int q = layout.qubit_index(t.reg, t.idx);
    if (!seen.insert(q).second)
      throw std::invalid_argument("gate targets must be distinct qubits");
  }
  const bool raw = g.kind == GateKind::RAW1 || g.kind == GateKind::RAW2;
  if (raw) {
    if (!g.matrix) throw std::invalid_argument("raw gate is missing its matrix");
    const std::size_t want = g.kind == GateKind::RAW1 ? 2 : 4;
    if (g.matrix->rows != want || g.matrix->cols != want)
      throw std::invalid_argument("raw gate matrix has the wrong dimension");
    if (!finite_entries(*g.matrix))
      throw std::invalid_argument("raw gate matrix has non-finite entries");
    if (!is_unitary(*g.matrix, 1e-9))
      throw std::invalid_argument("non-unitary raw gate");
  } else if (g.matrix) {
    throw std::invalid_argument(std::string("gate ") + gate_name(g.kind) +
                                " must not carry a matrix");
  }
}

inline void validate_circuit(const GateCircuit& c) {
  c.layout.validate();
  std::set<std::string> seen_inputs, seen_outputs;
  for (const std::string& r : c.inputs) {
    if (!c.layout.has(r)) throw std::invalid_argument("unknown input register: '" + r + "'");
    if (!seen_inputs.insert(r).second)
      throw std::invalid_argument("duplicate input register: '" + r + "'");
  }
  for (const std::string& r : c.outputs) {
    if (!c.layout.has(r)) throw std::invalid_argument("unknown output register: '" + r + "'");
    if (!seen_outputs.insert(r).second)
      throw std::invalid_argument("duplicate output register: '" + r + "'");
  }
  for (const Gate& g : c.gates) validate_gate(g, c.layout);
}

// ---- state-vector execution -------------------------------------------------

namespace detail {

inline void apply_gate_vec(std::vector<cplx>& amps, int n, const std::vector<int>& qubits,
                           const ComplexMatrix& u) {
  const int k = static_cast<int>(qubits.size());
  const std::size_t dim = amps.size();
  std::vector<std::uint64_t> masks(k);
  for (int i = 0; i < k; ++i) masks[i] = std::uint64_t{1} << (n - 1 - qubits[i]);
  std::uint64_t all = 0;
  for (auto m : masks) all |= m;

  const std::size_t sub = std::size_t{1} << k;
  std::vector<cplx> in(sub), outv(sub);
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & all) continue;
    for (std::size_t s = 0; s < sub; ++s) {
      std::uint64_t idx = base;
      for (int b = 0; b < k; ++b)
        if ((s >> (k - 1 - b)) & 1u) idx |= masks[b];
      in[s] = amps[idx];
    }
    for (std::size_t r = 0; r < sub; ++r) {
      cplx acc = 0.0;
      const cplx* row = &u.a[r * sub];
      for (std::size_t s = 0; s < sub; ++s) acc += row[s] * in[s];
      outv[r] = acc;
    }
    for (std::size_t s = 0; s < sub; ++s) {
      std::uint64_t idx = base;
      for (int b = 0; b < k; ++b)
        if ((s >> (k - 1 - b)) & 1u) idx |= masks[b];
      amps[idx] = outv[s];
    }
  }
}

}  // namespace detail

inline void apply_gate(PureState& psi, const Gate& g) {
  std::vector<int> qubits;
  for (const QubitAddr& t : g.targets)
    qubits.push_back(psi.layout.qubit_index(t.reg, t.idx));
  detail::apply_gate_vec(psi.amps, psi.qubits(), qubits, gate_matrix(g));
}

// rho -> U rho U^dagger with U the gate on the given density matrix.
inline void apply_gate(DensityMatrix& rho, const Gate& g) {
  std::vector<int> qubits;
  for (const QubitAddr& t : g.targets)
    qubits.push_back(rho.layout.qubit_index(t.reg, t.idx));
  const ComplexMatrix& u = gate_matrix(g);
  const int n = rho.qubits();
  const std::size_t d = rho.mat.rows;
  // Rows: each column of rho is a vector; then columns via the conjugate.
  std::vector<cplx> buf(d);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < d; ++r) buf[r] = rho.mat.at(r, c);
    detail::apply_gate_vec(buf, n, qubits, u);
    for (std::size_t r = 0; r < d; ++r) rho.mat.at(r, c) = buf[r];
  }
  ComplexMatrix uc(u.rows, u.cols);
  for (std::size_t i = 0; i < u.a.size(); ++i) uc.a[i] = std::conj(u.a[i]);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) buf[c] = rho.mat.at(r, c);
    detail::apply_gate_vec(buf, n, qubits, uc);
    for (std::size_t c = 0; c < d; ++c) rho.mat.at(r, c) = buf[c];
  }
}

using Bindings = std::map<std::string, std::uint64_t>;

namespace detail {

inline std::uint64_t initial_index(const RegisterLayout& layout,
                                   const std::vector<std::string>& inputs,
                                   const Bindings& bound) {
  std::set<std::string> input_set(inputs.begin(), inputs.end());
  for (const auto& [name, value] : bound) {
    if (!input_set.count(name))
      throw std::invalid_argument("binding for non-input register '" + name + "'");
    const Register& r = layout.find(name);
    if (r.qubits < 64 && value >= (std::uint64_t{1} << r.qubits))
      throw std::invalid_argument("binding value out of range for register '" + name + "'");
  }
  for (const std::string& name : inputs)
    if (!bound.count(name))
      throw std::invalid_argument("unbound input register '" + name + "'");

  const int n = layout.total_qubits();
  std::uint64_t idx = 0;
  for (const auto& [name, value] : bound) {
    const Register& r = layout.find(name);
    const int off = layout.offset(name);
    for (int b = 0; b < r.qubits; ++b) {
      const std::uint64_t bit = (value >> (r.qubits - 1 - b)) & 1u;
      idx |= bit << (n - 1 - (off + b));
    }
  }
  return idx;
}

}  // namespace detail

// Full purified run: the joint pure state over every register.
inline PureState run_pure(const GateCircuit& c, const Bindings& bound = {}) {
  validate_circuit(c);
  if (c.layout.total_qubits() > kPureStateQubitCap)
    throw std::invalid_argument("circuit exceeds the pure-state qubit cap");
  PureState psi = basis_state(c.layout, detail::initial_index(c.layout, c.inputs, bound));
  for (const Gate& g : c.gates) apply_gate(psi, g);
  return psi;
}

namespace detail {

// Registers connected through shared gates evolve independently otherwise;
// splitting components keeps wide product circuits (tensor copies, paired
// generators) cheap to reduce.
inline std::vector<std::vector<std::string>> gate_components(const GateCircuit& c) {
  std::map<std::string, std::string> parent;
  for (const Register& r : c.layout.regs) parent[r.name] = r.name;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) {
    std::string root = x;
    while (parent[root] != root) root = parent[root];
    std::string cur = x;
    while (parent[cur] != root) {
      std::string next = parent[cur];
      parent[cur] = root;
      cur = next;
    }
    return root;
  };
  for (const Gate& g : c.gates) {
    for (std::size_t i = 1; i < g.targets.size(); ++i)
      parent[find(g.targets[0].reg)] = find(g.targets[i].reg);
  }
  std::map<std::string, std::vector<std::string>> groups;
  for (const Register& r : c.layout.regs) groups[find(r.name)].push_back(r.name);
  std::vector<std::vector<std::string>> out;
  for (auto& [root, names] : groups) out.push_back(std::move(names));
  return out;
}

}  // namespace detail

// Runs the purified circuit and returns the reduced state on the output
// registers (in layout order).
inline DensityMatrix run_generator(const GateCircuit& c, const Bindings& bound = {},
                                   int dm_cap = kDefaultDmCap) {
  validate_circuit(c);
  if (c.outputs.empty()) throw std::invalid_argument("circuit has no output registers");
  const std::set<std::string> out_set(c.outputs.begin(), c.outputs.end());
  int out_qubits = 0;
  for (const Register& r : c.layout.regs)
    if (out_set.count(r.name)) out_qubits += r.qubits;
  if (out_qubits > dm_cap)
    throw std::invalid_argument("generator output exceeds the qubit cap (" +
                                std::to_string(dm_cap) + ")");

  const auto components = detail::gate_components(c);
  if (components.size() == 1) {
    const PureState psi = run_pure(c, bound);
    return reduce_pure(psi, out_set, dm_cap);
  }

  // Per-component sub-circuits share no gates; run each one alone.
  std::vector<DensityMatrix> parts;
  for (const auto& names : components) {
    const std::set<std::string> comp(names.begin(), names.end());
    bool has_output = false;
    for (const std::string& n : names) has_output |= out_set.count(n) > 0;
    if (!has_output) continue;

    GateCircuit sub;
    std::vector<Register> regs;
    for (const Register& r : c.layout.regs)
      if (comp.count(r.name)) regs.push_back(r);
    sub.layout = RegisterLayout(std::move(regs));
    for (const std::string& r : c.inputs)
      if (comp.count(r)) sub.inputs.push_back(r);
    for (const std::string& r : c.outputs)
      if (comp.count(r)) sub.outputs.push_back(r);
    for (const Gate& g : c.gates)
      if (comp.count(g.targets[0].reg)) sub.gates.push_back(g);
    Bindings sub_bound;
    for (const auto& [name, v] : bound)
      if (comp.count(name)) sub_bound[name] = v;
    const PureState psi = run_pure(sub, sub_bound);
    parts.push_back(reduce_pure(psi, std::set<std::string>(sub.outputs.begin(),
                                                           sub.outputs.end()),
                                dm_cap));
  }

  std::vector<Register> out_regs;
  for (const Register& r : c.layout.regs)
    if (out_set.count(r.name)) out_regs.push_back(r);
  return assemble_product(RegisterLayout(std::move(out_regs)), parts);
}

// Feeds an arbitrary state into the circuit's input registers and returns the
// reduced output state.  The input layout must match register-for-register.
inline DensityMatrix apply_channel(const GateCircuit& c, const DensityMatrix& rho,
                                   int dm_cap = kDefaultDmCap) {
  validate_circuit(c);
  std::vector<Register> in_regs;
  for (const Register& r : c.layout.regs)
    if (std::find(c.inputs.begin(), c.inputs.end(), r.name) != c.inputs.end())
      in_regs.push_back(r);
  if (!(RegisterLayout(in_regs) == rho.layout))
    throw std::invalid_argument("apply_channel: input layout mismatch");
  if (c.layout.total_qubits() > dm_cap)
    throw std::invalid_argument("apply_channel: circuit exceeds the qubit cap");

  // Assemble rho on the inputs with |0><0| elsewhere, then conjugate by gates.
  std::vector<DensityMatrix> parts;
  parts.push_back(rho);
  for (const Register& r : c.layout.regs) {
    if (rho.layout.has(r.name)) continue;
    DensityMatrix zero;
    zero.layout = RegisterLayout({r});
    const std::size_t d = std::size_t{1} << r.qubits;
    zero.mat = ComplexMatrix(d, d);
    zero.mat.at(0, 0) = 1.0;
    parts.push_back(std::move(zero));
  }
  DensityMatrix full = assemble_product(c.layout, parts);
  for (const Gate& g : c.gates) apply_gate(full, g);
  if (c.outputs.empty()) throw std::invalid_argument("circuit has no output registers");
  std::set<std::string> drop;
  const std::set<std::string> out_set(c.outputs.begin(), c.outputs.end());
  for (const Register& r : c.layout.regs)
    if (!out_set.count(r.name)) drop.insert(r.name);
  return drop.empty() ? full : partial_trace(full, drop);
}

// Register renaming (used when circuits are combined or copied).
inline GateCircuit rename_registers(const GateCircuit& c,
                                    const std::map<std::string, std::string>& names) {
  auto mapped = [&](const std::string& r) {
    auto it = names.find(r);
    return it == names.end() ? r : it->second;
  };
  GateCircuit out;
  std::vector<Register> regs;
  for (const Register& r : c.layout.regs) regs.push_back({mapped(r.name), r.qubits});
  out.layout = RegisterLayout(std::move(regs));
  for (const std::string& r : c.inputs) out.inputs.push_back(mapped(r));
  for (const std::string& r : c.outputs) out.outputs.push_back(mapped(r));
  for (Gate g : c.gates) {
    for (QubitAddr& t : g.targets) t.reg = mapped(t.reg);
    out.gates.push_back(std::move(g));
  }
  return out;
}

}  // namespace efilab
