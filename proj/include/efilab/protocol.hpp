// Two-party message-passing protocols: alternating local circuits and
// register transfers over a shared pool of registers.  Execution is always
// the purified run; honest mode additionally samples the declared
// computational-basis measurements from the final state.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "efilab/circuit.hpp"
#include "efilab/random.hpp"
#include "efilab/states.hpp"

namespace efilab {

struct LocalStep {
  std::string party;
  GateCircuit circuit;  // registers must be a subset of the protocol's
};

struct SendStep {
  std::string reg;
  std::string to;
};

using Step = std::variant<LocalStep, SendStep>;

struct ProtocolSpec {
  std::array<std::string, 2> parties{"A", "B"};
  RegisterLayout layout;                       // declaration order of `owns`
  std::map<std::string, std::string> owner0;   // initial ownership
  std::map<std::string, std::vector<std::string>> inputs;   // party -> slots
  std::vector<Step> steps;
  std::map<std::string, std::vector<std::string>> outputs;  // party -> regs
  std::map<std::string, std::vector<std::string>> measure;  // party -> regs

  bool is_party(const std::string& p) const {
    return p == parties[0] || p == parties[1];
  }
  std::string other(const std::string& p) const {
    return p == parties[0] ? parties[1] : parties[0];
  }
};

namespace detail {

inline void require_party(const ProtocolSpec& p, const std::string& name,
                          const char* what) {
  if (!p.is_party(name))
    throw std::invalid_argument(std::string(what) + ": unknown party '" + name + "'");
}

}  // namespace detail

// Ownership of every register after each step; index 0 is the initial state.
inline std::vector<std::map<std::string, std::string>> ownership_timeline(
    const ProtocolSpec& p) {
  std::map<std::string, std::string> owner = p.owner0;
  std::vector<std::map<std::string, std::string>> timeline{owner};
  int step_index = 0;
  for (const Step& s : p.steps) {
    if (const auto* local = std::get_if<LocalStep>(&s)) {
      detail::require_party(p, local->party, "local step");
      for (const Register& r : local->circuit.layout.regs) {
        const Register& pr = p.layout.find(r.name);
        if (pr.qubits != r.qubits)
          throw std::invalid_argument("step " + std::to_string(step_index) +
                                      ": register '" + r.name + "' width mismatch");
        if (owner.at(r.name) != local->party)
          throw std::invalid_argument(
              "step " + std::to_string(step_index) + ": party " + local->party +
              " does not own register '" + r.name + "'");
      }
      if (!local->circuit.inputs.empty() || !local->circuit.outputs.empty())
        throw std::invalid_argument("step " + std::to_string(step_index) +
                                    ": embedded circuits declare no inputs/outputs");
      for (const Gate& g : local->circuit.gates) validate_gate(g, local->circuit.layout);
    } else {
      const auto& send = std::get<SendStep>(s);
      detail::require_party(p, send.to, "send step");
      if (!p.layout.has(send.reg))
        throw std::invalid_argument("step " + std::to_string(step_index) +
                                    ": unknown register '" + send.reg + "'");
      if (owner.at(send.reg) == send.to)
        throw std::invalid_argument("step " + std::to_string(step_index) +
                                    ": register '" + send.reg +
                                    "' already belongs to " + send.to);
      owner[send.reg] = send.to;
    }
    timeline.push_back(owner);
    ++step_index;
  }
  return timeline;
}

inline void validate_protocol(const ProtocolSpec& p) {
  p.layout.validate();
  if (p.parties[0] == p.parties[1])
    throw std::invalid_argument("protocol parties must be distinct");
  for (const Register& r : p.layout.regs) {
    auto it = p.owner0.find(r.name);
    if (it == p.owner0.end())
      throw std::invalid_argument("register '" + r.name + "' has no owner");
    detail::require_party(p, it->second, "ownership");
  }
  if (p.owner0.size() != p.layout.regs.size())
    throw std::invalid_argument("ownership map does not match the register list");
  for (const auto& [party, slots] : p.inputs) {
    detail::require_party(p, party, "inputs");
    for (const std::string& s : slots) {
      if (!p.layout.has(s)) throw std::invalid_argument("unknown input slot '" + s + "'");
      if (p.owner0.at(s) != party)
        throw std::invalid_argument("input slot '" + s + "' is not owned by " + party);
    }
  }
  for (const auto& m : {p.outputs, p.measure})
    for (const auto& [party, regs] : m) {
      detail::require_party(p, party, "outputs/measure");
      for (const std::string& r : regs)
        if (!p.layout.has(r))
          throw std::invalid_argument("unknown register '" + r + "' in outputs/measure");
    }
  ownership_timeline(p);  // validates the steps
}

inline std::vector<std::string> protocol_input_slots(const ProtocolSpec& p) {
  std::vector<std::string> slots;
  for (const auto& [party, list] : p.inputs)
    slots.insert(slots.end(), list.begin(), list.end());
  return slots;
}

enum class RunMode { Honest, Purified };

struct ExecutionTrace {
  PureState final_state;                          // the purified joint state
  std::map<std::string, std::string> end_owner;   // register -> party
  std::vector<PureState> snapshots;               // post-step states, if requested
  // Honest mode: sampled outcome per measured register.
  std::map<std::string, std::uint64_t> outcomes;
};

// Exact Born distribution of the declared measurement registers.
inline std::map<std::uint64_t, double> measurement_distribution(
    const ProtocolSpec& p, const PureState& psi, const std::vector<int>& qubits) {
  const int n = psi.qubits();
  std::map<std::uint64_t, double> dist;
  for (std::size_t i = 0; i < psi.amps.size(); ++i) {
    const double w = std::norm(psi.amps[i]);
    if (w == 0.0) continue;
    std::uint64_t key = 0;
    for (std::size_t b = 0; b < qubits.size(); ++b)
      key |= ((i >> (n - 1 - qubits[b])) & 1u) << (qubits.size() - 1 - b);
    dist[key] += w;
  }
  return dist;
}

inline ExecutionTrace run_protocol(const ProtocolSpec& p, const Bindings& bound,
                                   RunMode mode, Rng* rng = nullptr,
                                   bool keep_snapshots = false) {
  validate_protocol(p);
  if (mode == RunMode::Honest && rng == nullptr)
    throw std::invalid_argument("honest mode needs a seeded generator");
  if (p.layout.total_qubits() > kPureStateQubitCap)
    throw std::invalid_argument("protocol exceeds the pure-state qubit cap");

  const std::vector<std::string> slots = protocol_input_slots(p);
  PureState psi = basis_state(p.layout, detail::initial_index(p.layout, slots, bound));

  ExecutionTrace trace;
  const auto timeline = ownership_timeline(p);
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    if (const auto* local = std::get_if<LocalStep>(&p.steps[i])) {
      for (const Gate& g : local->circuit.gates) apply_gate(psi, g);
    }
    if (keep_snapshots) trace.snapshots.push_back(psi);
  }
  trace.end_owner = timeline.back();
  trace.final_state = std::move(psi);

  if (mode == RunMode::Honest) {
    std::vector<int> qubits;
    std::vector<std::pair<std::string, int>> fields;  // register, width
    for (const auto& [party, regs] : p.measure)
      for (const std::string& r : regs) {
        const Register& reg = p.layout.find(r);
        const int off = p.layout.offset(r);
        for (int q = 0; q < reg.qubits; ++q) qubits.push_back(off + q);
        fields.push_back({r, reg.qubits});
      }
    if (!qubits.empty()) {
      const auto dist = measurement_distribution(p, trace.final_state, qubits);
      double pick = rng->uniform();
      std::uint64_t chosen = dist.rbegin()->first;
      for (const auto& [key, w] : dist) {
        if (pick < w) {
          chosen = key;
          break;
        }
        pick -= w;
      }
      int shift = static_cast<int>(qubits.size());
      for (const auto& [reg, width] : fields) {
        shift -= width;
        trace.outcomes[reg] = (chosen >> shift) & ((std::uint64_t{1} << width) - 1);
      }
    }
  }
  return trace;
}

// The party's residual state at the end of a purified run: everything it
// still owns, with all other registers traced out.
inline DensityMatrix semi_honest_view(const ProtocolSpec& p, const std::string& party,
                                      const Bindings& bound, int dm_cap = kDefaultDmCap) {
  detail::require_party(p, party, "semi_honest_view");
  const ExecutionTrace trace = run_protocol(p, bound, RunMode::Purified);
  std::set<std::string> keep;
  for (const auto& [reg, owner] : trace.end_owner)
    if (owner == party) keep.insert(reg);
  if (keep.empty())
    throw std::invalid_argument("party " + party + " holds no registers at the end");
  return reduce_pure(trace.final_state, keep, dm_cap);
}

inline std::vector<std::string> end_registers_of(const ProtocolSpec& p,
                                                 const std::string& party) {
  const auto timeline = ownership_timeline(p);
  std::vector<std::string> out;
  for (const Register& r : p.layout.regs)
    if (timeline.back().at(r.name) == party) out.push_back(r.name);
  return out;
}

// Flattens a protocol into one generator circuit: optional preamble gates,
// then every local step in order.  `outputs` picks the generator outputs.
inline GateCircuit flatten_protocol(const ProtocolSpec& p,
                                    const RegisterLayout& extra_regs,
                                    const std::vector<Gate>& preamble,
                                    const std::vector<std::string>& outputs) {
  validate_protocol(p);
  GateCircuit c;
  c.layout = concat(extra_regs, p.layout);
  c.outputs = outputs;
  c.gates = preamble;
  for (const Step& s : p.steps)
    if (const auto* local = std::get_if<LocalStep>(&s))
      for (const Gate& g : local->circuit.gates) c.gates.push_back(g);
  return c;
}

inline ProtocolSpec rename_protocol_registers(
    const ProtocolSpec& p, const std::map<std::string, std::string>& names) {
  auto mapped = [&](const std::string& r) {
    auto it = names.find(r);
    return it == names.end() ? r : it->second;
  };
  ProtocolSpec out;
  out.parties = p.parties;
  std::vector<Register> regs;
  for (const Register& r : p.layout.regs) regs.push_back({mapped(r.name), r.qubits});
  out.layout = RegisterLayout(std::move(regs));
  for (const auto& [reg, owner] : p.owner0) out.owner0[mapped(reg)] = owner;
  for (const auto& [party, slots] : p.inputs)
    for (const std::string& s : slots) out.inputs[party].push_back(mapped(s));
  for (const Step& s : p.steps) {
    if (const auto* local = std::get_if<LocalStep>(&s)) {
      LocalStep ls;
      ls.party = local->party;
      ls.circuit = rename_registers(local->circuit, names);
      out.steps.push_back(std::move(ls));
    } else {
      const auto& send = std::get<SendStep>(s);
      out.steps.push_back(SendStep{mapped(send.reg), send.to});
    }
  }
  for (const auto& [party, rs] : p.outputs)
    for (const std::string& r : rs) out.outputs[party].push_back(mapped(r));
  for (const auto& [party, rs] : p.measure)
    for (const std::string& r : rs) out.measure[party].push_back(mapped(r));
  return out;
}

}  // namespace efilab
