// Oblivious transfer as a two-party protocol: sender slots (x0, x1), receiver
// choice slot b, receiver output bit.  Alongside the protocols themselves,
// this module builds both semi-honest purification attacks, checks the
// unconditional tradeoff 2 P_B* + P_A* >= 2, and re-packages the attack view
// states as EFI generator circuits.
#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "efilab/commitment.hpp"
#include "efilab/efi.hpp"
#include "efilab/metrics.hpp"
#include "efilab/protocol.hpp"

namespace efilab {

struct OtMeta {
  std::string x0 = "m0";   // sender slot, 1 qubit
  std::string x1 = "m1";   // sender slot, 1 qubit
  std::string b = "bq";    // receiver choice slot, 1 qubit
  std::string out = "out"; // receiver output register, 1 qubit
};

struct OtProtocol {
  ProtocolSpec spec;
  OtMeta meta;
  std::string provenance;
};

inline std::string ot_sender(const OtProtocol& p) { return p.spec.owner0.at(p.meta.x0); }
inline std::string ot_receiver(const OtProtocol& p) { return p.spec.owner0.at(p.meta.b); }

inline void validate_ot(const OtProtocol& p) {
  validate_protocol(p.spec);
  const std::set<std::string> names{p.meta.x0, p.meta.x1, p.meta.b, p.meta.out};
  if (names.size() != 4)
    throw std::invalid_argument("OT metadata registers must be distinct");
  for (const std::string& r : {p.meta.x0, p.meta.x1, p.meta.b, p.meta.out}) {
    if (!p.spec.layout.has(r))
      throw std::invalid_argument("OT metadata names unknown register '" + r + "'");
    if (p.spec.layout.find(r).qubits != 1)
      throw std::invalid_argument("OT register '" + r + "' must be a single qubit");
  }
  const std::string sender = ot_sender(p);
  const std::string receiver = ot_receiver(p);
  if (sender == receiver)
    throw std::invalid_argument("sender and receiver slots belong to one party");
  if (p.spec.owner0.at(p.meta.x1) != sender)
    throw std::invalid_argument("x0 and x1 must start with the sender");
  auto is_slot = [&](const std::string& party, const std::string& reg) {
    auto it = p.spec.inputs.find(party);
    if (it == p.spec.inputs.end()) return false;
    for (const std::string& s : it->second)
      if (s == reg) return true;
    return false;
  };
  if (!is_slot(sender, p.meta.x0) || !is_slot(sender, p.meta.x1) ||
      !is_slot(receiver, p.meta.b))
    throw std::invalid_argument("OT inputs must be declared protocol input slots");
  const auto timeline = ownership_timeline(p.spec);
  if (timeline.back().at(p.meta.out) != receiver)
    throw std::invalid_argument("the output register must end with the receiver");
}

// ---- the CK88-style baseline ------------------------------------------------

namespace detail {

inline ComplexMatrix controlled_h() {
  ComplexMatrix m = ComplexMatrix::identity(4);
  const double v = 1.0 / std::sqrt(2.0);
  m.at(2, 2) = v;
  m.at(2, 3) = v;
  m.at(3, 2) = v;
  m.at(3, 3) = -v;
  return m;
}

// out ^= m iff bq == want (1-control or X-sandwiched 0-control Toffoli).
inline void append_copy_if(std::vector<Gate>& gates, const QubitAddr& bq,
                           const QubitAddr& m, const QubitAddr& out, int want) {
  if (want == 0) gates.push_back(g1(GateKind::X, bq));
  append_toffoli(gates, bq, m, out);
  if (want == 0) gates.push_back(g1(GateKind::X, bq));
}

}  // namespace detail

// Two qubits |x0> (x) H|x1> travel to the receiver, who rotates into basis b
// and copies the chosen slot into the output.  The sender keeps one untouched
// ancilla so its end view is well defined.  `swap_basis` flips the receiver's
// basis choice, which breaks correctness down to 1/2.
inline OtProtocol naive_ck88(bool swap_basis = false) {
  OtProtocol ot;
  ot.provenance = swap_basis ? "ck88-broken-basis" : "ck88";
  ProtocolSpec& p = ot.spec;
  p.layout = RegisterLayout({{"m0", 1}, {"m1", 1}, {"anc", 1}, {"bq", 1}, {"out", 1}});
  p.owner0 = {{"m0", "B"}, {"m1", "B"}, {"anc", "B"}, {"bq", "A"}, {"out", "A"}};
  p.inputs = {{"B", {"m0", "m1"}}, {"A", {"bq"}}};

  LocalStep encode;
  encode.party = "B";
  encode.circuit.layout = RegisterLayout({{"m1", 1}});
  encode.circuit.gates = {g1(GateKind::H, qaddr("m1"))};

  LocalStep decode;
  decode.party = "A";
  decode.circuit.layout =
      RegisterLayout({{"m0", 1}, {"m1", 1}, {"bq", 1}, {"out", 1}});
  std::vector<Gate>& g = decode.circuit.gates;
  if (swap_basis) g.push_back(g1(GateKind::X, qaddr("bq")));
  g.push_back(raw2(qaddr("bq"), qaddr("m0"), detail::controlled_h()));
  g.push_back(raw2(qaddr("bq"), qaddr("m1"), detail::controlled_h()));
  if (swap_basis) g.push_back(g1(GateKind::X, qaddr("bq")));
  detail::append_copy_if(g, qaddr("bq"), qaddr("m0"), qaddr("out"), 0);
  detail::append_copy_if(g, qaddr("bq"), qaddr("m1"), qaddr("out"), 1);

  p.steps = {encode, SendStep{"m0", "A"}, SendStep{"m1", "A"}, decode};
  p.outputs = {{"A", {"out"}}};
  p.measure = {{"A", {"out"}}};
  validate_ot(ot);
  return ot;
}

// Committed-measurement OT: the CK88 message, then the receiver rotates into
// basis b, commits to both slots with the given scheme and returns the
// commitment registers, keeping the openings.
inline OtProtocol build_ot_from_commitment(const CommitmentScheme& s) {
  validate_scheme(s);
  const int cw = commit_qubits(s);
  const int rw = opening_qubits(s);

  OtProtocol ot;
  ot.provenance = "committed-measurement";
  ProtocolSpec& p = ot.spec;
  p.layout = RegisterLayout({{"m0", 1},
                             {"m1", 1},
                             {"bq", 1},
                             {"out", 1},
                             {"C0", cw},
                             {"R0", rw},
                             {"C1", cw},
                             {"R1", rw}});
  p.owner0 = {{"m0", "B"}, {"m1", "B"}, {"bq", "A"}, {"out", "A"},
              {"C0", "A"}, {"R0", "A"}, {"C1", "A"}, {"R1", "A"}};
  p.inputs = {{"B", {"m0", "m1"}}, {"A", {"bq"}}};

  LocalStep encode;
  encode.party = "B";
  encode.circuit.layout = RegisterLayout({{"m1", 1}});
  encode.circuit.gates = {g1(GateKind::H, qaddr("m1"))};

  LocalStep decode;
  decode.party = "A";
  decode.circuit.layout = RegisterLayout({{"m0", 1}, {"m1", 1}, {"bq", 1}, {"out", 1},
                                          {"C0", cw}, {"R0", rw}, {"C1", cw}, {"R1", rw}});
  std::vector<Gate>& g = decode.circuit.gates;
  g.push_back(raw2(qaddr("bq"), qaddr("m0"), detail::controlled_h()));
  g.push_back(raw2(qaddr("bq"), qaddr("m1"), detail::controlled_h()));

  // Commit to the (coherently measured) slot value: Q0 unconditionally, then
  // the controlled correction Q1 Q0^dagger.
  auto append_select_commit = [&](const QubitAddr& ctrl, const std::string& c_reg,
                                  const std::string& r_reg) {
    const std::map<std::string, std::string> names{{"C", c_reg}, {"R", r_reg}};
    const GateCircuit q0 = rename_registers(s.q0, names);
    const GateCircuit q1 = rename_registers(s.q1, names);
    for (const Gate& gate : q0.gates) g.push_back(gate);
    for (auto it = q0.gates.rbegin(); it != q0.gates.rend(); ++it)
      append_controlled(g, ctrl, inverse_gate(*it));
    for (const Gate& gate : q1.gates) append_controlled(g, ctrl, gate);
  };
  append_select_commit(qaddr("m0"), "C0", "R0");
  append_select_commit(qaddr("m1"), "C1", "R1");

  detail::append_copy_if(g, qaddr("bq"), qaddr("m0"), qaddr("out"), 0);
  detail::append_copy_if(g, qaddr("bq"), qaddr("m1"), qaddr("out"), 1);

  p.steps = {encode,       SendStep{"m0", "A"}, SendStep{"m1", "A"},
             decode,       SendStep{"C0", "B"}, SendStep{"C1", "B"}};
  p.outputs = {{"A", {"out"}}};
  p.measure = {{"A", {"out"}}};
  validate_ot(ot);
  return ot;
}

// ---- correctness ------------------------------------------------------------

// Minimum over the eight classical input combinations of the probability that
// the output register reads x_b.
inline double ot_correctness(const OtProtocol& p) {
  validate_ot(p);
  const int out_qubit = p.spec.layout.offset(p.meta.out);
  const int n = p.spec.layout.total_qubits();
  double worst = 1.0;
  for (int x0 = 0; x0 < 2; ++x0)
    for (int x1 = 0; x1 < 2; ++x1)
      for (int b = 0; b < 2; ++b) {
        const Bindings bound{{p.meta.x0, std::uint64_t(x0)},
                             {p.meta.x1, std::uint64_t(x1)},
                             {p.meta.b, std::uint64_t(b)}};
        const ExecutionTrace t = run_protocol(p.spec, bound, RunMode::Purified);
        const int want = b == 0 ? x0 : x1;
        double pr = 0.0;
        for (std::size_t i = 0; i < t.final_state.amps.size(); ++i) {
          const int bit = static_cast<int>((i >> (n - 1 - out_qubit)) & 1u);
          if (bit == want) pr += std::norm(t.final_state.amps[i]);
        }
        worst = std::min(worst, pr);
      }
  return worst;
}

// ---- purification attacks ---------------------------------------------------

namespace detail {

inline std::string fresh_name(const RegisterLayout& lay, std::string base) {
  while (lay.has(base)) base += "_";
  return base;
}

}  // namespace detail

// Receiver attack generator for unreceived value y: the receiver keeps a
// classical random choice flag, the received slot is averaged uniformly, and
// the unreceived slot carries y.  Output = flag plus the receiver's residual
// registers; the Helstrom pair of these generators is the attack.
inline GateCircuit receiver_view_generator(const OtProtocol& p, int y) {
  validate_ot(p);
  const std::string flag = detail::fresh_name(p.spec.layout, "atk_flag");
  const std::string deph = detail::fresh_name(p.spec.layout, "atk_deph");
  const std::string coin = detail::fresh_name(p.spec.layout, "atk_coin");
  const RegisterLayout extra({{flag, 1}, {deph, 1}, {coin, 1}});

  std::vector<Gate> prep;
  // Classical uniform choice bit: superpose, copy to a traced-out register.
  prep.push_back(g1(GateKind::H, qaddr(flag)));
  prep.push_back(g2(GateKind::CNOT, qaddr(flag), qaddr(deph)));
  prep.push_back(g2(GateKind::CNOT, qaddr(flag), qaddr(p.meta.b)));
  // Uniformly random received bit, purified by the traced-out coin.
  prep.push_back(g1(GateKind::H, qaddr(coin)));
  // flag = 0: x0 is received (copied from the coin), x1 carries y.
  prep.push_back(g1(GateKind::X, qaddr(flag)));
  append_toffoli(prep, qaddr(flag), qaddr(coin), qaddr(p.meta.x0));
  prep.push_back(g1(GateKind::X, qaddr(flag)));
  // flag = 1: x1 is received, x0 carries y.
  append_toffoli(prep, qaddr(flag), qaddr(coin), qaddr(p.meta.x1));
  if (y == 1) {
    prep.push_back(g2(GateKind::CNOT, qaddr(flag), qaddr(p.meta.x0)));
    prep.push_back(g1(GateKind::X, qaddr(flag)));
    prep.push_back(g2(GateKind::CNOT, qaddr(flag), qaddr(p.meta.x1)));
    prep.push_back(g1(GateKind::X, qaddr(flag)));
  }

  std::vector<std::string> outputs{flag};
  for (const std::string& r : end_registers_of(p.spec, ot_receiver(p)))
    outputs.push_back(r);
  return flatten_protocol(p.spec, extra, prep, outputs);
}

// Sender attack generator for choice bit b: both sender slots enter as bare
// uniform superpositions and the receiver's choice is fixed to b.  Output =
// the sender's residual registers.
inline GateCircuit sender_view_generator(const OtProtocol& p, int b) {
  validate_ot(p);
  std::vector<Gate> prep;
  prep.push_back(g1(GateKind::H, qaddr(p.meta.x0)));
  prep.push_back(g1(GateKind::H, qaddr(p.meta.x1)));
  if (b == 1) prep.push_back(g1(GateKind::X, qaddr(p.meta.b)));

  const std::vector<std::string> outputs = end_registers_of(p.spec, ot_sender(p));
  if (outputs.empty())
    throw std::invalid_argument(
        "sender holds no registers at the protocol end; add an idle ancilla");
  return flatten_protocol(p.spec, RegisterLayout{}, prep, outputs);
}

struct ReceiverAttack {
  double p_a_star = 0.0;              // Helstrom on the averaged view pair
  double p_a_star_conditioned = 0.0;  // averaged over fixed (choice, received)
  DensityMatrix g0, g1;
};

struct SenderAttack {
  double p_b_star = 0.0;
  DensityMatrix h0, h1;
};

inline ReceiverAttack receiver_attack(const OtProtocol& p, int dm_cap = kDefaultDmCap) {
  ReceiverAttack atk;
  atk.g0 = run_generator(receiver_view_generator(p, 0), {}, dm_cap);
  atk.g1 = run_generator(receiver_view_generator(p, 1), {}, dm_cap);
  atk.p_a_star = 0.5 * (1.0 + trace_distance(atk.g0, atk.g1));

  // Second reading: condition on the choice bit and the received value.
  const std::string receiver = ot_receiver(p);
  double acc = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int v = 0; v < 2; ++v) {
      auto bind = [&](int y) {
        Bindings bound{{p.meta.b, std::uint64_t(c)}};
        bound[c == 0 ? p.meta.x0 : p.meta.x1] = std::uint64_t(v);
        bound[c == 0 ? p.meta.x1 : p.meta.x0] = std::uint64_t(y);
        return semi_honest_view(p.spec, receiver, bound, dm_cap);
      };
      acc += 0.5 * (1.0 + trace_distance(bind(0), bind(1)));
    }
  atk.p_a_star_conditioned = acc / 4.0;
  return atk;
}

inline SenderAttack sender_attack(const OtProtocol& p, int dm_cap = kDefaultDmCap) {
  SenderAttack atk;
  atk.h0 = run_generator(sender_view_generator(p, 0), {}, dm_cap);
  atk.h1 = run_generator(sender_view_generator(p, 1), {}, dm_cap);
  atk.p_b_star = 0.5 * (1.0 + trace_distance(atk.h0, atk.h1));
  return atk;
}

inline constexpr double kCgsTolerance = 1e-6;

struct AttackReport {
  double p_a_star = 0.0;
  double p_a_star_conditioned = 0.0;
  double p_b_star = 0.0;
  double cgs_lhs = 0.0;  // 2 p_b_star + p_a_star
  bool violation = false;
  DensityMatrix g0, g1, h0, h1;
};

// Assembles both attacks and checks 2 P_B* + P_A* >= 2.  A violation marks an
// implementation bug, not a cryptographic discovery.
inline AttackReport cgs_check(const OtProtocol& p, int dm_cap = kDefaultDmCap) {
  const ReceiverAttack ra = receiver_attack(p, dm_cap);
  const SenderAttack sa = sender_attack(p, dm_cap);
  AttackReport rep;
  rep.p_a_star = ra.p_a_star;
  rep.p_a_star_conditioned = ra.p_a_star_conditioned;
  rep.p_b_star = sa.p_b_star;
  rep.cgs_lhs = 2.0 * sa.p_b_star + ra.p_a_star;
  rep.violation = rep.cgs_lhs < 2.0 - kCgsTolerance;
  rep.g0 = ra.g0;
  rep.g1 = ra.g1;
  rep.h0 = sa.h0;
  rep.h1 = sa.h1;
  return rep;
}

// EFI pair from the attacks: generator y emits G_y tensor H_y, with both
// protocol executions embedded side by side in one circuit.
inline EfiPair ot_to_efi(const OtProtocol& p) {
  EfiPair pair;
  for (int y = 0; y < 2; ++y) {
    const GateCircuit g = receiver_view_generator(p, y);
    const GateCircuit h = sender_view_generator(p, y);
    std::map<std::string, std::string> gn, hn;
    for (const Register& r : g.layout.regs) gn[r.name] = "g_" + r.name;
    for (const Register& r : h.layout.regs) hn[r.name] = "h_" + r.name;
    const GateCircuit gr = rename_registers(g, gn);
    const GateCircuit hr = rename_registers(h, hn);

    GateCircuit gen;
    gen.layout = concat(gr.layout, hr.layout);
    gen.outputs = gr.outputs;
    gen.outputs.insert(gen.outputs.end(), hr.outputs.begin(), hr.outputs.end());
    gen.gates = gr.gates;
    gen.gates.insert(gen.gates.end(), hr.gates.begin(), hr.gates.end());
    if (gen.layout.total_qubits() > kPureStateQubitCap)
      throw std::invalid_argument("ot_to_efi: combined generator exceeds the cap");
    (y == 0 ? pair.gen0 : pair.gen1) = std::move(gen);
  }
  pair.security_parameter = 1;
  return pair;
}

}  // namespace efilab
