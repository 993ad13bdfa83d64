// Finite two-party classical functionalities: insecure-minor detection, the
// one-message protocol for minor-free tables, and the black-box reduction
// from any protocol for a table with a minor to oblivious transfer.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "efilab/ot.hpp"
#include "efilab/protocol.hpp"

namespace efilab {

struct FunctionTable {
  std::vector<std::string> alice_labels;  // rows
  std::vector<std::string> bob_labels;    // columns
  std::vector<std::vector<std::string>> cells;

  int s1() const { return static_cast<int>(alice_labels.size()); }
  int s2() const { return static_cast<int>(bob_labels.size()); }
  const std::string& at(int x, int y) const { return cells[x][y]; }
};

inline void validate_table(const FunctionTable& f) {
  if (f.s1() < 1 || f.s2() < 1) throw std::invalid_argument("empty function table");
  if (static_cast<int>(f.cells.size()) != f.s1())
    throw std::invalid_argument("table row count does not match labels");
  for (const auto& row : f.cells)
    if (static_cast<int>(row.size()) != f.s2())
      throw std::invalid_argument("table is not fully populated");
}

// Output alphabet in first-appearance order (row major).
inline std::vector<std::string> output_alphabet(const FunctionTable& f) {
  std::vector<std::string> alpha;
  for (const auto& row : f.cells)
    for (const std::string& v : row)
      if (std::find(alpha.begin(), alpha.end(), v) == alpha.end()) alpha.push_back(v);
  return alpha;
}

struct MinorWitness {
  int x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  bool operator==(const MinorWitness&) const = default;
};

// Lexicographically smallest (x0, x1, y0, y1) with f(x0,y0) = f(x1,y0) and
// f(x0,y1) != f(x1,y1), if one exists.
inline std::optional<MinorWitness> find_insecure_minor(const FunctionTable& f) {
  validate_table(f);
  for (int x0 = 0; x0 < f.s1(); ++x0)
    for (int x1 = 0; x1 < f.s1(); ++x1) {
      if (x1 == x0) continue;
      for (int y0 = 0; y0 < f.s2(); ++y0)
        for (int y1 = 0; y1 < f.s2(); ++y1) {
          if (y1 == y0) continue;
          if (f.at(x0, y0) == f.at(x1, y0) && f.at(x0, y1) != f.at(x1, y1))
            return MinorWitness{x0, x1, y0, y1};
        }
    }
  return std::nullopt;
}

// One-message protocol for a minor-free table: Alice announces her row class,
// Bob evaluates.  The certificate checks perfect privacy: per column, the map
// class -> output is injective, so Bob's view is a function of (y, output).
struct TrivialProtocol {
  std::vector<int> row_class;        // row -> class id (smallest row index first)
  std::vector<int> class_rep;        // class id -> representative row
  bool certificate_ok = false;
  std::string certificate_note;
};

inline TrivialProtocol trivial_protocol(const FunctionTable& f) {
  validate_table(f);
  if (find_insecure_minor(f))
    throw std::invalid_argument("trivial_protocol: table contains an insecure minor");

  TrivialProtocol t;
  t.row_class.assign(f.s1(), -1);
  for (int x = 0; x < f.s1(); ++x) {
    if (t.row_class[x] >= 0) continue;
    const int cls = static_cast<int>(t.class_rep.size());
    t.class_rep.push_back(x);
    t.row_class[x] = cls;
    for (int x2 = x + 1; x2 < f.s1(); ++x2) {
      if (t.row_class[x2] >= 0) continue;
      bool same = true;
      for (int y = 0; y < f.s2(); ++y) same &= f.at(x, y) == f.at(x2, y);
      if (same) t.row_class[x2] = cls;
    }
  }

  // Minor-freeness forces distinct classes to differ in every column.
  t.certificate_ok = true;
  for (int y = 0; y < f.s2() && t.certificate_ok; ++y) {
    std::set<std::string> seen;
    for (int rep : t.class_rep) {
      if (!seen.insert(f.at(rep, y)).second) {
        t.certificate_ok = false;
        t.certificate_note = "classes collide in column " + std::to_string(y);
        break;
      }
    }
  }
  if (t.certificate_ok)
    t.certificate_note = std::to_string(t.class_rep.size()) +
                         " classes; per-column class->output maps are injective";
  return t;
}

struct DichotomyVerdict {
  bool minor_free = false;
  std::optional<MinorWitness> witness;     // HasMinor
  std::optional<TrivialProtocol> trivial;  // MinorFree
};

inline DichotomyVerdict classify(const FunctionTable& f) {
  DichotomyVerdict v;
  v.witness = find_insecure_minor(f);
  v.minor_free = !v.witness.has_value();
  if (v.minor_free) v.trivial = trivial_protocol(f);
  return v;
}

// ---- protocols computing f ---------------------------------------------------

// A protocol computing f with Bob-only output plus the metadata needed to
// embed it: which slots carry the encoded inputs and where the output lands.
struct FnProtocol {
  ProtocolSpec spec;
  std::string x_slot;  // Alice's input, ceil(log2 s1) qubits
  std::string y_slot;  // Bob's input
  std::string z_reg;   // Bob's output, label-index encoded
};

inline int bits_for(int count) {
  int b = 1;
  while ((1 << b) < count) ++b;
  return b;
}

// The deliberately insecure baseline: Alice ships her encoded input to Bob,
// who evaluates the table with multi-controlled X gates.
inline FnProtocol insecure_table_protocol(const FunctionTable& f) {
  validate_table(f);
  const int xb = bits_for(f.s1());
  const int yb = bits_for(f.s2());
  const int zb = bits_for(static_cast<int>(output_alphabet(f).size()));
  const auto alpha = output_alphabet(f);
  auto label_index = [&](const std::string& v) {
    return static_cast<int>(std::find(alpha.begin(), alpha.end(), v) - alpha.begin());
  };

  FnProtocol fp;
  fp.x_slot = "xin";
  fp.y_slot = "yin";
  fp.z_reg = "z";
  ProtocolSpec& p = fp.spec;
  const int controls = xb + yb;
  std::vector<Register> regs{{"xin", xb}, {"yin", yb}, {"z", zb}};
  if (controls >= 3) regs.push_back({"fnanc", controls - 2});
  p.layout = RegisterLayout(regs);
  p.owner0 = {{"xin", "A"}, {"yin", "B"}, {"z", "B"}};
  if (controls >= 3) p.owner0["fnanc"] = "B";
  p.inputs = {{"A", {"xin"}}, {"B", {"yin"}}};

  LocalStep eval;
  eval.party = "B";
  eval.circuit.layout = p.layout;
  std::vector<QubitAddr> scratch;
  for (int i = 0; i + 2 < controls; ++i) scratch.push_back(qaddr("fnanc", i));
  for (int x = 0; x < f.s1(); ++x)
    for (int y = 0; y < f.s2(); ++y) {
      const int z = label_index(f.at(x, y));
      if (z == 0) continue;
      // Negated controls realized by X sandwiches around the pattern.
      std::vector<Gate> flips;
      std::vector<QubitAddr> ctls;
      for (int b = 0; b < xb; ++b) {
        ctls.push_back(qaddr("xin", b));
        if (((x >> (xb - 1 - b)) & 1) == 0) flips.push_back(g1(GateKind::X, qaddr("xin", b)));
      }
      for (int b = 0; b < yb; ++b) {
        ctls.push_back(qaddr("yin", b));
        if (((y >> (yb - 1 - b)) & 1) == 0) flips.push_back(g1(GateKind::X, qaddr("yin", b)));
      }
      for (const Gate& g : flips) eval.circuit.gates.push_back(g);
      for (int b = 0; b < zb; ++b)
        if ((z >> (zb - 1 - b)) & 1)
          append_mcx(eval.circuit.gates, ctls, qaddr("z", b), scratch);
      for (const Gate& g : flips) eval.circuit.gates.push_back(g);
    }

  // Bob needs xin before evaluating.
  eval.circuit.layout = p.layout;
  p.steps = {SendStep{"xin", "B"}, eval};
  p.outputs = {{"B", {"z"}}};
  p.measure = {{"B", {"z"}}};
  validate_protocol(p);
  return fp;
}

// Exact evaluation check of an FnProtocol against its table.
inline bool fn_protocol_correct(const FnProtocol& fp, const FunctionTable& f) {
  const auto alpha = output_alphabet(f);
  const int zb = fp.spec.layout.find(fp.z_reg).qubits;
  const int z_off = fp.spec.layout.offset(fp.z_reg);
  const int n = fp.spec.layout.total_qubits();
  for (int x = 0; x < f.s1(); ++x)
    for (int y = 0; y < f.s2(); ++y) {
      const ExecutionTrace t = run_protocol(
          fp.spec, {{fp.x_slot, std::uint64_t(x)}, {fp.y_slot, std::uint64_t(y)}},
          RunMode::Purified);
      const std::size_t want = static_cast<std::size_t>(
          std::find(alpha.begin(), alpha.end(), f.at(x, y)) - alpha.begin());
      double pr = 0.0;
      for (std::size_t i = 0; i < t.final_state.amps.size(); ++i) {
        std::uint64_t val = 0;
        for (int b = 0; b < zb; ++b)
          val = (val << 1) | ((i >> (n - 1 - (z_off + b))) & 1u);
        if (val == want) pr += std::norm(t.final_state.amps[i]);
      }
      if (pr < 1.0 - 1e-9) return false;
    }
  return true;
}

// Oblivious transfer from any protocol for a table with an insecure minor:
// run the protocol twice on witness-selected inputs; the receiver's output
// says whether z_b equals f(x0, y1).
inline OtProtocol ot_from_f(const FunctionTable& f, const MinorWitness& w,
                            const FnProtocol& fp) {
  validate_table(f);
  validate_protocol(fp.spec);
  if (w.x0 < 0 || w.x1 >= f.s1() || w.y0 < 0 || w.y1 >= f.s2() || w.x0 == w.x1 ||
      w.y0 == w.y1 || f.at(w.x0, w.y0) != f.at(w.x1, w.y0) ||
      f.at(w.x0, w.y1) == f.at(w.x1, w.y1))
    throw std::invalid_argument("ot_from_f: witness is not an insecure minor");
  if (!fn_protocol_correct(fp, f))
    throw std::invalid_argument("ot_from_f: protocol does not compute the table");

  const std::string alice = fp.spec.owner0.at(fp.x_slot);
  const std::string bob = fp.spec.owner0.at(fp.y_slot);
  const auto alpha = output_alphabet(f);
  auto label_index = [&](const std::string& v) {
    return static_cast<int>(std::find(alpha.begin(), alpha.end(), v) - alpha.begin());
  };

  auto renamed = [&](const std::string& prefix) {
    std::map<std::string, std::string> names;
    for (const Register& r : fp.spec.layout.regs) names[r.name] = prefix + r.name;
    return rename_protocol_registers(fp.spec, names);
  };
  const ProtocolSpec e1 = renamed("e1_");
  const ProtocolSpec e2 = renamed("e2_");

  OtProtocol ot;
  ot.provenance = "bmm-from-table";
  ProtocolSpec& p = ot.spec;
  p.parties = fp.spec.parties;
  std::vector<Register> regs{{"a0", 1}, {"a1", 1}, {"bsel", 1}, {"oout", 1}};
  regs.insert(regs.end(), e1.layout.regs.begin(), e1.layout.regs.end());
  regs.insert(regs.end(), e2.layout.regs.begin(), e2.layout.regs.end());
  p.layout = RegisterLayout(std::move(regs));
  p.owner0 = {{"a0", alice}, {"a1", alice}, {"bsel", bob}, {"oout", bob}};
  for (const auto& [r, o] : e1.owner0) p.owner0[r] = o;
  for (const auto& [r, o] : e2.owner0) p.owner0[r] = o;
  p.inputs = {{alice, {"a0", "a1"}}, {bob, {"bsel"}}};

  const int xb = fp.spec.layout.find(fp.x_slot).qubits;
  const int yb = fp.spec.layout.find(fp.y_slot).qubits;
  const int zb = fp.spec.layout.find(fp.z_reg).qubits;

  // Load x_{a} into an execution's x-slot: constant bits of x0-with-a=0
  // plus CNOTs from the selector where the two constants differ.
  auto load_x = [&](std::vector<Gate>& g, const std::string& slot_prefix,
                    const std::string& sel) {
    for (int bit = 0; bit < xb; ++bit) {
      const int v0 = (w.x0 >> (xb - 1 - bit)) & 1;
      const int v1 = (w.x1 >> (xb - 1 - bit)) & 1;
      if (v0 == 1) g.push_back(g1(GateKind::X, qaddr(slot_prefix + fp.x_slot, bit)));
      if (v0 != v1)
        g.push_back(g2(GateKind::CNOT, qaddr(sel), qaddr(slot_prefix + fp.x_slot, bit)));
    }
  };
  // Load y_{first} when bsel = 0 and y_{second} when bsel = 1.
  auto load_y = [&](std::vector<Gate>& g, const std::string& slot_prefix, int y_first,
                    int y_second) {
    for (int bit = 0; bit < yb; ++bit) {
      const int v0 = (y_first >> (yb - 1 - bit)) & 1;
      const int v1 = (y_second >> (yb - 1 - bit)) & 1;
      if (v0 == 1) g.push_back(g1(GateKind::X, qaddr(slot_prefix + fp.y_slot, bit)));
      if (v0 != v1)
        g.push_back(g2(GateKind::CNOT, qaddr("bsel"), qaddr(slot_prefix + fp.y_slot, bit)));
    }
  };

  LocalStep alice_load1, bob_load1;
  alice_load1.party = alice;
  alice_load1.circuit.layout =
      RegisterLayout({{"a0", 1}, {"e1_" + fp.x_slot, xb}});
  load_x(alice_load1.circuit.gates, "e1_", "a0");
  bob_load1.party = bob;
  bob_load1.circuit.layout = RegisterLayout({{"bsel", 1}, {"e1_" + fp.y_slot, yb}});
  load_y(bob_load1.circuit.gates, "e1_", w.y1, w.y0);  // y_{1-b}

  LocalStep alice_load2, bob_load2;
  alice_load2.party = alice;
  alice_load2.circuit.layout =
      RegisterLayout({{"a1", 1}, {"e2_" + fp.x_slot, xb}});
  load_x(alice_load2.circuit.gates, "e2_", "a1");
  bob_load2.party = bob;
  bob_load2.circuit.layout = RegisterLayout({{"bsel", 1}, {"e2_" + fp.y_slot, yb}});
  load_y(bob_load2.circuit.gates, "e2_", w.y0, w.y1);  // y_b

  p.steps = {alice_load1, bob_load1};
  p.steps.insert(p.steps.end(), e1.steps.begin(), e1.steps.end());
  p.steps.push_back(alice_load2);
  p.steps.push_back(bob_load2);
  p.steps.insert(p.steps.end(), e2.steps.begin(), e2.steps.end());

  // Bob's readout: oout = [z_bsel != f(x0, y1)], comparing bit by bit.
  const int target = label_index(f.at(w.x0, w.y1));
  LocalStep readout;
  readout.party = bob;
  std::vector<Register> ro_regs{{"bsel", 1}, {"oout", 1},
                                {"e1_" + fp.z_reg, zb}, {"e2_" + fp.z_reg, zb}};
  std::vector<Register> sel_regs;
  if (zb > 1) {
    sel_regs.push_back({"zsel", zb});
    // zsel holds z_bsel xor target; oout = OR of its bits (zb = 2 suffices).
    if (zb > 2) throw std::invalid_argument("ot_from_f: output alphabets above 4 unsupported");
  }
  for (const Register& r : sel_regs) {
    ro_regs.push_back(r);
    p.layout = concat(p.layout, RegisterLayout({r}));
    p.owner0[r.name] = bob;
  }
  readout.circuit.layout = RegisterLayout(ro_regs);
  std::vector<Gate>& rg = readout.circuit.gates;
  if (zb == 1) {
    detail::append_copy_if(rg, qaddr("bsel"), qaddr("e1_" + fp.z_reg, 0), qaddr("oout"), 0);
    detail::append_copy_if(rg, qaddr("bsel"), qaddr("e2_" + fp.z_reg, 0), qaddr("oout"), 1);
    if (target & 1) rg.push_back(g1(GateKind::X, qaddr("oout")));
  } else {
    for (int bit = 0; bit < zb; ++bit) {
      detail::append_copy_if(rg, qaddr("bsel"), qaddr("e1_" + fp.z_reg, bit),
                             qaddr("zsel", bit), 0);
      detail::append_copy_if(rg, qaddr("bsel"), qaddr("e2_" + fp.z_reg, bit),
                             qaddr("zsel", bit), 1);
      if ((target >> (zb - 1 - bit)) & 1) rg.push_back(g1(GateKind::X, qaddr("zsel", bit)));
    }
    // OR of two bits: o ^= u; o ^= v; o ^= u v.
    rg.push_back(g2(GateKind::CNOT, qaddr("zsel", 0), qaddr("oout")));
    rg.push_back(g2(GateKind::CNOT, qaddr("zsel", 1), qaddr("oout")));
    append_toffoli(rg, qaddr("zsel", 0), qaddr("zsel", 1), qaddr("oout"));
  }
  p.steps.push_back(readout);

  p.outputs = {{bob, {"oout"}}};
  p.measure = {{bob, {"oout"}}};

  ot.meta = OtMeta{"a0", "a1", "bsel", "oout"};
  validate_ot(ot);
  return ot;
}

}  // namespace efilab
