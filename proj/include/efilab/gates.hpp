// Gate set: the usual discrete gates plus raw 1- and 2-qubit unitaries.
// Helpers at the bottom emit multi-controlled operations as sequences over
// this set, so circuits never need gates wider than two qubits.
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "efilab/complex_matrix.hpp"
#include "efilab/states.hpp"

namespace efilab {

enum class GateKind { I, X, Y, Z, H, S, T, CNOT, CZ, SWAP, RAW1, RAW2 };

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::I: return "I";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::T: return "T";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::SWAP: return "SWAP";
    case GateKind::RAW1: return "RAW1";
    case GateKind::RAW2: return "RAW2";
  }
  return "?";
}

inline std::optional<GateKind> gate_kind_from_name(const std::string& s) {
  static const std::pair<const char*, GateKind> table[] = {
      {"I", GateKind::I},       {"X", GateKind::X},     {"Y", GateKind::Y},
      {"Z", GateKind::Z},       {"H", GateKind::H},     {"S", GateKind::S},
      {"T", GateKind::T},       {"CNOT", GateKind::CNOT}, {"CZ", GateKind::CZ},
      {"SWAP", GateKind::SWAP}, {"RAW1", GateKind::RAW1}, {"RAW2", GateKind::RAW2}};
  for (const auto& [name, kind] : table)
    if (s == name) return kind;
  return std::nullopt;
}

inline int gate_arity(GateKind k) {
  switch (k) {
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::SWAP:
    case GateKind::RAW2:
      return 2;
    default:
      return 1;
  }
}

struct QubitAddr {
  std::string reg;
  int idx = 0;
  bool operator==(const QubitAddr&) const = default;
};

inline QubitAddr qaddr(const std::string& reg, int idx = 0) { return {reg, idx}; }

inline std::string addr_string(const QubitAddr& a) {
  return a.reg + "." + std::to_string(a.idx);
}

inline QubitAddr parse_addr(const std::string& s) {
  const auto dot = s.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= s.size())
    throw std::invalid_argument("bad qubit address: '" + s + "' (want reg.idx)");
  const std::string reg = s.substr(0, dot);
  const std::string num = s.substr(dot + 1);
  for (char c : num)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("bad qubit address: '" + s + "'");
  return {reg, std::stoi(num)};
}

struct Gate {
  GateKind kind = GateKind::I;
  std::vector<QubitAddr> targets;
  std::optional<ComplexMatrix> matrix;  // RAW1 / RAW2 only
};

inline Gate g1(GateKind k, QubitAddr t) { return Gate{k, {std::move(t)}, std::nullopt}; }
inline Gate g2(GateKind k, QubitAddr a, QubitAddr b) {
  return Gate{k, {std::move(a), std::move(b)}, std::nullopt};
}
inline Gate raw1(QubitAddr t, ComplexMatrix u) {
  return Gate{GateKind::RAW1, {std::move(t)}, std::move(u)};
}
inline Gate raw2(QubitAddr a, QubitAddr b, ComplexMatrix u) {
  return Gate{GateKind::RAW2, {std::move(a), std::move(b)}, std::move(u)};
}

namespace gatemat {

inline ComplexMatrix from_rows(std::size_t d, std::initializer_list<cplx> vals) {
  ComplexMatrix m(d, d);
  std::size_t i = 0;
  for (cplx v : vals) m.a[i++] = v;
  return m;
}

inline const ComplexMatrix& pauli_x() {
  static const ComplexMatrix m = from_rows(2, {0, 1, 1, 0});
  return m;
}
inline const ComplexMatrix& pauli_y() {
  static const ComplexMatrix m = from_rows(2, {0, cplx{0, -1}, cplx{0, 1}, 0});
  return m;
}
inline const ComplexMatrix& pauli_z() {
  static const ComplexMatrix m = from_rows(2, {1, 0, 0, -1});
  return m;
}
inline const ComplexMatrix& hadamard() {
  static const ComplexMatrix m = [] {
    const double v = 1.0 / std::sqrt(2.0);
    return from_rows(2, {v, v, v, -v});
  }();
  return m;
}
inline const ComplexMatrix& s_gate() {
  static const ComplexMatrix m = from_rows(2, {1, 0, 0, cplx{0, 1}});
  return m;
}
inline const ComplexMatrix& t_gate() {
  static const ComplexMatrix m =
      from_rows(2, {1, 0, 0, std::polar(1.0, M_PI / 4.0)});
  return m;
}
inline const ComplexMatrix& t_dagger() {
  static const ComplexMatrix m =
      from_rows(2, {1, 0, 0, std::polar(1.0, -M_PI / 4.0)});
  return m;
}
inline const ComplexMatrix& cnot() {
  static const ComplexMatrix m =
      from_rows(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
  return m;
}
inline const ComplexMatrix& cz() {
  static const ComplexMatrix m =
      from_rows(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1});
  return m;
}
inline const ComplexMatrix& swap() {
  static const ComplexMatrix m =
      from_rows(4, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1});
  return m;
}

}  // namespace gatemat

// Unitary of the gate on its own targets; first target is the high bit.
inline const ComplexMatrix& gate_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::I: {
      static const ComplexMatrix id = ComplexMatrix::identity(2);
      return id;
    }
    case GateKind::X: return gatemat::pauli_x();
    case GateKind::Y: return gatemat::pauli_y();
    case GateKind::Z: return gatemat::pauli_z();
    case GateKind::H: return gatemat::hadamard();
    case GateKind::S: return gatemat::s_gate();
    case GateKind::T: return gatemat::t_gate();
    case GateKind::CNOT: return gatemat::cnot();
    case GateKind::CZ: return gatemat::cz();
    case GateKind::SWAP: return gatemat::swap();
    case GateKind::RAW1:
    case GateKind::RAW2:
      if (!g.matrix) throw std::invalid_argument("raw gate without a matrix");
      return *g.matrix;
  }
  throw std::invalid_argument("unknown gate kind");
}

inline Gate inverse_gate(const Gate& g) {
  switch (g.kind) {
    case GateKind::I:
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
    case GateKind::H:
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::SWAP:
      return g;  // self-inverse
    case GateKind::S: {
      ComplexMatrix sd = gatemat::from_rows(2, {1, 0, 0, cplx{0, -1}});
      return raw1(g.targets[0], std::move(sd));
    }
    case GateKind::T:
      return raw1(g.targets[0], gatemat::t_dagger());
    case GateKind::RAW1:
      return raw1(g.targets[0], adjoint(*g.matrix));
    case GateKind::RAW2:
      return raw2(g.targets[0], g.targets[1], adjoint(*g.matrix));
  }
  throw std::invalid_argument("unknown gate kind");
}

// ---- builders -------------------------------------------------------------

// Standard 15-gate Toffoli decomposition over {H, T, Tdg, CNOT}.
inline void append_toffoli(std::vector<Gate>& out, const QubitAddr& a, const QubitAddr& b,
                           const QubitAddr& c) {
  out.push_back(g1(GateKind::H, c));
  out.push_back(g2(GateKind::CNOT, b, c));
  out.push_back(raw1(c, gatemat::t_dagger()));
  out.push_back(g2(GateKind::CNOT, a, c));
  out.push_back(g1(GateKind::T, c));
  out.push_back(g2(GateKind::CNOT, b, c));
  out.push_back(raw1(c, gatemat::t_dagger()));
  out.push_back(g2(GateKind::CNOT, a, c));
  out.push_back(g1(GateKind::T, b));
  out.push_back(g1(GateKind::T, c));
  out.push_back(g1(GateKind::H, c));
  out.push_back(g2(GateKind::CNOT, a, b));
  out.push_back(g1(GateKind::T, a));
  out.push_back(raw1(b, gatemat::t_dagger()));
  out.push_back(g2(GateKind::CNOT, a, b));
}

// Appends gates for control |1> on `ctrl` applied to g.  2-qubit raw gates
// cannot be controlled here; keep controllable circuits over the named set.
inline void append_controlled(std::vector<Gate>& out, const QubitAddr& ctrl, const Gate& g) {
  switch (g.kind) {
    case GateKind::I:
      return;
    case GateKind::CNOT:
      append_toffoli(out, ctrl, g.targets[0], g.targets[1]);
      return;
    case GateKind::CZ:
      out.push_back(g1(GateKind::H, g.targets[1]));
      append_toffoli(out, ctrl, g.targets[0], g.targets[1]);
      out.push_back(g1(GateKind::H, g.targets[1]));
      return;
    case GateKind::SWAP:
      out.push_back(g2(GateKind::CNOT, g.targets[1], g.targets[0]));
      append_toffoli(out, ctrl, g.targets[0], g.targets[1]);
      out.push_back(g2(GateKind::CNOT, g.targets[1], g.targets[0]));
      return;
    case GateKind::RAW2:
      throw std::invalid_argument("cannot control a raw 2-qubit gate");
    default: {
      // Controlled 1-qubit gate as a raw 2-qubit block diag(I, U).
      const ComplexMatrix& u = gate_matrix(g);
      ComplexMatrix cu = ComplexMatrix::identity(4);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) cu.at(2 + i, 2 + j) = u.at(i, j);
      out.push_back(raw2(ctrl, g.targets[0], std::move(cu)));
      return;
    }
  }
}

// X on `target` iff all controls are 1.  Needs k-2 clean scratch qubits for
// k >= 3 controls; they are returned to |0>.
inline void append_mcx(std::vector<Gate>& out, const std::vector<QubitAddr>& controls,
                       const QubitAddr& target, const std::vector<QubitAddr>& scratch) {
  const std::size_t k = controls.size();
  if (k == 0) {
    out.push_back(g1(GateKind::X, target));
    return;
  }
  if (k == 1) {
    out.push_back(g2(GateKind::CNOT, controls[0], target));
    return;
  }
  if (k == 2) {
    append_toffoli(out, controls[0], controls[1], target);
    return;
  }
  if (scratch.size() < k - 2)
    throw std::invalid_argument("append_mcx: need " + std::to_string(k - 2) +
                                " scratch qubits");
  // AND-chain into scratch, hit the target, then uncompute the chain.  Each
  // chain link is a whole Toffoli, self-inverse as a unit.
  std::vector<std::array<QubitAddr, 3>> chain;
  chain.push_back({controls[0], controls[1], scratch[0]});
  for (std::size_t i = 2; i + 1 < k; ++i)
    chain.push_back({controls[i], scratch[i - 2], scratch[i - 1]});
  for (const auto& t : chain) append_toffoli(out, t[0], t[1], t[2]);
  append_toffoli(out, controls[k - 1], scratch[k - 3], target);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    append_toffoli(out, (*it)[0], (*it)[1], (*it)[2]);
}

}  // namespace efilab
