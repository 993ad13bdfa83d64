// Canonical-form bit commitments: a pair of generator unitaries over
// registers (C, R).  Committing runs Q_b from all-zeroes and sends C; opening
// reveals R and b, and the receiver verifies by uncomputing Q_b and checking
// for all-zeroes.
#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "efilab/circuit.hpp"
#include "efilab/efi.hpp"
#include "efilab/metrics.hpp"
#include "efilab/random.hpp"

namespace efilab {

struct CommitmentScheme {
  GateCircuit q0;  // layout [C, R], all-zero start, outputs = {C}
  GateCircuit q1;
  std::string commit_register = "C";
  std::string opening_register = "R";
};

inline void validate_scheme(const CommitmentScheme& s) {
  for (const GateCircuit* q : {&s.q0, &s.q1}) {
    validate_circuit(*q);
    if (q->layout.regs.size() != 2 || q->layout.regs[0].name != s.commit_register ||
        q->layout.regs[1].name != s.opening_register)
      throw std::invalid_argument("commitment circuits must act on registers [C, R]");
    if (!q->inputs.empty())
      throw std::invalid_argument("commitment circuits start from all zeroes");
  }
  if (!(s.q0.layout == s.q1.layout))
    throw std::invalid_argument("commitment circuits must share a layout");
}

inline int commit_qubits(const CommitmentScheme& s) {
  return s.q0.layout.find(s.commit_register).qubits;
}
inline int opening_qubits(const CommitmentScheme& s) {
  return s.q0.layout.find(s.opening_register).qubits;
}

// Canonical scheme from an EFI pair: the generator's unitary part with the
// generated output relabelled to C and every purification ancilla to R.  When
// the two generators need different ancilla widths, the smaller side is
// padded with idle zero qubits so Q_0 and Q_1 share a layout.
inline CommitmentScheme from_efi(const EfiPair& p) {
  validate_efi_pair(p);
  const int c_width = output_layout(p.gen0).total_qubits();
  auto ancilla_width = [](const GateCircuit& g) {
    return g.layout.total_qubits() - output_layout(g).total_qubits();
  };
  const int r_width = std::max({ancilla_width(p.gen0), ancilla_width(p.gen1), 1});

  auto remap = [&](const GateCircuit& g) {
    const std::set<std::string> outs(g.outputs.begin(), g.outputs.end());
    // Map each source qubit to (register, offset) in the C/R split.
    std::map<std::string, std::pair<std::string, int>> base;
    int c_off = 0, r_off = 0;
    for (const Register& r : g.layout.regs) {
      if (outs.count(r.name)) {
        base[r.name] = {"C", c_off};
        c_off += r.qubits;
      } else {
        base[r.name] = {"R", r_off};
        r_off += r.qubits;
      }
    }
    GateCircuit q;
    q.layout = RegisterLayout({{"C", c_width}, {"R", r_width}});
    q.outputs = {"C"};
    for (Gate gate : g.gates) {
      for (QubitAddr& t : gate.targets) {
        const auto& [reg, off] = base.at(t.reg);
        t = qaddr(reg, off + t.idx);
      }
      q.gates.push_back(std::move(gate));
    }
    return q;
  };

  CommitmentScheme s;
  s.q0 = remap(p.gen0);
  s.q1 = remap(p.gen1);
  return s;
}

// Q_b |0...0> over (C, R).
inline PureState commit(const CommitmentScheme& s, int b) {
  validate_scheme(s);
  return run_pure(b == 0 ? s.q0 : s.q1);
}

// The commitment message rho_b = Tr_R of the committed state.
inline DensityMatrix message(const CommitmentScheme& s, int b,
                             int dm_cap = kDefaultDmCap) {
  return reduce_pure(commit(s, b), {s.commit_register}, dm_cap);
}

// Acceptance probability <0| Q_b^dagger rho Q_b |0> of an opening.
inline double verify_opening(const CommitmentScheme& s, int b, const DensityMatrix& state) {
  const PureState ref = commit(s, b);
  if (!(state.layout == ref.layout))
    throw std::invalid_argument("verify_opening: layout mismatch");
  cplx acc = 0.0;
  const std::size_t d = ref.amps.size();
  for (std::size_t i = 0; i < d; ++i) {
    if (ref.amps[i] == cplx{}) continue;
    cplx row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += state.mat.at(i, j) * ref.amps[j];
    acc += std::conj(ref.amps[i]) * row;
  }
  return acc.real();
}

// Statistical distinguishing bound on the two messages; every distinguisher's
// advantage is at most this.
inline double hiding_advantage(const CommitmentScheme& s, int dm_cap = kDefaultDmCap) {
  return trace_distance(message(s, 0, dm_cap), message(s, 1, dm_cap));
}

// Honest-binding parameter: the optimal opening-attack norm over all
// unitaries on R (plus any ancilla) equals sqrt(F) of the two messages by
// Uhlmann's theorem; 0 means perfectly binding.
inline double binding_parameter(const CommitmentScheme& s, int dm_cap = kDefaultDmCap) {
  return std::sqrt(std::max(0.0, fidelity(message(s, 0, dm_cap), message(s, 1, dm_cap))));
}

// Norm of the binding attack that commits to 0, applies U on (R, aux) and
// hopes to open as 1.  Always at most binding_parameter (sampled check).
inline double binding_attack_norm(const CommitmentScheme& s, const ComplexMatrix& u_raux,
                                  const std::vector<cplx>& aux) {
  const PureState psi0 = commit(s, 0);
  const PureState psi1 = commit(s, 1);
  const std::size_t dc = std::size_t{1} << commit_qubits(s);
  const std::size_t dr = std::size_t{1} << opening_qubits(s);
  const std::size_t dz = aux.size();
  if (u_raux.rows != dr * dz || u_raux.cols != dr * dz)
    throw std::invalid_argument("attack unitary must act on R x aux");

  // v = (I_C ox U_{R aux}) (psi0 ox aux)
  std::vector<cplx> v(dc * dr * dz);
  for (std::size_t c = 0; c < dc; ++c)
    for (std::size_t r = 0; r < dr; ++r) {
      const cplx amp = psi0.amps[c * dr + r];
      if (amp == cplx{}) continue;
      for (std::size_t z = 0; z < dz; ++z) v[(c * dr + r) * dz + z] += amp * aux[z];
    }
  std::vector<cplx> w(v.size());
  for (std::size_t c = 0; c < dc; ++c)
    for (std::size_t rz = 0; rz < dr * dz; ++rz) {
      cplx acc = 0.0;
      const cplx* row = &u_raux.a[rz * dr * dz];
      for (std::size_t rz2 = 0; rz2 < dr * dz; ++rz2) acc += row[rz2] * v[c * dr * dz + rz2];
      w[c * dr * dz + rz] = acc;
    }
  // Project onto |psi1><psi1| ox I_aux and take the norm.
  double norm2 = 0.0;
  for (std::size_t z = 0; z < dz; ++z) {
    cplx ip = 0.0;
    for (std::size_t cr = 0; cr < dc * dr; ++cr)
      ip += std::conj(psi1.amps[cr]) * w[cr * dz + z];
    norm2 += std::norm(ip);
  }
  return std::sqrt(norm2);
}

// One term of a committed superposition: amplitude, committed bits, and an
// optional auxiliary state shared across terms' layout.
struct SuperpositionTerm {
  std::vector<int> bits;
  cplx amplitude;
  std::vector<cplx> aux;  // length 2^z; {1} when no auxiliary register
};

// Deviation between measuring the projector on the coherent committed
// superposition and on its termwise mixture.  The projector may act on the
// label register, the opening registers and the auxiliary register, never on
// the commitment registers.
inline double collapse_deviation(const CommitmentScheme& s,
                                 const std::vector<SuperpositionTerm>& terms,
                                 const ComplexMatrix& projector,
                                 const std::vector<std::string>& projector_regs) {
  validate_scheme(s);
  if (terms.empty()) throw std::invalid_argument("collapse_deviation: no terms");
  const std::size_t m = terms.front().bits.size();
  const std::size_t dz = terms.front().aux.empty() ? 1 : terms.front().aux.size();
  for (const SuperpositionTerm& t : terms) {
    if (t.bits.size() != m) throw std::invalid_argument("terms disagree on label width");
    if ((t.aux.empty() ? std::size_t{1} : t.aux.size()) != dz)
      throw std::invalid_argument("terms disagree on the auxiliary dimension");
  }

  // Layout: S (m qubits), then C_k, R_k per committed bit, then aux Z.
  std::vector<Register> regs{{"S", static_cast<int>(m)}};
  std::set<std::string> commit_regs;
  for (std::size_t k = 0; k < m; ++k) {
    regs.push_back({"C" + std::to_string(k), commit_qubits(s)});
    commit_regs.insert("C" + std::to_string(k));
    regs.push_back({"R" + std::to_string(k), opening_qubits(s)});
  }
  int z_qubits = 0;
  while ((std::size_t{1} << z_qubits) < dz) ++z_qubits;
  if (z_qubits > 0) regs.push_back({"Z", z_qubits});
  const RegisterLayout lay(std::move(regs));

  for (const std::string& r : projector_regs) {
    if (!lay.has(r)) throw std::invalid_argument("projector register '" + r + "' unknown");
    if (commit_regs.count(r))
      throw std::invalid_argument("projector must not act on the commitment registers");
  }

  const PureState committed[2] = {commit(s, 0), commit(s, 1)};

  auto term_vector = [&](const SuperpositionTerm& t, bool weighted) {
    std::vector<cplx> v{weighted ? t.amplitude : cplx{1.0}};
    std::uint64_t label = 0;
    for (std::size_t k = 0; k < m; ++k) label = (label << 1) | (t.bits[k] & 1);
    std::vector<cplx> lab(std::size_t{1} << m, cplx{});
    lab[label] = 1.0;
    auto kron_vec = [](const std::vector<cplx>& a, const std::vector<cplx>& b) {
      std::vector<cplx> r(a.size() * b.size());
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
      return r;
    };
    v = kron_vec(v, lab);
    for (std::size_t k = 0; k < m; ++k) v = kron_vec(v, committed[t.bits[k] & 1].amps);
    if (z_qubits > 0) v = kron_vec(v, t.aux);
    return v;
  };

  // Embed the projector over its registers into the full space.
  const int n = lay.total_qubits();
  std::vector<int> proj_qubits;
  for (const std::string& r : projector_regs) {
    const int off = lay.offset(r);
    for (int q = 0; q < lay.find(r).qubits; ++q) proj_qubits.push_back(off + q);
  }
  const std::size_t dp = std::size_t{1} << proj_qubits.size();
  if (projector.rows != dp || projector.cols != dp)
    throw std::invalid_argument("projector dimension does not match its registers");
  if (max_abs_diff(projector * projector, projector) > 1e-9 ||
      !is_hermitian(projector, 1e-9))
    throw std::invalid_argument("collapse probe must be a projector");

  auto apply_projector = [&](std::vector<cplx> v) {
    detail::apply_gate_vec(v, n, proj_qubits, projector);
    return v;
  };
  auto norm2 = [](const std::vector<cplx>& v) {
    double s2 = 0.0;
    for (const cplx& z : v) s2 += std::norm(z);
    return s2;
  };

  std::vector<cplx> coherent(std::size_t{1} << n, cplx{});
  double termwise = 0.0;
  for (const SuperpositionTerm& t : terms) {
    std::vector<cplx> v = term_vector(t, true);
    for (std::size_t i = 0; i < v.size(); ++i) coherent[i] += v[i];
    termwise += norm2(apply_projector(std::move(v)));
  }
  const double joint = norm2(apply_projector(std::move(coherent)));
  return std::abs(joint - termwise);
}

}  // namespace efilab
