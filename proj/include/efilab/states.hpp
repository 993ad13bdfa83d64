// Register layouts, density matrices and pure states.
//
// Qubit order convention: the first qubit of the first register is the most
// significant bit of a basis index, so |01> on registers (a, b) is index 1.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "efilab/complex_matrix.hpp"
#include "efilab/eig.hpp"
#include "efilab/version.hpp"

namespace efilab {

inline bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

struct Register {
  std::string name;
  int qubits = 0;
  bool operator==(const Register&) const = default;
};

struct RegisterLayout {
  std::vector<Register> regs;

  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Register> r) : regs(std::move(r)) { validate(); }

  void validate() const {
    std::set<std::string> seen;
    for (const Register& r : regs) {
      if (!valid_identifier(r.name))
        throw std::invalid_argument("register name is not an identifier: '" + r.name + "'");
      if (r.qubits < 1)
        throw std::invalid_argument("register '" + r.name + "' must have at least 1 qubit");
      if (!seen.insert(r.name).second)
        throw std::invalid_argument("duplicate register name: '" + r.name + "'");
    }
  }

  int total_qubits() const {
    int n = 0;
    for (const Register& r : regs) n += r.qubits;
    return n;
  }

  bool has(const std::string& name) const {
    for (const Register& r : regs)
      if (r.name == name) return true;
    return false;
  }

  const Register& find(const std::string& name) const {
    for (const Register& r : regs)
      if (r.name == name) return r;
    throw std::invalid_argument("unknown register: '" + name + "'");
  }

  // Global index of the first qubit of `name`.
  int offset(const std::string& name) const {
    int o = 0;
    for (const Register& r : regs) {
      if (r.name == name) return o;
      o += r.qubits;
    }
    throw std::invalid_argument("unknown register: '" + name + "'");
  }

  int qubit_index(const std::string& name, int idx) const {
    const Register& r = find(name);
    if (idx < 0 || idx >= r.qubits)
      throw std::invalid_argument("qubit index out of range: " + name + "." + std::to_string(idx));
    return offset(name) + idx;
  }

  bool operator==(const RegisterLayout&) const = default;
};

inline RegisterLayout concat(const RegisterLayout& a, const RegisterLayout& b) {
  std::vector<Register> regs = a.regs;
  regs.insert(regs.end(), b.regs.begin(), b.regs.end());
  return RegisterLayout(std::move(regs));
}

struct PureState {
  RegisterLayout layout;
  std::vector<cplx> amps;

  int qubits() const { return layout.total_qubits(); }
  std::size_t dim() const { return amps.size(); }

  double norm() const {
    double s = 0.0;
    for (const cplx& z : amps) s += std::norm(z);
    return std::sqrt(s);
  }
};

inline PureState basis_state(const RegisterLayout& layout, std::uint64_t index) {
  const int n = layout.total_qubits();
  if (n > kPureStateQubitCap)
    throw std::invalid_argument("pure state exceeds the 2^20 dimension cap");
  PureState s;
  s.layout = layout;
  s.amps.assign(std::size_t{1} << n, cplx{});
  s.amps[index] = 1.0;
  return s;
}

struct DensityMatrix {
  RegisterLayout layout;
  ComplexMatrix mat;

  int qubits() const { return layout.total_qubits(); }
};

// Structural + numerical checks: Hermitian, unit trace, PSD within 1e-9.
// The PSD check clamps eigenvalues in [-1e-9, 0); more negative is an error.
inline void validate_density(const DensityMatrix& rho, int dm_cap = kDefaultDmCap,
                             double tol = 1e-9) {
  rho.layout.validate();
  const int n = rho.layout.total_qubits();
  if (n > dm_cap)
    throw std::invalid_argument("density matrix exceeds the qubit cap (" +
                                std::to_string(dm_cap) + ")");
  const std::size_t d = std::size_t{1} << n;
  if (rho.mat.rows != d || rho.mat.cols != d)
    throw std::invalid_argument("density matrix dimension does not match its layout");
  if (!finite_entries(rho.mat))
    throw std::invalid_argument("density matrix has non-finite entries");
  if (!is_hermitian(rho.mat, tol))
    throw std::invalid_argument("density matrix is not Hermitian within tolerance");
  if (std::abs(trace(rho.mat) - cplx{1.0}) > tol)
    throw std::invalid_argument("density matrix trace differs from 1");
  const std::vector<double> ev = eigvals_hermitian(rho.mat);
  if (!ev.empty() && ev.back() < -tol)
    throw std::invalid_argument("density matrix has eigenvalue below -1e-9");
}

inline DensityMatrix density_from_pure(const PureState& psi) {
  DensityMatrix rho;
  rho.layout = psi.layout;
  const std::size_t d = psi.dim();
  rho.mat = ComplexMatrix(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (psi.amps[i] == cplx{}) continue;
    for (std::size_t j = 0; j < d; ++j)
      rho.mat.at(i, j) = psi.amps[i] * std::conj(psi.amps[j]);
  }
  return rho;
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b,
                            int dm_cap = kDefaultDmCap) {
  for (const Register& r : b.layout.regs)
    if (a.layout.has(r.name))
      throw std::invalid_argument("tensor: duplicate register name '" + r.name + "'");
  if (a.qubits() + b.qubits() > dm_cap)
    throw std::invalid_argument("tensor: combined state exceeds the qubit cap");
  DensityMatrix r;
  r.layout = concat(a.layout, b.layout);
  r.mat = kron(a.mat, b.mat);
  return r;
}

namespace detail {

// Positions of kept/dropped global qubits -> index scatter helpers.
struct TraceIndexer {
  int n = 0;
  std::vector<int> keep;  // global qubit indices, ascending
  std::vector<int> drop;

  std::uint64_t scatter(std::uint64_t compact, const std::vector<int>& where) const {
    std::uint64_t out = 0;
    const int k = static_cast<int>(where.size());
    for (int b = 0; b < k; ++b) {
      const std::uint64_t bit = (compact >> (k - 1 - b)) & 1u;
      out |= bit << (n - 1 - where[b]);
    }
    return out;
  }
};

inline TraceIndexer make_indexer(const RegisterLayout& layout,
                                 const std::set<std::string>& keep_regs) {
  TraceIndexer ix;
  ix.n = layout.total_qubits();
  int o = 0;
  for (const Register& r : layout.regs) {
    for (int q = 0; q < r.qubits; ++q) {
      if (keep_regs.count(r.name))
        ix.keep.push_back(o + q);
      else
        ix.drop.push_back(o + q);
    }
    o += r.qubits;
  }
  return ix;
}

inline RegisterLayout sublayout(const RegisterLayout& layout,
                                const std::set<std::string>& keep_regs) {
  std::vector<Register> regs;
  for (const Register& r : layout.regs)
    if (keep_regs.count(r.name)) regs.push_back(r);
  return RegisterLayout(std::move(regs));
}

}  // namespace detail

inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   const std::set<std::string>& drop) {
  for (const std::string& name : drop)
    if (!rho.layout.has(name))
      throw std::invalid_argument("partial_trace: unknown register '" + name + "'");
  std::set<std::string> keep;
  for (const Register& r : rho.layout.regs)
    if (!drop.count(r.name)) keep.insert(r.name);
  if (keep.empty())
    throw std::invalid_argument("partial_trace: cannot trace out every register");

  const detail::TraceIndexer ix = detail::make_indexer(rho.layout, keep);
  const std::size_t dk = std::size_t{1} << ix.keep.size();
  const std::size_t dd = std::size_t{1} << ix.drop.size();
  DensityMatrix out;
  out.layout = detail::sublayout(rho.layout, keep);
  out.mat = ComplexMatrix(dk, dk);
  for (std::size_t i = 0; i < dk; ++i) {
    const std::uint64_t bi = ix.scatter(i, ix.keep);
    for (std::size_t j = 0; j < dk; ++j) {
      const std::uint64_t bj = ix.scatter(j, ix.keep);
      cplx s = 0.0;
      for (std::size_t d = 0; d < dd; ++d) {
        const std::uint64_t bd = ix.scatter(d, ix.drop);
        s += rho.mat.at(bi | bd, bj | bd);
      }
      out.mat.at(i, j) = s;
    }
  }
  return out;
}

// Reduced density matrix of a pure state on the registers in `keep`.
inline DensityMatrix reduce_pure(const PureState& psi, const std::set<std::string>& keep,
                                 int dm_cap = kDefaultDmCap) {
  for (const std::string& name : keep)
    if (!psi.layout.has(name))
      throw std::invalid_argument("reduce_pure: unknown register '" + name + "'");
  if (keep.empty()) throw std::invalid_argument("reduce_pure: empty register set");
  const detail::TraceIndexer ix = detail::make_indexer(psi.layout, keep);
  if (static_cast<int>(ix.keep.size()) > dm_cap)
    throw std::invalid_argument("reduce_pure: view exceeds the qubit cap");
  const std::size_t dk = std::size_t{1} << ix.keep.size();
  const std::size_t dd = std::size_t{1} << ix.drop.size();
  DensityMatrix out;
  out.layout = detail::sublayout(psi.layout, keep);
  out.mat = ComplexMatrix(dk, dk);
  for (std::size_t d = 0; d < dd; ++d) {
    const std::uint64_t bd = ix.scatter(d, ix.drop);
    for (std::size_t i = 0; i < dk; ++i) {
      const cplx vi = psi.amps[ix.scatter(i, ix.keep) | bd];
      if (vi == cplx{}) continue;
      for (std::size_t j = 0; j < dk; ++j)
        out.mat.at(i, j) += vi * std::conj(psi.amps[ix.scatter(j, ix.keep) | bd]);
    }
  }
  return out;
}

// Interleaved tensor product: assemble a density matrix over `layout` from
// per-part states whose registers partition the layout in arbitrary order.
inline DensityMatrix assemble_product(const RegisterLayout& layout,
                                      const std::vector<DensityMatrix>& parts) {
  std::map<std::string, std::pair<int, int>> where;  // reg -> (part, offset in part)
  for (int p = 0; p < static_cast<int>(parts.size()); ++p) {
    for (const Register& r : parts[p].layout.regs)
      where[r.name] = {p, parts[p].layout.offset(r.name)};
  }
  const int n = layout.total_qubits();
  // For each global qubit: owning part and bit position within that part.
  std::vector<int> part_of(n), bit_in_part(n);
  int o = 0;
  for (const Register& r : layout.regs) {
    auto it = where.find(r.name);
    if (it == where.end())
      throw std::invalid_argument("assemble_product: register '" + r.name + "' missing");
    for (int q = 0; q < r.qubits; ++q) {
      part_of[o + q] = it->second.first;
      bit_in_part[o + q] = it->second.second + q;
    }
    o += r.qubits;
  }
  const std::size_t d = std::size_t{1} << n;
  auto split = [&](std::uint64_t idx, std::vector<std::uint64_t>& sub) {
    std::fill(sub.begin(), sub.end(), 0);
    for (int q = 0; q < n; ++q) {
      const std::uint64_t bit = (idx >> (n - 1 - q)) & 1u;
      const int p = part_of[q];
      sub[p] |= bit << (parts[p].layout.total_qubits() - 1 - bit_in_part[q]);
    }
  };
  DensityMatrix out;
  out.layout = layout;
  out.mat = ComplexMatrix(d, d);
  std::vector<std::uint64_t> si(parts.size()), sj(parts.size());
  for (std::size_t i = 0; i < d; ++i) {
    split(i, si);
    for (std::size_t j = 0; j < d; ++j) {
      split(j, sj);
      cplx v = 1.0;
      for (std::size_t p = 0; p < parts.size(); ++p) {
        v *= parts[p].mat.at(si[p], sj[p]);
        if (v == cplx{}) break;
      }
      out.mat.at(i, j) = v;
    }
  }
  return out;
}

// Purification: doubles the qubit count with an ancilla register; tracing the
// ancilla out returns the input.
inline PureState purify(const DensityMatrix& rho) {
  const int n = rho.layout.total_qubits();
  if (2 * n > kPureStateQubitCap)
    throw std::invalid_argument("purify: result exceeds the pure-state cap");
  std::string anc = "purifier";
  while (rho.layout.has(anc)) anc += "_";

  EigResult e = eig_hermitian(rho.mat);
  const std::size_t d = rho.mat.rows;
  PureState psi;
  psi.layout = concat(rho.layout, RegisterLayout({{anc, n}}));
  psi.amps.assign(d * d, cplx{});
  for (std::size_t k = 0; k < d; ++k) {
    double v = e.values[k];
    if (v < -1e-9) throw std::invalid_argument("purify: state is not PSD within 1e-9");
    if (v <= 0.0) continue;
    const double sv = std::sqrt(v);
    for (std::size_t i = 0; i < d; ++i) psi.amps[i * d + k] = sv * e.vectors.at(i, k);
  }
  return psi;
}

}  // namespace efilab
