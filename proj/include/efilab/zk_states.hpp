// Instance-dependent state pairs from k-round interactive protocols.  Each
// round is a verifier message followed by a prover response through a single
// message register.  Snapshots of the purified run give two factor lists over
// the verifier's registers plus the message register:
//   xi_i  - right after the verifier's round-i circuit (taken just before the
//           message leaves),
//   rho_i - right after the prover's round-i response returns.
// Their k-fold tensor products are the two states of interest; the farness is
// their trace distance, or a certified per-factor lower bound when the tensor
// blows past the density-matrix cap.
#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "efilab/metrics.hpp"
#include "efilab/protocol.hpp"

namespace efilab {

struct Round {
  int verifier_step = 0;  // index into spec.steps, a verifier LocalStep
  int prover_step = 0;    // index into spec.steps, a prover LocalStep
};

struct RoundedProtocol {
  ProtocolSpec spec;
  std::vector<Round> rounds;
  std::string message;  // the single register that travels back and forth
};

struct RoundStructure {
  std::string verifier;
  std::string prover;
  std::vector<std::string> view_regs;      // verifier-private + message, layout order
  std::vector<int> xi_snapshot_steps;      // per round
  std::vector<int> rho_snapshot_steps;     // per round
};

inline RoundStructure analyze_rounds(const RoundedProtocol& rp) {
  validate_protocol(rp.spec);
  if (rp.rounds.empty()) throw std::invalid_argument("rounded protocol needs k >= 1");
  if (!rp.spec.layout.has(rp.message))
    throw std::invalid_argument("unknown message register '" + rp.message + "'");

  RoundStructure rs;
  const int n_steps = static_cast<int>(rp.spec.steps.size());
  auto local_at = [&](int idx) -> const LocalStep& {
    if (idx < 0 || idx >= n_steps)
      throw std::invalid_argument("round step index out of range");
    const auto* local = std::get_if<LocalStep>(&rp.spec.steps[idx]);
    if (!local) throw std::invalid_argument("round step " + std::to_string(idx) +
                                            " is not a local step");
    return *local;
  };
  rs.verifier = local_at(rp.rounds.front().verifier_step).party;
  rs.prover = rp.spec.other(rs.verifier);
  if (rp.spec.owner0.at(rp.message) != rs.verifier)
    throw std::invalid_argument("the verifier must own the message register initially");

  // Only the message register may move.
  for (const Step& s : rp.spec.steps)
    if (const auto* send = std::get_if<SendStep>(&s))
      if (send->reg != rp.message)
        throw std::invalid_argument("only the message register may be sent");

  int prev = -1;
  for (const Round& r : rp.rounds) {
    if (local_at(r.verifier_step).party != rs.verifier ||
        local_at(r.prover_step).party != rs.prover)
      throw std::invalid_argument("round steps have the wrong parties");
    if (!(prev < r.verifier_step && r.verifier_step < r.prover_step))
      throw std::invalid_argument("round steps must be strictly ordered");
    // The message must leave between the two circuits and return afterwards.
    int to_prover = -1, to_verifier = -1;
    for (int i = r.verifier_step + 1; i < r.prover_step; ++i)
      if (const auto* send = std::get_if<SendStep>(&rp.spec.steps[i]))
        if (send->to == rs.prover) to_prover = i;
    for (int i = r.prover_step + 1; i < n_steps; ++i) {
      if (const auto* send = std::get_if<SendStep>(&rp.spec.steps[i]))
        if (send->to == rs.verifier) {
          to_verifier = i;
          break;
        }
    }
    if (to_prover < 0 || to_verifier < 0)
      throw std::invalid_argument("each round must ship the message out and back");
    rs.xi_snapshot_steps.push_back(r.verifier_step);
    rs.rho_snapshot_steps.push_back(to_verifier);
    prev = r.prover_step;
  }

  for (const Register& r : rp.spec.layout.regs)
    if (rp.spec.owner0.at(r.name) == rs.verifier) rs.view_regs.push_back(r.name);
  return rs;
}

struct FarnessValue {
  double value = 0.0;
  bool lower_bound = false;  // true when only the per-factor bound fit the cap
};

struct InstanceStatePair {
  std::vector<DensityMatrix> rho_factors;
  std::vector<DensityMatrix> xi_factors;
  FarnessValue farness;
};

// TD of the two k-fold tensor products; falls back to the per-factor maximum
// (a lower bound, by monotonicity under partial trace) past the cap.
inline FarnessValue instance_farness(const std::vector<DensityMatrix>& rho_factors,
                                     const std::vector<DensityMatrix>& xi_factors,
                                     int dm_cap = kDefaultDmCap) {
  if (rho_factors.size() != xi_factors.size() || rho_factors.empty())
    throw std::invalid_argument("instance_farness: factor lists must match");
  const std::size_t k = rho_factors.size();
  int total = 0;
  for (const DensityMatrix& f : rho_factors) total += f.qubits();

  FarnessValue out;
  if (total <= dm_cap) {
    auto build = [&](const std::vector<DensityMatrix>& fs) {
      DensityMatrix acc;
      for (std::size_t i = 0; i < k; ++i) {
        DensityMatrix copy = fs[i];
        std::vector<Register> regs;
        for (const Register& r : copy.layout.regs)
          regs.push_back({r.name + "_f" + std::to_string(i + 1), r.qubits});
        copy.layout = RegisterLayout(regs);
        acc = i == 0 ? copy : tensor(acc, copy, dm_cap);
      }
      return acc;
    };
    out.value = trace_distance(build(rho_factors), build(xi_factors));
    return out;
  }
  out.lower_bound = true;
  for (std::size_t i = 0; i < k; ++i)
    out.value = std::max(out.value, trace_distance(rho_factors[i], xi_factors[i]));
  return out;
}

// One purified run, snapshots at the 2k round boundaries, reduced onto the
// verifier's registers (message included at both boundaries).
inline InstanceStatePair extract_instance_states(const RoundedProtocol& rp,
                                                 const Bindings& bound = {},
                                                 int dm_cap = kDefaultDmCap) {
  const RoundStructure rs = analyze_rounds(rp);
  const ExecutionTrace t = run_protocol(rp.spec, bound, RunMode::Purified, nullptr, true);
  const std::set<std::string> keep(rs.view_regs.begin(), rs.view_regs.end());

  InstanceStatePair pair;
  for (std::size_t i = 0; i < rp.rounds.size(); ++i) {
    pair.xi_factors.push_back(
        reduce_pure(t.snapshots[rs.xi_snapshot_steps[i]], keep, dm_cap));
    pair.rho_factors.push_back(
        reduce_pure(t.snapshots[rs.rho_snapshot_steps[i]], keep, dm_cap));
  }
  pair.farness = instance_farness(pair.rho_factors, pair.xi_factors, dm_cap);
  return pair;
}

// Honest-interaction factor: the verifier's state after round i, computed by
// an independent truncated re-run (no snapshots).
inline DensityMatrix truncated_round_state(const RoundedProtocol& rp, int round_index,
                                           const Bindings& bound = {},
                                           int dm_cap = kDefaultDmCap) {
  const RoundStructure rs = analyze_rounds(rp);
  ProtocolSpec trunc = rp.spec;
  trunc.steps.resize(rs.rho_snapshot_steps.at(round_index) + 1);
  const ExecutionTrace t = run_protocol(trunc, bound, RunMode::Purified);
  return reduce_pure(t.final_state,
                     std::set<std::string>(rs.view_regs.begin(), rs.view_regs.end()),
                     dm_cap);
}

}  // namespace efilab
