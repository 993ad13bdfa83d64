// File formats.  JSON schemas are strict: unknown keys are rejected, and
// serialize(parse(x)) is the canonical form, stable under further round
// trips.  Insertion-ordered JSON keeps register declarations in layout order.
#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "efilab/circuit.hpp"
#include "efilab/commitment.hpp"
#include "efilab/efi.hpp"
#include "efilab/ot.hpp"
#include "efilab/protocol.hpp"
#include "efilab/twopc.hpp"
#include "efilab/zk_states.hpp"

namespace efilab {

using json = nlohmann::ordered_json;

namespace detail {

inline void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                                const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

inline const json& require_key(const json& j, const std::string& key,
                               const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(where + ": missing key '" + key + "'");
  return *it;
}

}  // namespace detail

// ---- circuits ----------------------------------------------------------------

inline json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols; ++c)
      row.push_back(json::array({m.at(r, c).real(), m.at(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(where + ": matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw std::invalid_argument(where + ": ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = j[r][c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw std::invalid_argument(where + ": matrix entries are [re, im] pairs");
      m.at(r, c) = cplx{e[0].get<double>(), e[1].get<double>()};
    }
  }
  return m;
}

inline json circuit_to_json(const GateCircuit& c) {
  json j;
  j["registers"] = json::array();
  for (const Register& r : c.layout.regs)
    j["registers"].push_back({{"name", r.name}, {"qubits", r.qubits}});
  j["inputs"] = c.inputs;
  j["outputs"] = c.outputs;
  j["gates"] = json::array();
  for (const Gate& g : c.gates) {
    json gate;
    gate["g"] = gate_name(g.kind);
    json on = json::array();
    for (const QubitAddr& t : g.targets) on.push_back(addr_string(t));
    gate["on"] = std::move(on);
    if (g.matrix) gate["matrix"] = matrix_to_json(*g.matrix);
    j["gates"].push_back(std::move(gate));
  }
  return j;
}

inline GateCircuit circuit_from_json(const json& j, const std::string& where = "circuit") {
  detail::reject_unknown_keys(j, {"registers", "inputs", "outputs", "gates"}, where);
  GateCircuit c;
  std::vector<Register> regs;
  for (const json& r : detail::require_key(j, "registers", where)) {
    detail::reject_unknown_keys(r, {"name", "qubits"}, where + ".registers");
    regs.push_back({detail::require_key(r, "name", where).get<std::string>(),
                    detail::require_key(r, "qubits", where).get<int>()});
  }
  c.layout = RegisterLayout(std::move(regs));
  for (const json& s : detail::require_key(j, "inputs", where))
    c.inputs.push_back(s.get<std::string>());
  for (const json& s : detail::require_key(j, "outputs", where))
    c.outputs.push_back(s.get<std::string>());
  for (const json& g : detail::require_key(j, "gates", where)) {
    detail::reject_unknown_keys(g, {"g", "on", "matrix"}, where + ".gates");
    Gate gate;
    const std::string name = detail::require_key(g, "g", where).get<std::string>();
    const auto kind = gate_kind_from_name(name);
    if (!kind) throw std::invalid_argument(where + ": unknown gate '" + name + "'");
    gate.kind = *kind;
    for (const json& t : detail::require_key(g, "on", where))
      gate.targets.push_back(parse_addr(t.get<std::string>()));
    if (g.contains("matrix")) gate.matrix = matrix_from_json(g["matrix"], where);
    c.gates.push_back(std::move(gate));
  }
  validate_circuit(c);
  return c;
}

// ---- protocols ---------------------------------------------------------------

inline json protocol_to_json(const ProtocolSpec& p) {
  json j;
  j["parties"] = json::array({p.parties[0], p.parties[1]});
  // Register widths live in the step circuits; registers no circuit touches
  // are single qubits.
  j["owns"] = json::object();
  for (const Register& r : p.layout.regs) j["owns"][r.name] = p.owner0.at(r.name);
  j["inputs"] = json::object();
  for (const std::string& party : p.parties) {
    auto it = p.inputs.find(party);
    j["inputs"][party] = it == p.inputs.end() ? std::vector<std::string>{} : it->second;
  }
  j["steps"] = json::array();
  for (const Step& s : p.steps) {
    if (const auto* local = std::get_if<LocalStep>(&s)) {
      json step;
      step["local"] = {{"party", local->party}, {"circuit", circuit_to_json(local->circuit)}};
      j["steps"].push_back(std::move(step));
    } else {
      const auto& send = std::get<SendStep>(s);
      json step;
      step["send"] = {{"reg", send.reg}, {"to", send.to}};
      j["steps"].push_back(std::move(step));
    }
  }
  j["outputs"] = json::object();
  j["measure"] = json::object();
  for (const std::string& party : p.parties) {
    auto ot = p.outputs.find(party);
    j["outputs"][party] = ot == p.outputs.end() ? std::vector<std::string>{} : ot->second;
    auto mt = p.measure.find(party);
    j["measure"][party] = mt == p.measure.end() ? std::vector<std::string>{} : mt->second;
  }
  return j;
}

inline ProtocolSpec protocol_from_json(const json& j, const std::string& where = "protocol",
                                       const std::vector<std::string>& extra_keys = {}) {
  std::vector<std::string> allowed{"parties", "owns", "inputs", "steps", "outputs", "measure"};
  allowed.insert(allowed.end(), extra_keys.begin(), extra_keys.end());
  detail::reject_unknown_keys(j, allowed, where);

  ProtocolSpec p;
  const json& parties = detail::require_key(j, "parties", where);
  if (!parties.is_array() || parties.size() != 2)
    throw std::invalid_argument(where + ": exactly two parties");
  p.parties = {parties[0].get<std::string>(), parties[1].get<std::string>()};

  std::vector<std::string> reg_order;
  for (const auto& [reg, party] : detail::require_key(j, "owns", where).items()) {
    if (!party.is_string())
      throw std::invalid_argument(where + ".owns: values are party names");
    reg_order.push_back(reg);
    p.owner0[reg] = party.get<std::string>();
  }

  std::map<std::string, int> widths;  // from step circuits; default 1
  for (const auto& [party, slots] : detail::require_key(j, "inputs", where).items())
    for (const json& s : slots) p.inputs[party].push_back(s.get<std::string>());
  for (const json& s : detail::require_key(j, "steps", where)) {
    if (s.contains("local")) {
      detail::reject_unknown_keys(s, {"local"}, where + ".steps");
      const json& l = s["local"];
      detail::reject_unknown_keys(l, {"party", "circuit"}, where + ".local");
      LocalStep step;
      step.party = detail::require_key(l, "party", where).get<std::string>();
      step.circuit = circuit_from_json(detail::require_key(l, "circuit", where),
                                       where + ".local.circuit");
      for (const Register& r : step.circuit.layout.regs) {
        auto it = widths.find(r.name);
        if (it != widths.end() && it->second != r.qubits)
          throw std::invalid_argument(where + ": register '" + r.name +
                                      "' has conflicting widths across steps");
        widths[r.name] = r.qubits;
      }
      p.steps.push_back(std::move(step));
    } else if (s.contains("send")) {
      detail::reject_unknown_keys(s, {"send"}, where + ".steps");
      const json& t = s["send"];
      detail::reject_unknown_keys(t, {"reg", "to"}, where + ".send");
      p.steps.push_back(SendStep{detail::require_key(t, "reg", where).get<std::string>(),
                                 detail::require_key(t, "to", where).get<std::string>()});
    } else {
      throw std::invalid_argument(where + ": step must be 'local' or 'send'");
    }
  }
  for (const auto& [party, rs] : detail::require_key(j, "outputs", where).items())
    for (const json& r : rs) p.outputs[party].push_back(r.get<std::string>());
  for (const auto& [party, rs] : detail::require_key(j, "measure", where).items())
    for (const json& r : rs) p.measure[party].push_back(r.get<std::string>());

  std::vector<Register> regs;
  for (const std::string& name : reg_order) {
    auto it = widths.find(name);
    regs.push_back({name, it == widths.end() ? 1 : it->second});
  }
  p.layout = RegisterLayout(std::move(regs));
  validate_protocol(p);
  return p;
}

// ---- higher-level artifacts ----------------------------------------------------

inline json efi_pair_to_json(const EfiPair& p) {
  json j;
  j["gen0"] = circuit_to_json(p.gen0);
  j["gen1"] = circuit_to_json(p.gen1);
  j["lambda"] = p.security_parameter;
  return j;
}

inline EfiPair efi_pair_from_json(const json& j) {
  detail::reject_unknown_keys(j, {"gen0", "gen1", "lambda"}, "efi pair");
  EfiPair p;
  p.gen0 = circuit_from_json(detail::require_key(j, "gen0", "efi pair"), "gen0");
  p.gen1 = circuit_from_json(detail::require_key(j, "gen1", "efi pair"), "gen1");
  p.security_parameter = detail::require_key(j, "lambda", "efi pair").get<int>();
  validate_efi_pair(p);
  return p;
}

inline json scheme_to_json(const CommitmentScheme& s) {
  json j;
  j["q0"] = circuit_to_json(s.q0);
  j["q1"] = circuit_to_json(s.q1);
  j["C"] = s.commit_register;
  j["R"] = s.opening_register;
  return j;
}

inline CommitmentScheme scheme_from_json(const json& j) {
  detail::reject_unknown_keys(j, {"q0", "q1", "C", "R"}, "scheme");
  CommitmentScheme s;
  s.q0 = circuit_from_json(detail::require_key(j, "q0", "scheme"), "q0");
  s.q1 = circuit_from_json(detail::require_key(j, "q1", "scheme"), "q1");
  s.commit_register = detail::require_key(j, "C", "scheme").get<std::string>();
  s.opening_register = detail::require_key(j, "R", "scheme").get<std::string>();
  validate_scheme(s);
  return s;
}

inline json ot_to_json(const OtProtocol& p) {
  json j = protocol_to_json(p.spec);
  j["ot"] = {{"x0", p.meta.x0}, {"x1", p.meta.x1}, {"b", p.meta.b}, {"out", p.meta.out}};
  return j;
}

inline OtProtocol ot_from_json(const json& j) {
  OtProtocol p;
  p.spec = protocol_from_json(j, "ot protocol", {"ot"});
  const json& meta = detail::require_key(j, "ot", "ot protocol");
  detail::reject_unknown_keys(meta, {"x0", "x1", "b", "out"}, "ot metadata");
  p.meta.x0 = detail::require_key(meta, "x0", "ot").get<std::string>();
  p.meta.x1 = detail::require_key(meta, "x1", "ot").get<std::string>();
  p.meta.b = detail::require_key(meta, "b", "ot").get<std::string>();
  p.meta.out = detail::require_key(meta, "out", "ot").get<std::string>();
  validate_ot(p);
  return p;
}

inline json rounded_to_json(const RoundedProtocol& rp) {
  json j = protocol_to_json(rp.spec);
  j["rounds"] = json::array();
  for (const Round& r : rp.rounds)
    j["rounds"].push_back({{"verifier_step", r.verifier_step}, {"prover_step", r.prover_step}});
  j["message"] = rp.message;
  return j;
}

inline RoundedProtocol rounded_from_json(const json& j) {
  RoundedProtocol rp;
  rp.spec = protocol_from_json(j, "rounded protocol", {"rounds", "message"});
  for (const json& r : detail::require_key(j, "rounds", "rounded protocol")) {
    detail::reject_unknown_keys(r, {"verifier_step", "prover_step"}, "rounds");
    rp.rounds.push_back({detail::require_key(r, "verifier_step", "rounds").get<int>(),
                         detail::require_key(r, "prover_step", "rounds").get<int>()});
  }
  rp.message = detail::require_key(j, "message", "rounded protocol").get<std::string>();
  analyze_rounds(rp);
  return rp;
}

// ---- function tables (CSV) -----------------------------------------------------

inline bool alnum_label(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) return false;
  return true;
}

// First row: Bob's input labels; first column: Alice's; cells: output labels.
inline FunctionTable table_from_csv(const std::string& text) {
  std::vector<std::vector<std::string>> grid;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    grid.push_back(std::move(row));
  }
  if (grid.size() < 2 || grid[0].size() < 2)
    throw std::invalid_argument("function table needs a header row and column");
  FunctionTable f;
  for (std::size_t c = 1; c < grid[0].size(); ++c) {
    if (!alnum_label(grid[0][c]))
      throw std::invalid_argument("bad column label '" + grid[0][c] + "'");
    f.bob_labels.push_back(grid[0][c]);
  }
  for (std::size_t r = 1; r < grid.size(); ++r) {
    if (grid[r].size() != grid[0].size())
      throw std::invalid_argument("ragged function table row " + std::to_string(r));
    if (!alnum_label(grid[r][0]))
      throw std::invalid_argument("bad row label '" + grid[r][0] + "'");
    f.alice_labels.push_back(grid[r][0]);
    std::vector<std::string> cells;
    for (std::size_t c = 1; c < grid[r].size(); ++c) {
      if (!alnum_label(grid[r][c]))
        throw std::invalid_argument("bad output label '" + grid[r][c] + "'");
      cells.push_back(grid[r][c]);
    }
    f.cells.push_back(std::move(cells));
  }
  validate_table(f);
  return f;
}

// ---- files and digests -----------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
}

inline json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
}

inline std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

// FNV-1a, 64-bit, hex; used to fingerprint report inputs.
inline std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace efilab
