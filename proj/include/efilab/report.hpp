// Machine-readable run reports: command, input digests, a result tree, and
// any raised flags.  Deterministic given (inputs, seed); every floating-point
// value is serialized with 12 significant digits.
#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "efilab/io.hpp"
#include "efilab/version.hpp"

namespace efilab {

enum class Severity { Info, Warning, Error };

inline const char* severity_name(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
  }
  return "?";
}

// Rounds to 12 significant digits, the report serialization contract.
inline double round12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  json results = json::object();
  std::vector<std::pair<Severity, std::string>> flags;
  std::uint64_t seed = 0;

  void add_input(const std::string& path, const std::string& bytes) {
    inputs.push_back({path, fnv1a64(bytes)});
  }
  void flag(Severity s, const std::string& message) { flags.push_back({s, message}); }
  bool has_error_flag() const {
    for (const auto& [s, m] : flags)
      if (s == Severity::Error) return true;
    return false;
  }
};

namespace detail {

inline json round_floats(const json& j) {
  if (j.is_number_float()) return round12(j.get<double>());
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) out[k] = round_floats(v);
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const json& v : j) out.push_back(round_floats(v));
    return out;
  }
  return j;
}

}  // namespace detail

inline json report_to_json(const Report& r) {
  json j;
  j["command"] = r.command;
  j["version"] = kVersion;
  j["seed"] = r.seed;
  j["inputs"] = json::array();
  for (const auto& [path, digest] : r.inputs)
    j["inputs"].push_back({{"path", path}, {"digest", digest}});
  j["results"] = detail::round_floats(r.results);
  j["flags"] = json::array();
  for (const auto& [s, m] : r.flags)
    j["flags"].push_back({{"severity", severity_name(s)}, {"message", m}});
  return j;
}

}  // namespace efilab
