#pragma once

#include <cstdint>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "adq/poly.hpp"
#include "adq/rational.hpp"
#include "adq/solver.hpp"

namespace adq {

using ordered_json = nlohmann::ordered_json;

// Common envelope every command emits. The result payload is command
// specific; violations and failures drive the exit status.
struct RunReport {
  std::string command;
  std::map<std::string, std::string> params;
  std::string started_at;  // ISO 8601 UTC
  std::int64_t duration_ms = 0;
  ordered_json result = ordered_json::object();
  ordered_json violations = ordered_json::array();
  ordered_json failures = ordered_json::array();
};

inline bool has_problems(const RunReport& r) {
  return !r.violations.empty() || !r.failures.empty();
}

inline std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Exact rationals travel as "num/den" strings, never floats.
inline std::string rational_str(const Rational& r) { return r.to_string(); }

inline ordered_json to_json(const RunReport& r) {
  ordered_json j;
  j["command"] = r.command;
  j["params"] = r.params;
  j["started_at"] = r.started_at;
  j["duration_ms"] = r.duration_ms;
  j["result"] = r.result;
  j["violations"] = r.violations;
  j["failures"] = r.failures;
  return j;
}

inline std::string to_json_text(const RunReport& r) {
  return to_json(r).dump(2) + "\n";
}

namespace detail {

inline std::string csv_scalar(const ordered_json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_null()) return "";
  return j.dump();
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += "\"\"";
    else q += c;
  }
  return q + "\"";
}

inline void flatten_json(const ordered_json& j, const std::string& prefix,
                         std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten_json(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    std::size_t i = 0;
    for (const auto& v : j) {
      const std::string key = std::to_string(i++);
      flatten_json(v, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else {
    out.emplace_back(prefix, csv_scalar(j));
  }
}

}  // namespace detail

// Deterministic two-column flatten: dotted key paths, quoted values.
inline std::string to_csv_text(const RunReport& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  detail::flatten_json(to_json(r), "", rows);
  std::string out = "key,value\n";
  for (const auto& [k, v] : rows)
    out += detail::csv_quote(k) + "," + detail::csv_quote(v) + "\n";
  return out;
}

// Same flatten without the timestamp fields: the plain-text rendering is
// deterministic for identical inputs.
inline std::string to_text(const RunReport& r) {
  ordered_json j = to_json(r);
  j.erase("started_at");
  j.erase("duration_ms");
  std::vector<std::pair<std::string, std::string>> rows;
  detail::flatten_json(j, "", rows);
  std::string out;
  for (const auto& [k, v] : rows) out += k + " = " + v + "\n";
  return out;
}

// Family serialization: {"f2", "assignments", "free", "warnings"}, symbols
// written "p" or "p^e", values "num/den".
inline ordered_json family_to_json(const SolutionFamily& fam) {
  ordered_json j;
  const auto f2 = fam.assignments.find(Sym{2, 1});
  j["f2"] = f2 == fam.assignments.end() ? ordered_json()
                                        : ordered_json(rational_str(f2->second));
  ordered_json assigns = ordered_json::array();
  for (const auto& [s, v] : fam.assignments)
    assigns.push_back({s.to_string(), rational_str(v)});
  j["assignments"] = std::move(assigns);
  ordered_json free = ordered_json::array();
  for (const Sym& s : fam.free) free.push_back(s.to_string());
  j["free"] = std::move(free);
  j["warnings"] = fam.warnings;
  return j;
}

inline SolutionFamily family_from_json(const ordered_json& j) {
  SolutionFamily fam;
  if (!j.is_object() || !j.contains("assignments"))
    throw std::invalid_argument("family JSON: missing assignments");
  for (const auto& entry : j.at("assignments")) {
    if (!entry.is_array() || entry.size() != 2)
      throw std::invalid_argument("family JSON: bad assignment entry");
    fam.assignments[Sym::parse(entry[0].get<std::string>())] =
        Rational::parse(entry[1].get<std::string>());
  }
  if (j.contains("free"))
    for (const auto& entry : j.at("free"))
      fam.free.insert(Sym::parse(entry.get<std::string>()));
  if (j.contains("warnings"))
    for (const auto& entry : j.at("warnings"))
      fam.warnings.push_back(entry.get<std::string>());
  return fam;
}

// Accepts a single family object, an array of families, or a full
// classification report (families under result.families).
inline std::vector<SolutionFamily> families_from_json_text(
    const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  std::vector<SolutionFamily> out;
  if (j.is_array()) {
    for (const auto& entry : j) out.push_back(family_from_json(entry));
  } else if (j.is_object() && j.contains("result") &&
             j.at("result").is_object() &&
             j.at("result").contains("families")) {
    for (const auto& entry : j.at("result").at("families"))
      out.push_back(family_from_json(entry));
  } else {
    out.push_back(family_from_json(j));
  }
  return out;
}

inline std::vector<SolutionFamily> families_from_json_file(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open family file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return families_from_json_text(buf.str());
}

}  // namespace adq
