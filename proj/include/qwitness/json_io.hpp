#pragma once

// JSON wire formats for settings, sign patterns, optimizer configs and the
// result types. Emitters go through nlohmann::json, whose object keys are
// sorted and whose doubles print as the shortest round-trip representation.

#include <cstdint>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qwitness/classical.hpp"
#include "qwitness/error.hpp"
#include "qwitness/ineq.hpp"
#include "qwitness/opalg.hpp"
#include "qwitness/optimize.hpp"
#include "qwitness/qobs.hpp"
#include "qwitness/witness.hpp"

namespace qwitness {

using json = nlohmann::json;

/// Thrown for structurally invalid JSON input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

namespace detail {

template <typename T>
T get_field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace detail

// --- settings -------------------------------------------------------------

inline json bloch_to_json(const BlochVector& n) { return json::array({n.x, n.y, n.z}); }

inline BlochVector bloch_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("Bloch vector must be [x, y, z]");
  for (const auto& c : j)
    if (!c.is_number()) throw ConfigError("Bloch vector components must be numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

/// {"parties": [[[x,y,z],[x,y,z]], ...]}
inline json settings_to_json(const SettingsTable& s) {
  json parties = json::array();
  for (const auto& p : s.parties()) parties.push_back({bloch_to_json(p[0]), bloch_to_json(p[1])});
  return {{"parties", parties}};
}

inline SettingsTable settings_from_json(const json& j) {
  if (!j.is_object() || !j.contains("parties") || !j["parties"].is_array())
    throw ConfigError("settings must be an object with a 'parties' array");
  std::vector<SettingsTable::PartySettings> parties;
  for (const auto& p : j["parties"]) {
    if (!p.is_array() || p.size() != 2)
      throw ConfigError("each party must list exactly two Bloch vectors");
    parties.push_back({bloch_from_json(p[0]), bloch_from_json(p[1])});
  }
  return SettingsTable(std::move(parties));
}

// --- sign patterns ----------------------------------------------------------

/// {"n": 3, "coeffs": [1,1,1,-1,1,-1,-1,-1]}
inline json pattern_to_json(const SignPattern& p) {
  return {{"n", p.n_parties()}, {"coeffs", p.coeffs()}};
}

inline SignPattern pattern_from_json(const json& j) {
  return SignPattern(detail::get_field<std::size_t>(j, "n"),
                     detail::get_field<std::vector<int>>(j, "coeffs"));
}

// --- matrices ----------------------------------------------------------------

/// Rows of [re, im] pairs.
inline json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a non-empty array of rows");
  const std::size_t n = j.size();
  std::vector<cplx> d;
  d.reserve(n * n);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != n) throw ConfigError("matrix must be square");
    for (const auto& z : row) {
      if (z.is_number())
        d.emplace_back(z.get<double>(), 0.0);
      else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number())
        d.emplace_back(z[0].get<double>(), z[1].get<double>());
      else
        throw ConfigError("matrix entries must be numbers or [re, im] pairs");
    }
  }
  return ComplexMatrix(n, std::move(d));
}

// --- optimizer -----------------------------------------------------------------

inline json optimizer_config_to_json(const OptimizationConfig& c) {
  return {{"restarts", c.restarts}, {"max_iters", c.max_iters}, {"step_init", c.step_init},
          {"step_min", c.step_min}, {"seed", c.seed}};
}

/// Missing fields keep their defaults.
inline OptimizationConfig optimizer_config_from_json(const json& j, OptimizationConfig c = {}) {
  if (!j.is_object()) throw ConfigError("optimizer config must be an object");
  try {
    if (j.contains("restarts")) c.restarts = j["restarts"].get<int>();
    if (j.contains("max_iters")) c.max_iters = j["max_iters"].get<int>();
    if (j.contains("step_init")) c.step_init = j["step_init"].get<double>();
    if (j.contains("step_min")) c.step_min = j["step_min"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("optimizer config: ") + e.what());
  }
  c.validate();
  return c;
}

inline json optimization_result_to_json(const OptimizationResult& r) {
  json history = json::array();
  for (const auto& [it, v] : r.history) history.push_back({it, v});
  return {{"best_value", r.best_value}, {"settings", settings_to_json(r.settings)},
          {"iterations", r.iterations}, {"converged", r.converged},
          {"history", history},         {"restart", r.restart}};
}

// --- classical bounds ------------------------------------------------------------

inline json strategy_to_json(const Strategy& s) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DeterministicStrategy>) {
          json outcomes = json::array();
          for (const auto& o : v.outcomes) outcomes.push_back({o[0], o[1]});
          return {{"kind", "deterministic"}, {"outcomes", outcomes}};
        } else if constexpr (std::is_same_v<T, HybridStrategy>) {
          return {{"kind", "hybrid"},
                  {"group_a", v.grouping.group_a()},
                  {"group_b", v.grouping.group_b()},
                  {"response_a", v.response_a},
                  {"response_b", v.response_b}};
        } else {
          return {{"kind", "noncontextual"}, {"a", v.a}, {"b", v.b}, {"c", v.c}, {"d", v.d}};
        }
      },
      s);
}

/// {"bound": 4, "strategy": {...}, "evaluations": 64}
inline json bound_result_to_json(const BoundResult& b) {
  return {{"bound", b.bound},
          {"strategy", strategy_to_json(b.argmax_strategy)},
          {"evaluations", b.evaluations}};
}

// --- witness ----------------------------------------------------------------------

inline json witness_report_to_json(const WitnessReport& r) {
  json residuals = json::object();
  for (const auto& [name, v] : r.identity_residuals) residuals[name] = v;
  return {{"n_parties", r.n_parties},   {"value", r.value},
          {"bound_term", r.bound_term}, {"svet_value", r.svet_value},
          {"negative", r.negative},     {"identity_residuals", residuals}};
}

}  // namespace qwitness
