#pragma once

// Command layer behind the qwitness executable. Every command turns a RunConfig
// into a JSON report plus an exit code:
//
//   0  all checks passed        3  invalid configuration
//   2  a check failed           4  enumeration cap exceeded

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "qwitness/classical.hpp"
#include "qwitness/error.hpp"
#include "qwitness/ineq.hpp"
#include "qwitness/json_io.hpp"
#include "qwitness/optimize.hpp"
#include "qwitness/qobs.hpp"
#include "qwitness/rng.hpp"
#include "qwitness/witness.hpp"

namespace qwitness::app {

inline constexpr const char* kArtifactVersion = "1.0.0";

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 2,
  kInvalidConfig = 3,
  kCapExceeded = 4,
};

inline const std::set<std::string>& commands() {
  static const std::set<std::string> c{"verify", "bounds", "optimize", "witness", "contextuality"};
  return c;
}

struct StateSpec {
  std::string tag = "ghz";  // ghz | mixed | product | noisy-ghz
  double visibility = 1.0;  // noisy-ghz only

  static StateSpec parse(const std::string& text) {
    if (text == "ghz" || text == "mixed" || text == "product") return {text, 1.0};
    const std::string prefix = "noisy-ghz:";
    if (text.rfind(prefix, 0) == 0) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text.substr(prefix.size()), &used);
      } catch (...) {
        throw ConfigError("state '" + text + "': visibility is not a number");
      }
      if (used != text.size() - prefix.size() || !(v >= 0.0 && v <= 1.0))
        throw ConfigError("state '" + text + "': visibility must be a number in [0, 1]");
      return {"noisy-ghz", v};
    }
    throw ConfigError("unknown state '" + text + "' (expected ghz, mixed, product, noisy-ghz:v)");
  }

  std::string str() const {
    if (tag != "noisy-ghz") return tag;
    return tag + ":" + json(visibility).dump();
  }
};

struct RunConfig {
  std::string command;
  std::optional<std::size_t> n_parties;
  std::optional<SettingsTable> settings;
  std::optional<StateSpec> state;
  std::optional<OptimizationConfig> optimizer;
  bool optimize = false;
  int random_trials = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_path;
  std::optional<SignPattern> pattern;
  std::optional<std::vector<BlochVector>> product;  // Bloch vectors for the product state
  std::optional<json> observables;                  // {"A": matrix, "B": ..., "C": ..., "D": ...}
  std::string fault;                                // test hook; "sign" corrupts the pattern
};

/// Canonical serialization; also the input of the report digest.
inline json config_to_json(const RunConfig& c) {
  json j{{"command", c.command}};
  if (c.n_parties) j["n_parties"] = *c.n_parties;
  if (c.settings) j["settings"] = settings_to_json(*c.settings);
  if (c.state) j["state"] = c.state->str();
  if (c.optimizer) j["optimizer"] = optimizer_config_to_json(*c.optimizer);
  if (c.optimize) j["optimize"] = true;
  if (c.random_trials > 0) j["random"] = c.random_trials;
  if (c.seed) j["seed"] = *c.seed;
  if (c.output_path) j["out"] = *c.output_path;
  if (c.pattern) j["pattern"] = pattern_to_json(*c.pattern);
  if (c.product) {
    json p = json::array();
    for (const auto& b : *c.product) p.push_back(bloch_to_json(b));
    j["product"] = p;
  }
  if (c.observables) j["observables"] = *c.observables;
  if (!c.fault.empty()) j["fault"] = c.fault;
  return j;
}

inline RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"command",  "n_parties", "settings", "state",
                                           "optimizer", "optimize", "random",   "seed",
                                           "out",       "pattern",  "product",  "observables",
                                           "fault"};
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw ConfigError("unknown config field '" + key + "'");
  RunConfig c;
  try {
    if (j.contains("command")) c.command = j["command"].get<std::string>();
    if (j.contains("n_parties")) c.n_parties = j["n_parties"].get<std::size_t>();
    if (j.contains("settings")) c.settings = settings_from_json(j["settings"]);
    if (j.contains("state")) c.state = StateSpec::parse(j["state"].get<std::string>());
    if (j.contains("optimizer")) c.optimizer = optimizer_config_from_json(j["optimizer"]);
    if (j.contains("optimize")) c.optimize = j["optimize"].get<bool>();
    if (j.contains("random")) c.random_trials = j["random"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) c.output_path = j["out"].get<std::string>();
    if (j.contains("pattern")) c.pattern = pattern_from_json(j["pattern"]);
    if (j.contains("product")) {
      std::vector<BlochVector> p;
      for (const auto& b : j["product"]) p.push_back(bloch_from_json(b));
      c.product = std::move(p);
    }
    if (j.contains("observables")) c.observables = j["observables"];
    if (j.contains("fault")) c.fault = j["fault"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

/// 64-bit FNV-1a of the canonical config, as 16 hex digits.
inline std::string inputs_digest(const RunConfig& c) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : config_to_json(c).dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct RunReport {
  json document;
  int exit_code = kOk;
};

namespace detail {

struct Outcome {
  json results;
  int exit_code = kOk;
};

inline std::size_t resolve_parties(const RunConfig& c, std::size_t fallback) {
  std::size_t n = c.n_parties.value_or(c.settings ? c.settings->n_parties() : fallback);
  if (c.settings && c.settings->n_parties() != n)
    throw ConfigError("settings list " + std::to_string(c.settings->n_parties()) +
                      " parties but n_parties is " + std::to_string(n));
  if (c.pattern && c.pattern->n_parties() != n)
    throw ConfigError("pattern has " + std::to_string(c.pattern->n_parties()) +
                      " parties but n_parties is " + std::to_string(n));
  if (n < 2 || n > kMaxParties)
    throw ConfigError("n_parties must lie in [2, " + std::to_string(kMaxParties) + "]");
  return n;
}

inline OptimizationConfig optimizer_for(const RunConfig& c) {
  OptimizationConfig o = c.optimizer.value_or(OptimizationConfig{});
  if (c.seed) o.seed = *c.seed;
  return o;
}

inline SettingsTable random_settings(std::size_t n, std::uint64_t seed, std::uint64_t trial) {
  Lcg64 rng = Lcg64::stream(seed, trial);
  std::vector<SettingsTable::PartySettings> parties(n);
  for (auto& p : parties) p = {rng.bloch(), rng.bloch()};
  return SettingsTable(std::move(parties));
}

inline DensityMatrix make_state(const RunConfig& c, std::size_t n) {
  const StateSpec s = c.state.value_or(StateSpec{});
  if (s.tag == "ghz") return ghz_state(n);
  if (s.tag == "mixed") return maximally_mixed(n);
  if (s.tag == "noisy-ghz") return noisy_mixture(ghz_state(n), s.visibility);
  std::vector<BlochVector> blochs = c.product.value_or(std::vector<BlochVector>(n, {0, 0, 1}));
  if (blochs.size() != n) throw ConfigError("product state needs one Bloch vector per party");
  return product_state(blochs);
}

inline json residual_object(const std::map<std::string, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

inline Outcome cmd_verify(const RunConfig& c) {
  const std::size_t n = resolve_parties(c, 3);
  const std::size_t dim = std::size_t{1} << n;
  SignPattern pattern = c.pattern.value_or(SignPattern::svetlichny(n));
  if (c.fault == "sign") {
    auto coeffs = pattern.coeffs();
    coeffs.back() = -coeffs.back();
    pattern = SignPattern(n, std::move(coeffs));
  } else if (!c.fault.empty()) {
    throw ConfigError("unknown fault hook '" + c.fault + "'");
  }

  std::vector<SettingsTable> trials;
  if (c.settings) {
    trials.push_back(*c.settings);
  } else if (c.random_trials > 0) {
    for (int t = 0; t < c.random_trials; ++t)
      trials.push_back(random_settings(n, c.seed.value_or(1), static_cast<std::uint64_t>(t)));
  } else {
    throw ConfigError("verify needs settings or --random k");
  }

  const double element_limit = kElementResidualScale * static_cast<double>(dim);
  std::map<std::string, double> worst, limits;
  std::set<std::string> failures;
  auto record = [&](const std::string& name, double r, double limit) {
    worst[name] = std::max(worst.contains(name) ? worst[name] : 0.0, r);
    limits[name] = limit;
    if (!(r < limit)) failures.insert(name);
  };

  for (const auto& s : trials) {
    try {
      if (n == 2) {
        const auto e = make_chsh_element(s, pattern, 0);
        const auto wp = witness_pair(e);
        const ComplexMatrix chsh = pattern_operator(s, pattern);
        const ComplexMatrix id = ComplexMatrix::identity(4);
        const ComplexMatrix E = 2.0 * id - chsh;
        const auto a = [&](int b) { return bloch_observable(s.setting(0, b)).matrix(); };
        const auto bb = [&](int b) { return bloch_observable(s.setting(1, b)).matrix(); };
        const ComplexMatrix comm =
            kron(commutator(a(0), a(1)), ComplexMatrix::identity(2)) +
            kron(ComplexMatrix::identity(2), commutator(bb(0), bb(1)));
        record("chsh_4e", frob_distance(anticommutator(wp.x, wp.y), 4.0 * E), 1e-12);
        record("chsh_xy", frob_distance(wp.x * wp.y, 2.0 * E + comm), 1e-12);
        record("chsh_yx", frob_distance(wp.y * wp.x, 2.0 * E - comm), 1e-12);
      } else {
        const auto tw = assemble_total_witness(s, pattern);
        for (const auto& [name, r] : tw.residuals)
          record(name, r, name == "reconstruction" ? 1e-12 : element_limit);
      }
    } catch (const IdentityError& e) {
      failures.insert(e.identity());
    }
  }

  json fails = json::array();
  for (const auto& f : failures) fails.push_back(f);
  return {{{"n_parties", n},
           {"trials", trials.size()},
           {"residuals", residual_object(worst)},
           {"thresholds", residual_object(limits)},
           {"failures", fails},
           {"passed", failures.empty()}},
          failures.empty() ? kOk : kCheckFailed};
}

/// The CLI runs the hybrid enumeration up to this size; hybrid_bound itself
/// accepts one more party.
inline constexpr std::size_t kCliHybridParties = 4;

inline Outcome cmd_bounds(const RunConfig& c) {
  const std::size_t n = c.n_parties.value_or(c.pattern ? c.pattern->n_parties() : 3);
  if (n > kMaxLhvParties)
    throw CapExceededError("bounds: " + std::to_string(n) + " parties exceeds the " +
                           std::to_string(kMaxLhvParties) + "-party local enumeration cap");
  RunConfig rc = c;
  rc.n_parties = n;
  resolve_parties(rc, n);
  const SignPattern pattern = c.pattern.value_or(SignPattern::svetlichny(n));

  json out{{"n_parties", n}, {"pattern", pattern_to_json(pattern)}};
  json details = json::object();
  json notices = json::array();
  const auto lhv = lhv_bound(pattern);
  out["lhv"] = lhv.bound;
  details["lhv"] = bound_result_to_json(lhv);
  if (n >= 3 && n <= kCliHybridParties) {
    const auto hyb = hybrid_bound(pattern);
    out["hybrid"] = hyb.bound;
    details["hybrid"] = bound_result_to_json(hyb);
  } else if (n < 3) {
    notices.push_back("hybrid bound skipped: two parties admit only the trivial bipartition");
  } else {
    notices.push_back("hybrid bound skipped: " + std::to_string(n) + " parties exceeds the " +
                      std::to_string(kCliHybridParties) + "-party cap");
  }
  const auto nc = noncontextual_bound();
  out["noncontextual"] = nc.bound;
  details["noncontextual"] = bound_result_to_json(nc);
  out["details"] = details;
  out["notices"] = notices;
  return {out, kOk};
}

inline Outcome cmd_optimize(const RunConfig& c) {
  const std::size_t n = resolve_parties(c, 3);
  const auto cfg = optimizer_for(c);
  const SignPattern pattern = c.pattern.value_or(SignPattern::svetlichny(n));
  const auto res = c.pattern ? maximize_pattern(pattern, cfg)
                             : maximize_violation(n, n == 2 ? InequalityKind::kChsh
                                                            : InequalityKind::kSvetlichny,
                                                  cfg);
  json out = optimization_result_to_json(res);
  out["n_parties"] = n;
  out["inequality"] = c.pattern ? "pattern" : (n == 2 ? "chsh" : "svetlichny");
  out["classical_bound"] = std::size_t{1} << (n - 1);
  out["optimizer"] = optimizer_config_to_json(cfg);
  return {out, kOk};
}

inline Outcome cmd_witness(const RunConfig& c) {
  const std::size_t n = resolve_parties(c, 3);
  if (!c.state) throw ConfigError("witness needs --state");
  if (!c.settings && !c.optimize) throw ConfigError("witness needs settings or --optimize");
  const auto rho = make_state(c, n);
  json out = json::object();
  std::optional<SettingsTable> settings = c.settings;
  if (!settings) {
    const auto cfg = optimizer_for(c);
    const auto res = maximize_expectation(SignPattern::svetlichny(n), rho, cfg);
    settings = res.settings;
    out["optimization"] = {{"best_value", res.best_value},
                           {"iterations", res.iterations},
                           {"converged", res.converged},
                           {"restart", res.restart},
                           {"optimizer", optimizer_config_to_json(cfg)}};
  }
  try {
    out["report"] = witness_report_to_json(evaluate_witness(*settings, rho));
  } catch (const IdentityError& e) {
    out["failure"] = e.what();
    out["settings"] = settings_to_json(*settings);
    return {out, kCheckFailed};
  }
  out["settings"] = settings_to_json(*settings);
  out["state"] = c.state->str();
  return {out, kOk};
}

inline Outcome cmd_contextuality(const RunConfig& c) {
  std::optional<CycleObservables> obs;
  std::string source = "canonical";
  if (c.observables) {
    const auto& j = *c.observables;
    auto get = [&](const char* k) {
      if (!j.is_object() || !j.contains(k))
        throw ConfigError(std::string("observables: missing '") + k + "'");
      return DichotomicObservable(matrix_from_json(j[k]));
    };
    obs.emplace(CycleObservables{get("A"), get("B"), get("C"), get("D")});
    source = "custom";
  } else if (c.settings) {
    obs.emplace(cycle_from_settings(*c.settings));
    source = "settings";
  } else {
    obs.emplace(canonical_cycle());
  }
  for (const auto* m : {&obs->a, &obs->b, &obs->c, &obs->d})
    if (m->dim() != 4) throw ConfigError("contextuality: observables must be 4x4");

  json out{{"observables", source}, {"noncontextual_bound", noncontextual_bound().bound}};
  const std::map<std::string, double> compat{
      {"[A,B]", commutator(obs->a.matrix(), obs->b.matrix()).frobenius_norm()},
      {"[B,C]", commutator(obs->b.matrix(), obs->c.matrix()).frobenius_norm()},
      {"[C,D]", commutator(obs->c.matrix(), obs->d.matrix()).frobenius_norm()},
      {"[D,A]", commutator(obs->d.matrix(), obs->a.matrix()).frobenius_norm()}};
  out["compatibility"] = residual_object(compat);
  json fails = json::array();
  for (const auto& [k, v] : compat)
    if (!(v <= 1e-10)) fails.push_back("compatibility " + k);
  if (!fails.empty()) {
    out["failures"] = fails;
    out["passed"] = false;
    return {out, kCheckFailed};
  }

  const auto cyc = noncontextual_cycle(*obs);
  const auto& A = obs->a.matrix();
  const auto& B = obs->b.matrix();
  const auto& C = obs->c.matrix();
  const auto& D = obs->d.matrix();
  const ComplexMatrix comm = commutator(B, D) + commutator(C, A);
  const std::map<std::string, double> residuals{
      {"xy_identity", frob_distance(cyc.x * cyc.y, 2.0 * cyc.ec.matrix + comm)},
      {"yx_identity", frob_distance(cyc.y * cyc.x, 2.0 * cyc.ec.matrix - comm)},
      {"qc_4ec", frob_distance(anticommutator(cyc.x, cyc.y), 4.0 * cyc.ec.matrix)}};
  out["residuals"] = residual_object(residuals);
  for (const auto& [k, v] : residuals)
    if (!(v < 1e-12)) fails.push_back(k);
  const double x_min = min_eigenvalue(cyc.x), y_min = min_eigenvalue(cyc.y);
  out["x_min_eigenvalue"] = x_min;
  out["y_min_eigenvalue"] = y_min;
  if (x_min < -kWitnessPsdTolerance) fails.push_back("x_psd");
  if (y_min < -kWitnessPsdTolerance) fails.push_back("y_psd");

  if (c.state) {
    const auto rho = make_state(c, 2);
    const double ec = expectation(cyc.ec.matrix, rho);
    out["state"] = c.state->str();
    out["ec_expectation"] = ec;
    out["qc_expectation"] = 4.0 * ec;
    out["ec_negative"] = ec < -kNegativityThreshold;
  }
  out["failures"] = fails;
  out["passed"] = fails.empty();
  return {out, fails.empty() ? kOk : kCheckFailed};
}

}  // namespace detail

inline RunReport run(const RunConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  json doc{{"command", c.command}, {"artifact_version", kArtifactVersion}};
  int code = kOk;
  try {
    doc["inputs_digest"] = inputs_digest(c);
    detail::Outcome o;
    if (c.command == "verify")
      o = detail::cmd_verify(c);
    else if (c.command == "bounds")
      o = detail::cmd_bounds(c);
    else if (c.command == "optimize")
      o = detail::cmd_optimize(c);
    else if (c.command == "witness")
      o = detail::cmd_witness(c);
    else if (c.command == "contextuality")
      o = detail::cmd_contextuality(c);
    else
      throw ConfigError("unknown command '" + c.command + "'");
    doc["results"] = std::move(o.results);
    code = o.exit_code;
  } catch (const CapExceededError& e) {
    doc["error"] = e.what();
    code = kCapExceeded;
  } catch (const IdentityError& e) {
    doc["error"] = e.what();
    code = kCheckFailed;
  } catch (const Error& e) {
    doc["error"] = e.what();
    code = kInvalidConfig;
  }
  doc["exit_code"] = code;
  doc["wall_time_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
  return {std::move(doc), code};
}

/// Serialized report: two-space indent, sorted keys, trailing newline.
inline std::string render(const json& document) { return document.dump(2) + "\n"; }

}  // namespace qwitness::app
