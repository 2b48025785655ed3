#pragma once

// Measurement-setting optimization. Every Bloch vector is parametrized by two
// spherical angles; a restart is a coordinate ascent that sweeps the 4N angles
// in order and runs a golden-section line search on each one inside an
// adaptive window. Restarts start from seeded uniform draws on the sphere and
// the best restart wins (ties go to the lower restart index).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qwitness/error.hpp"
#include "qwitness/ineq.hpp"
#include "qwitness/opalg.hpp"
#include "qwitness/parallel.hpp"
#include "qwitness/qobs.hpp"
#include "qwitness/rng.hpp"

namespace qwitness {

enum class InequalityKind { kChsh, kSvetlichny };

struct OptimizationConfig {
  int restarts = 20;
  int max_iters = 500;  // sweeps per restart
  double step_init = 0.3;
  double step_min = 1e-7;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: QWITNESS_THREADS or hardware concurrency

  void validate() const {
    if (restarts <= 0 || max_iters <= 0)
      throw DomainError("optimizer: restarts and max_iters must be positive");
    if (!(step_min > 0.0) || !(step_init > step_min))
      throw DomainError("optimizer: need 0 < step_min < step_init");
  }
};

struct OptimizationResult {
  double best_value = 0.0;
  SettingsTable settings;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<int, double>> history;  // (sweep, value) of the winning restart
  int restart = 0;
};

inline constexpr double kSweepTolerance = 1e-10;

/// Largest eigenvalue: the maximal quantum value of the inequality over all states.
inline double max_eigenvalue(const InequalityOperator& op) { return max_eigenvalue(op.matrix); }

/// Angles are laid out per party as (theta_0, phi_0, theta_1, phi_1).
inline SettingsTable settings_from_angles(std::span<const double> angles) {
  if (angles.size() % 4 != 0) throw DimensionError("settings_from_angles: need 4 angles per party");
  std::vector<SettingsTable::PartySettings> parties(angles.size() / 4);
  for (std::size_t p = 0; p < parties.size(); ++p)
    for (std::size_t s = 0; s < 2; ++s)
      parties[p][s] = BlochVector::from_angles(angles[4 * p + 2 * s], angles[4 * p + 2 * s + 1]);
  return SettingsTable(std::move(parties));
}

namespace detail {

struct LineResult {
  double x;
  double value;
};

/// Golden-section search for a maximum of f on [lo, hi]; returns the best
/// point evaluated.
template <typename F>
LineResult golden_max(F&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c), fd = f(d);
  LineResult best = fc >= fd ? LineResult{c, fc} : LineResult{d, fd};
  while (hi - lo > tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
      if (fc > best.value) best = {c, fc};
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
      if (fd > best.value) best = {d, fd};
    }
  }
  return best;
}

struct RestartOutcome {
  double value = 0.0;
  std::vector<double> angles;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<int, double>> history;
};

template <typename Objective>
RestartOutcome ascend(std::size_t n_parties, const Objective& objective,
                      const OptimizationConfig& cfg, int restart) {
  Lcg64 rng = Lcg64::stream(cfg.seed, static_cast<std::uint64_t>(restart));
  RestartOutcome out;
  out.angles.resize(4 * n_parties);
  for (std::size_t k = 0; k < out.angles.size(); k += 2) {
    const auto [theta, phi] = rng.sphere_angles();
    out.angles[k] = theta;
    out.angles[k + 1] = phi;
  }
  auto eval = [&](const std::vector<double>& a) { return objective(settings_from_angles(a)); };
  out.value = eval(out.angles);
  out.history.emplace_back(0, out.value);

  std::vector<double> steps(out.angles.size(), cfg.step_init);
  std::vector<double> trial = out.angles;
  for (int sweep = 1; sweep <= cfg.max_iters; ++sweep) {
    const double start = out.value;
    for (std::size_t k = 0; k < out.angles.size(); ++k) {
      const double h = steps[k];
      const double centre = out.angles[k];
      trial = out.angles;
      auto line = [&](double t) {
        trial[k] = t;
        return eval(trial);
      };
      const auto best = golden_max(line, centre - h, centre + h, std::max(cfg.step_min, 1e-4 * h));
      double moved = 0.0;
      if (best.value > out.value) {
        moved = std::abs(best.x - centre);
        out.angles[k] = best.x;
        out.value = best.value;
      }
      steps[k] = moved > 0.75 * h ? std::min(2.0 * h, std::numbers::pi)
                                  : std::max(cfg.step_min, 0.5 * h);
    }
    out.history.emplace_back(sweep, out.value);
    out.iterations = sweep;
    if (out.value - start < kSweepTolerance) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace detail

/// Maximizes objective(settings) over all qubit settings of `n_parties`.
template <typename Objective>
OptimizationResult maximize(std::size_t n_parties, const Objective& objective,
                            const OptimizationConfig& cfg) {
  cfg.validate();
  if (n_parties < 2) throw DomainError("maximize: needs at least two parties");
  std::vector<detail::RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  const unsigned workers =
      std::min<unsigned>(resolve_workers(cfg.workers), static_cast<unsigned>(cfg.restarts));
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](unsigned w) {
    try {
      for (int r = static_cast<int>(w); r < cfg.restarts; r += static_cast<int>(workers))
        outcomes[static_cast<std::size_t>(r)] = detail::ascend(n_parties, objective, cfg, r);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r].value > outcomes[best].value) best = r;
  auto& win = outcomes[best];
  OptimizationResult res{win.value,        settings_from_angles(win.angles), win.iterations,
                         win.converged,    std::move(win.history),           static_cast<int>(best)};
  const double check = objective(res.settings);
  if (std::abs(check - res.best_value) > 1e-9)
    throw IdentityError("optimizer_recheck", std::abs(check - res.best_value), 1e-9);
  return res;
}

/// Maximal eigenvalue of the pattern's operator over all settings.
inline OptimizationResult maximize_pattern(const SignPattern& pattern,
                                           const OptimizationConfig& cfg) {
  return maximize(
      pattern.n_parties(),
      [&](const SettingsTable& s) { return max_eigenvalue(pattern_operator(s, pattern)); }, cfg);
}

inline OptimizationResult maximize_violation(std::size_t n_parties, InequalityKind kind,
                                             const OptimizationConfig& cfg) {
  if (kind == InequalityKind::kChsh && n_parties != 2)
    throw DomainError("maximize_violation: CHSH needs exactly two parties");
  if (n_parties < 2 || n_parties > kMaxParties)
    throw DomainError("maximize_violation: party count out of range");
  return maximize_pattern(SignPattern::svetlichny(n_parties), cfg);
}

/// Maximal expectation of the pattern's operator on a fixed state.
inline OptimizationResult maximize_expectation(const SignPattern& pattern, const DensityMatrix& rho,
                                               const OptimizationConfig& cfg) {
  if (rho.dim() != (std::size_t{1} << pattern.n_parties()))
    throw DimensionError("maximize_expectation: state dimension does not match pattern");
  return maximize(
      pattern.n_parties(),
      [&](const SettingsTable& s) { return expectation(pattern_operator(s, pattern), rho); }, cfg);
}

inline constexpr double kVisibilityTolerance = 1e-6;

/// Visibility v* at which the optimized Svetlichny value of v GHZ + (1 - v) I/d
/// crosses 2^(N-1), located by bisection on [0, 1].
inline double violation_threshold(std::size_t n_parties, const OptimizationConfig& cfg) {
  if (n_parties < 3) throw DomainError("violation_threshold: needs at least three parties");
  const auto ghz = ghz_state(n_parties);
  const auto pattern = SignPattern::svetlichny(n_parties);
  const double bound = static_cast<double>(std::size_t{1} << (n_parties - 1));
  auto violates = [&](double v) {
    return maximize_expectation(pattern, noisy_mixture(ghz, v), cfg).best_value > bound;
  };
  if (!violates(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > kVisibilityTolerance) {
    const double mid = 0.5 * (lo + hi);
    (violates(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qwitness
