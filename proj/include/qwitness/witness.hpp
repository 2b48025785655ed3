#pragma once

// Quantumness witnesses Q = {X, Y} built from CHSH-type elements, and the
// operator identities tying them to the inequality operators:
//
//   Q_xi  = {X_xi, Y_xi} = 4 (2 - I_xi)
//   Q_tot = sum_xi Q_xi  = 4 (2^(N-1) - I_Svet)

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qwitness/error.hpp"
#include "qwitness/ineq.hpp"
#include "qwitness/opalg.hpp"
#include "qwitness/qobs.hpp"

namespace qwitness {

inline constexpr double kWitnessPsdTolerance = 1e-9;
inline constexpr double kElementResidualScale = 1e-11;  // times dim
inline constexpr double kNegativityThreshold = 2.5e-10;

/// X = 2 - s1 (Q~00 - Q~11), Y = 2 - s2 (Q~01 + Q~10).
struct WitnessPair {
  ComplexMatrix x;
  ComplexMatrix y;
  std::pair<int, int> sign_variant{1, 1};
};

inline WitnessPair witness_pair(const ChshElement& e, std::pair<int, int> variant) {
  const auto& q = e.terms;
  const ComplexMatrix two = 2.0 * ComplexMatrix::identity(e.dim());
  WitnessPair w{two - static_cast<double>(variant.first) * (q[0] - q[3]),
                two - static_cast<double>(variant.second) * (q[1] + q[2]), variant};
  if (!is_psd(w.x, kWitnessPsdTolerance))
    throw IdentityError("witness_x_psd", -min_eigenvalue(w.x), kWitnessPsdTolerance);
  if (!is_psd(w.y, kWitnessPsdTolerance))
    throw IdentityError("witness_y_psd", -min_eigenvalue(w.y), kWitnessPsdTolerance);
  return w;
}

/// The sign variant is read off the element: s1 = c00 and s2 = c01. Both CHSH
/// forms have c11 = -c00 and c10 = c01, which is what makes the cross terms of
/// {X, Y} cancel.
inline WitnessPair witness_pair(const ChshElement& e) {
  if (!classify_chsh_signs(e.signs))
    throw IdentityError("chsh_type_element_" + std::to_string(e.xi + 1), 1.0, 0.0);
  return witness_pair(e, {e.signs[0], e.signs[1]});
}

inline std::string element_identity_name(const ChshElement& e) {
  return "element_ξ" + std::to_string(e.xi + 1);
}

struct CheckedWitness {
  ComplexMatrix q;
  double residual = 0.0;
};

/// {X, Y} together with ||{X, Y} - 4 (2 - I_xi)||_F. Does not throw on a
/// large residual; callers decide.
inline CheckedWitness element_witness_checked(const ChshElement& e) {
  const auto pair = witness_pair(e);
  ComplexMatrix q = anticommutator(pair.x, pair.y);
  const ComplexMatrix expected =
      4.0 * (2.0 * ComplexMatrix::identity(e.dim()) - e.matrix());
  const double r = frob_distance(q, expected);
  return {std::move(q), r};
}

inline ComplexMatrix element_witness(const ChshElement& e) {
  auto checked = element_witness_checked(e);
  const double limit = kElementResidualScale * static_cast<double>(e.dim());
  if (checked.residual >= limit)
    throw IdentityError(element_identity_name(e), checked.residual, limit);
  return std::move(checked.q);
}

struct TotalWitness {
  ComplexMatrix q_tot;
  ComplexMatrix svetlichny;
  std::vector<std::pair<std::string, double>> residuals;  // elements, then "reconstruction", "total"
};

/// Assembles Q_tot from the elements of `pattern` and reports every residual
/// without throwing on thresholds.
inline TotalWitness assemble_total_witness(const SettingsTable& settings,
                                           const SignPattern& pattern) {
  const std::size_t n = settings.n_parties();
  if (n < 3) throw DomainError("total_witness: needs at least three parties");
  const auto elements = decompose_pattern(settings, pattern);
  const std::size_t dim = std::size_t{1} << n;

  TotalWitness out{ComplexMatrix(dim), pattern_operator(settings, pattern), {}};
  MatrixAccumulator acc(dim);
  for (const auto& e : elements) {
    auto checked = element_witness_checked(e);
    out.residuals.emplace_back(element_identity_name(e), checked.residual);
    acc.add(checked.q);
  }
  out.q_tot = acc.result();
  out.residuals.emplace_back("reconstruction", frob_distance(sum_elements(elements), out.svetlichny));
  const double bound = static_cast<double>(std::size_t{1} << (n - 1));
  const ComplexMatrix expected =
      4.0 * (bound * ComplexMatrix::identity(dim) - out.svetlichny);
  out.residuals.emplace_back("total", frob_distance(out.q_tot, expected));
  return out;
}

inline ComplexMatrix total_witness(const SettingsTable& settings) {
  auto tw = assemble_total_witness(settings, SignPattern::svetlichny(settings.n_parties()));
  const double limit = kElementResidualScale * static_cast<double>(tw.q_tot.dim());
  for (const auto& [name, r] : tw.residuals)
    if (r >= limit) throw IdentityError(name, r, limit);
  return std::move(tw.q_tot);
}

struct WitnessReport {
  std::size_t n_parties = 0;
  double value = 0.0;       // <Q_tot>
  double bound_term = 0.0;  // 4 * 2^(N-1)
  double svet_value = 0.0;  // <I_Svet> (<CHSH> for two parties)
  bool negative = false;
  std::vector<std::pair<std::string, double>> identity_residuals;
};

/// Evaluates the witness on rho. Two parties use the CHSH witness {X, Y} = 4E
/// (residual "chsh_4e"); three or more use Q_tot.
inline WitnessReport evaluate_witness(const SettingsTable& settings, const DensityMatrix& rho) {
  const std::size_t n = settings.n_parties();
  const std::size_t dim = std::size_t{1} << n;
  if (rho.dim() != dim)
    throw DimensionError("evaluate_witness: state dimension " + std::to_string(rho.dim()) +
                         " does not match " + std::to_string(n) + " parties");
  const double bound = static_cast<double>(std::size_t{1} << (n - 1));
  const double limit = kElementResidualScale * static_cast<double>(dim);

  WitnessReport rep;
  rep.n_parties = n;
  rep.bound_term = 4.0 * bound;
  ComplexMatrix q(dim);
  if (n == 2) {
    const auto e = make_chsh_element(settings, SignPattern::svetlichny(2), 0);
    const auto pair = witness_pair(e);
    q = anticommutator(pair.x, pair.y);
    const auto chsh = chsh_operator(settings);
    const double r =
        frob_distance(q, 4.0 * (2.0 * ComplexMatrix::identity(dim) - chsh.matrix));
    rep.identity_residuals.emplace_back("chsh_4e", r);
    rep.svet_value = expectation(chsh.matrix, rho);
  } else {
    auto tw = assemble_total_witness(settings, SignPattern::svetlichny(n));
    q = std::move(tw.q_tot);
    rep.identity_residuals = std::move(tw.residuals);
    rep.svet_value = expectation(tw.svetlichny, rho);
  }
  for (const auto& [name, r] : rep.identity_residuals)
    if (r >= limit) throw IdentityError(name, r, limit);

  rep.value = expectation(q, rho);
  const double via_inequality = 4.0 * (bound - rep.svet_value);
  if (std::abs(rep.value - via_inequality) > 1e-9)
    throw IdentityError("value_cross_check", std::abs(rep.value - via_inequality), 1e-9);
  rep.negative = rep.svet_value - bound > kNegativityThreshold;
  return rep;
}

}  // namespace qwitness
