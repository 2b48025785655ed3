#pragma once

// Inequality operators: CHSH, the four-cycle noncontextuality expression, the
// N-qubit Svetlichny polynomial and its split into CHSH-type elements.
//
// Setting words are read with party 0 as the most significant bit, so the
// coefficient list of a pattern is indexed in binary counting order.

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qwitness/error.hpp"
#include "qwitness/opalg.hpp"
#include "qwitness/qobs.hpp"

namespace qwitness {

inline constexpr std::size_t kMaxParties = 10;

/// (-1)^floor(k/2), k = popcount(word).
inline int svetlichny_sign(std::uint64_t word) {
  return ((std::popcount(word) / 2) % 2 == 0) ? 1 : -1;
}

/// Full-correlation polynomial: a +-1 coefficient for every N-bit setting word.
class SignPattern {
 public:
  SignPattern(std::size_t n_parties, std::vector<int> coeffs)
      : n_(n_parties), coeffs_(std::move(coeffs)) {
    if (n_ < 1 || n_ > kMaxParties)
      throw DomainError("sign pattern: party count must lie in [1, " + std::to_string(kMaxParties) +
                        "]");
    if (coeffs_.size() != (std::size_t{1} << n_))
      throw DomainError("sign pattern: expected " + std::to_string(std::size_t{1} << n_) +
                        " coefficients, got " + std::to_string(coeffs_.size()));
    for (int c : coeffs_)
      if (c != 1 && c != -1) throw DomainError("sign pattern: coefficients must be +1 or -1");
  }

  static SignPattern svetlichny(std::size_t n_parties) {
    if (n_parties < 1 || n_parties > kMaxParties)
      throw DomainError("sign pattern: party count out of range");
    std::vector<int> c(std::size_t{1} << n_parties);
    for (std::size_t w = 0; w < c.size(); ++w) c[w] = svetlichny_sign(w);
    return SignPattern(n_parties, std::move(c));
  }

  std::size_t n_parties() const noexcept { return n_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  int coeff(std::size_t word) const { return coeffs_.at(word); }
  const std::vector<int>& coeffs() const noexcept { return coeffs_; }

  /// Setting bit of `party` inside `word`.
  int bit(std::size_t word, std::size_t party) const noexcept {
    return static_cast<int>((word >> (n_ - 1 - party)) & 1U);
  }

  /// The same polynomial after swapping the two settings of `party`.
  SignPattern relabeled(std::size_t party) const {
    if (party >= n_) throw DomainError("sign pattern: party index out of range");
    std::vector<int> c(coeffs_.size());
    const std::size_t mask = std::size_t{1} << (n_ - 1 - party);
    for (std::size_t w = 0; w < c.size(); ++w) c[w] = coeffs_[w ^ mask];
    return SignPattern(n_, std::move(c));
  }

  friend bool operator==(const SignPattern&, const SignPattern&) = default;

 private:
  std::size_t n_;
  std::vector<int> coeffs_;
};

struct InequalityOperator {
  ComplexMatrix matrix;
  double classical_bound = 0.0;
  std::string label;

  InequalityOperator(ComplexMatrix m, double bound, std::string name)
      : matrix(std::move(m)), classical_bound(bound), label(std::move(name)) {
    const double defect = hermiticity_defect(matrix);
    if (defect > 1e-11 * static_cast<double>(matrix.dim()))
      throw DomainError("inequality operator '" + label + "' is not Hermitian");
  }
};

/// sum_w coeff(w) * (A_0^{w_0} x ... x A_{N-1}^{w_{N-1}})
inline ComplexMatrix pattern_operator(const SettingsTable& settings, const SignPattern& pattern) {
  const std::size_t n = settings.n_parties();
  if (pattern.n_parties() != n)
    throw DimensionError("pattern has " + std::to_string(pattern.n_parties()) +
                         " parties, settings have " + std::to_string(n));
  std::vector<std::array<ComplexMatrix, 2>> local(n);
  for (std::size_t p = 0; p < n; ++p)
    for (int b = 0; b < 2; ++b) local[p][b] = bloch_observable(settings.setting(p, b)).matrix();

  MatrixAccumulator acc(std::size_t{1} << n);
  std::vector<ComplexMatrix> factors(n);
  for (std::size_t w = 0; w < pattern.size(); ++w) {
    for (std::size_t p = 0; p < n; ++p) factors[p] = local[p][pattern.bit(w, p)];
    acc.add(tensor_product(factors), pattern.coeff(w));
  }
  return acc.result();
}

/// A1 B1 + A1 B2 + A2 B1 - A2 B2 (setting 0 is A1/B1), classical bound 2.
inline InequalityOperator chsh_operator(const SettingsTable& settings) {
  if (settings.n_parties() != 2)
    throw DomainError("chsh_operator: needs exactly two parties, got " +
                      std::to_string(settings.n_parties()));
  return {pattern_operator(settings, SignPattern::svetlichny(2)), 2.0, "CHSH"};
}

/// Svetlichny operator, classical (hybrid) bound 2^(N-1).
inline InequalityOperator svetlichny_operator(const SettingsTable& settings) {
  const std::size_t n = settings.n_parties();
  if (n > kMaxParties) throw DomainError("svetlichny_operator: too many parties");
  return {pattern_operator(settings, SignPattern::svetlichny(n)),
          static_cast<double>(std::size_t{1} << (n - 1)), "Svetlichny"};
}

// ---------------------------------------------------------------------------
// Four-cycle noncontextuality
// ---------------------------------------------------------------------------

struct CycleObservables {
  DichotomicObservable a, b, c, d;
};

struct NoncontextualCycle {
  ComplexMatrix x;  // 2 - (BC - AD)
  ComplexMatrix y;  // 2 - (AB + CD)
  InequalityOperator ec;  // 2 - (AB + BC + CD - AD)
};

/// Largest compatibility defect ||[P,Q]||_F over the cycle pairs, with its name.
inline std::pair<std::string, double> worst_compatibility(const CycleObservables& o) {
  const std::array<std::pair<const char*, double>, 4> pairs{{
      {"[A,B]", commutator(o.a.matrix(), o.b.matrix()).frobenius_norm()},
      {"[B,C]", commutator(o.b.matrix(), o.c.matrix()).frobenius_norm()},
      {"[C,D]", commutator(o.c.matrix(), o.d.matrix()).frobenius_norm()},
      {"[D,A]", commutator(o.d.matrix(), o.a.matrix()).frobenius_norm()},
  }};
  std::pair<std::string, double> worst{pairs[0].first, pairs[0].second};
  for (const auto& [name, r] : pairs)
    if (r > worst.second) worst = {name, r};
  return worst;
}

inline NoncontextualCycle noncontextual_cycle(const CycleObservables& o) {
  for (const auto* m : {&o.a, &o.b, &o.c, &o.d})
    if (m->dim() != 4) throw DimensionError("noncontextual_cycle: observables must be 4x4");
  const auto [pair, defect] = worst_compatibility(o);
  if (defect > 1e-10)
    throw DomainError("noncontextual_cycle: incompatible pair " + pair + " (||commutator|| = " +
                      std::to_string(defect) + ")");

  const auto& A = o.a.matrix();
  const auto& B = o.b.matrix();
  const auto& C = o.c.matrix();
  const auto& D = o.d.matrix();
  const ComplexMatrix two = 2.0 * ComplexMatrix::identity(4);
  NoncontextualCycle out{two - (B * C - A * D), two - (A * B + C * D),
                         InequalityOperator(two - (A * B + B * C + C * D - A * D), 2.0, "E_c")};
  if (!is_psd(out.x, 1e-9)) throw IdentityError("cycle_x_psd", -min_eigenvalue(out.x), 1e-9);
  if (!is_psd(out.y, 1e-9)) throw IdentityError("cycle_y_psd", -min_eigenvalue(out.y), 1e-9);
  return out;
}

/// Four-cycle built from a two-party settings table:
/// B = A1 x I, D = A2 x I, C = I x B1, A = I x B2.
inline CycleObservables cycle_from_settings(const SettingsTable& settings) {
  if (settings.n_parties() != 2) throw DomainError("cycle_from_settings: needs two parties");
  auto local = [&](std::size_t p, int s) {
    return embed(bloch_observable(settings.setting(p, s)), p, 2);
  };
  return {local(1, 1), local(0, 0), local(1, 0), local(0, 1)};
}

/// A = I x sigma_x, B = sigma_z x I, C = I x sigma_z, D = sigma_x x I.
inline CycleObservables canonical_cycle() {
  const BlochVector z{0, 0, 1}, x{1, 0, 0};
  return cycle_from_settings(SettingsTable({{z, x}, {z, x}}));
}

// ---------------------------------------------------------------------------
// CHSH-type decomposition
// ---------------------------------------------------------------------------

enum class ChshForm {
  kStandard,   // (+,+,+,-)
  kAlternate,  // (+,-,-,-)
};

struct ChshSignature {
  ChshForm form;
  int overall;  // +1 or -1
};

/// Signs are ordered (00, 01, 10, 11). Accepts +-(+,+,+,-) and +-(+,-,-,-);
/// anything else is not a CHSH-type group.
inline std::optional<ChshSignature> classify_chsh_signs(const std::array<int, 4>& c) {
  const int o = c[0];
  if (o != 1 && o != -1) return std::nullopt;
  const std::array<int, 4> n{c[0] * o, c[1] * o, c[2] * o, c[3] * o};
  if (n == std::array<int, 4>{1, 1, 1, -1}) return ChshSignature{ChshForm::kStandard, o};
  if (n == std::array<int, 4>{1, -1, -1, -1}) return ChshSignature{ChshForm::kAlternate, o};
  return std::nullopt;
}

/// One CHSH-type element I_xi: four signed correlation operators on the
/// effective pair (group A, group B).
struct ChshElement {
  std::size_t xi = 0;                      // setting word of the fixed parties
  Grouping grouping;
  std::map<std::size_t, int> fixed_choices;  // parties 0..N-3
  std::array<int, 4> signs{};                // order (00, 01, 10, 11)
  ChshSignature signature{};
  std::array<ComplexMatrix, 4> terms;        // correlation operators Q~_ij

  std::size_t dim() const { return terms[0].dim(); }

  ComplexMatrix matrix() const {
    MatrixAccumulator acc(dim());
    for (std::size_t k = 0; k < 4; ++k) acc.add(terms[k], signs[k]);
    return acc.result();
  }
};

/// Element `xi` of `pattern`: parties 0..N-3 fixed to the bits of xi, the
/// free indices i and j belong to parties N-2 and N-1. Group A = {0..N-2},
/// group B = {N-1}. Each Q~_ij is P(parity 0) - P(parity 1) of the joint
/// observable. Throws IdentityError if the four signs are not CHSH-type.
inline ChshElement make_chsh_element(const SettingsTable& settings, const SignPattern& pattern,
                                     std::size_t xi) {
  const std::size_t n = settings.n_parties();
  if (pattern.n_parties() != n) throw DimensionError("make_chsh_element: party count mismatch");
  if (n < 2) throw DomainError("make_chsh_element: needs at least two parties");
  if (xi >= (std::size_t{1} << (n - 2))) throw DomainError("make_chsh_element: xi out of range");

  std::vector<std::size_t> group_a(n - 1);
  for (std::size_t p = 0; p + 1 < n; ++p) group_a[p] = p;
  ChshElement e{xi, Grouping(group_a, n), {}, {}, {}, {}};
  for (std::size_t p = 0; p + 2 < n; ++p)
    e.fixed_choices[p] = static_cast<int>((xi >> (n - 3 - p)) & 1U);

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) e.signs[2 * i + j] = pattern.coeff((xi << 2) | (i << 1) | j);
  const auto sig = classify_chsh_signs(e.signs);
  if (!sig)
    throw IdentityError("chsh_type_element_" + std::to_string(xi + 1), 1.0, 0.0);
  e.signature = *sig;

  const std::vector<std::size_t> group_b{n - 1};
  for (int i = 0; i < 2; ++i) {
    auto choices_a = e.fixed_choices;
    choices_a[n - 2] = i;
    const auto g = group_observable(settings, e.grouping.group_a(), choices_a);
    for (int j = 0; j < 2; ++j) {
      const auto h = group_observable(settings, group_b, {{n - 1, j}});
      const DichotomicObservable joint(g.matrix() * h.matrix());
      e.terms[2 * i + j] = correlation_operator(joint);
    }
  }
  return e;
}

inline std::vector<ChshElement> decompose_pattern(const SettingsTable& settings,
                                                  const SignPattern& pattern) {
  const std::size_t n = settings.n_parties();
  if (n < 3) throw DomainError("decompose_svetlichny: needs at least three parties");
  std::vector<ChshElement> out;
  out.reserve(std::size_t{1} << (n - 2));
  for (std::size_t xi = 0; xi < (std::size_t{1} << (n - 2)); ++xi)
    out.push_back(make_chsh_element(settings, pattern, xi));
  return out;
}

/// The 2^(N-2) CHSH-type elements whose sum is the Svetlichny operator.
inline std::vector<ChshElement> decompose_svetlichny(const SettingsTable& settings) {
  return decompose_pattern(settings, SignPattern::svetlichny(settings.n_parties()));
}

inline ComplexMatrix sum_elements(const std::vector<ChshElement>& elements) {
  if (elements.empty()) throw DomainError("sum_elements: no elements");
  MatrixAccumulator acc(elements.front().dim());
  for (const auto& e : elements)
    for (std::size_t k = 0; k < 4; ++k) acc.add(e.terms[k], e.signs[k]);
  return acc.result();
}

}  // namespace qwitness
