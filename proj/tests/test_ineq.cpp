#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "qwitness/ineq.hpp"
#include "qwitness/optimize.hpp"
#include "test_support.hpp"

using namespace qwitness;
using namespace qwitness::testing;

namespace {

const double kSqrt2 = std::numbers::sqrt2;
const BlochVector kZ{0, 0, 1}, kX{1, 0, 0};

ComplexMatrix bloch_oracle(const BlochVector& n) {
  return n.x * pauli_x() + n.y * pauli_y() + n.z * pauli_z();
}

/// sum_w c_w (x)_p A_p^{w_p} with word bit (N-1-p) selecting party p's setting.
ComplexMatrix pattern_oracle(const SettingsTable& s, const std::vector<int>& coeffs) {
  const std::size_t n = s.n_parties();
  ComplexMatrix total(std::size_t{1} << n);
  for (std::size_t w = 0; w < coeffs.size(); ++w) {
    ComplexMatrix term = bloch_oracle(s.setting(0, static_cast<int>((w >> (n - 1)) & 1U)));
    for (std::size_t p = 1; p < n; ++p)
      term = kron_oracle(term, bloch_oracle(s.setting(p, static_cast<int>((w >> (n - 1 - p)) & 1U))));
    total = total + static_cast<double>(coeffs[w]) * term;
  }
  return total;
}

SettingsTable planar3() {
  auto pl = [](double phi) { return BlochVector::from_angles(std::numbers::pi / 2, phi); };
  const double q = std::numbers::pi / 4;
  return table({{pl(0), pl(2 * q)}, {pl(0), pl(2 * q)}, {pl(-q), pl(q)}});
}

TEST(SvetlichnySign, Examples) {
  EXPECT_EQ(svetlichny_sign(0b000), 1);
  EXPECT_EQ(svetlichny_sign(0b011), -1);
  EXPECT_EQ(svetlichny_sign(0b111), -1);
  EXPECT_EQ(svetlichny_sign(0b0000), 1);
}

TEST(SignPattern, ThreeQubitDisplay) {
  EXPECT_EQ(SignPattern::svetlichny(3).coeffs(), (std::vector<int>{1, 1, 1, -1, 1, -1, -1, -1}));
  EXPECT_EQ(SignPattern::svetlichny(2).coeffs(), (std::vector<int>{1, 1, 1, -1}));
}

TEST(SignPattern, Validation) {
  EXPECT_THROW(SignPattern(2, {1, 1, 1}), DomainError);
  EXPECT_THROW(SignPattern(2, {1, 1, 0, -1}), DomainError);
  EXPECT_THROW(SignPattern(11, std::vector<int>(2048, 1)), DomainError);
}

TEST(SignPattern, RelabelSwapsSettingBit) {
  const auto p = SignPattern::svetlichny(3);
  const auto r = p.relabeled(2);
  for (std::size_t w = 0; w < 8; ++w) EXPECT_EQ(r.coeff(w), p.coeff(w ^ 1U));
  EXPECT_EQ(r.relabeled(2), p);
}

TEST(PatternOperator, MatchesOracle) {
  for (std::size_t n = 2; n <= 4; ++n)
    for (int t = 0; t < 5; ++t) {
      const auto s = random_settings(n);
      const auto p = SignPattern::svetlichny(n);
      EXPECT_LT(frob_distance(pattern_operator(s, p), pattern_oracle(s, p.coeffs())), 1e-12);
    }
}

TEST(Chsh, DegenerateSettingsHitClassicalBound) {
  const auto s = table({{kZ, kZ}, {kZ, kZ}});
  const auto op = chsh_operator(s);
  EXPECT_EQ(op.matrix, 2.0 * kron(pauli_z(), pauli_z()));
  EXPECT_NEAR(max_eigenvalue(op), 2.0, 1e-14);
  EXPECT_EQ(op.classical_bound, 2.0);
}

TEST(Chsh, TsirelsonSettings) {
  const BlochVector p{1 / kSqrt2, 0, 1 / kSqrt2}, m{-1 / kSqrt2, 0, 1 / kSqrt2};
  const auto op = chsh_operator(table({{kZ, kX}, {p, m}}));
  EXPECT_NEAR(max_eigenvalue(op), 2 * kSqrt2, 1e-12);
  EXPECT_NEAR(expectation(op.matrix, maximally_mixed(2)), 0.0, 1e-15);
}

TEST(Chsh, RequiresTwoParties) { EXPECT_THROW(chsh_operator(random_settings(3)), DomainError); }

TEST(Svetlichny, TwoPartyCaseIsChsh) {
  const auto s = random_settings(2);
  EXPECT_EQ(frob_distance(svetlichny_operator(s).matrix, chsh_operator(s).matrix), 0.0);
}

TEST(Svetlichny, PlanarSettingsReachMaximum) {
  const auto op = svetlichny_operator(planar3());
  EXPECT_EQ(op.classical_bound, 4.0);
  EXPECT_NEAR(max_eigenvalue(op), 4 * kSqrt2, 1e-12);
}

TEST(Svetlichny, ProductStatesRespectBound) {
  for (int t = 0; t < 50; ++t) {
    const auto op = svetlichny_operator(random_settings(3));
    const BlochVector s[] = {random_bloch(), random_bloch(), random_bloch()};
    EXPECT_LE(expectation(op.matrix, product_state(s)), 4.0 + 1e-9);
  }
}

TEST(Svetlichny, DegenerateSettingsCollapseToOneTerm) {
  // With both settings equal every term is the same product, so the operator
  // is (sum of signs) times it; the sign sum is Re + Im of (1 + i)^N.
  const int expected_sum[] = {0, 0, 0, 0, -4, -8, -8};
  for (std::size_t n = 3; n <= 6; ++n) {
    std::vector<SettingsTable::PartySettings> p(n);
    ComplexMatrix product = ComplexMatrix::identity(1);
    for (auto& ps : p) {
      const auto b = random_bloch();
      ps = {b, b};
      product = kron_oracle(product, bloch_oracle(b));
    }
    const auto coeffs = SignPattern::svetlichny(n).coeffs();
    const int sum = std::accumulate(coeffs.begin(), coeffs.end(), 0);
    ASSERT_EQ(sum, expected_sum[n]);
    const auto op = svetlichny_operator(SettingsTable(p));
    EXPECT_LT(frob_distance(op.matrix, static_cast<double>(sum) * product), 1e-12) << "n=" << n;
    EXPECT_NEAR(max_eigenvalue(op), std::abs(sum), 1e-12);
    EXPECT_LE(std::abs(sum), static_cast<int>(op.classical_bound));
    if (n == 3) EXPECT_EQ(max_abs_entry(op.matrix), 0.0);
  }
}

TEST(Cycle, CanonicalRealization) {
  const auto o = canonical_cycle();
  const auto id = ComplexMatrix::identity(2);
  EXPECT_EQ(o.a.matrix(), kron(id, pauli_x()));
  EXPECT_EQ(o.b.matrix(), kron(pauli_z(), id));
  EXPECT_EQ(o.c.matrix(), kron(id, pauli_z()));
  EXPECT_EQ(o.d.matrix(), kron(pauli_x(), id));
  const auto& [A, B, C, D] = std::tie(o.a.matrix(), o.b.matrix(), o.c.matrix(), o.d.matrix());
  EXPECT_EQ(max_abs_entry(commutator(A, B)), 0.0);
  EXPECT_EQ(max_abs_entry(commutator(B, C)), 0.0);
  EXPECT_EQ(max_abs_entry(commutator(C, D)), 0.0);
  EXPECT_EQ(max_abs_entry(commutator(D, A)), 0.0);

  const auto nc = noncontextual_cycle(o);
  const auto two = 2.0 * ComplexMatrix::identity(4);
  const auto ec = two - (A * B + B * C + C * D - A * D);
  EXPECT_LT(frob_distance(nc.ec.matrix, ec), 1e-15);
  EXPECT_LT(frob_distance(anticommutator(nc.x, nc.y), 4.0 * ec), 1e-12);
  EXPECT_LT(frob_distance(nc.x * nc.y, 2.0 * ec + commutator(B, D) + commutator(C, A)), 1e-12);
  EXPECT_LT(frob_distance(nc.y * nc.x, 2.0 * ec - commutator(B, D) - commutator(C, A)), 1e-12);
}

TEST(Cycle, RandomCompatibleRealizations) {
  for (int t = 0; t < 100; ++t) {
    const auto o = cycle_from_settings(random_settings(2));
    const auto& [A, B, C, D] = std::tie(o.a.matrix(), o.b.matrix(), o.c.matrix(), o.d.matrix());
    const auto nc = noncontextual_cycle(o);
    EXPECT_LT(frob_distance(nc.x * nc.y, 2.0 * nc.ec.matrix + commutator(B, D) + commutator(C, A)),
              1e-12);
    EXPECT_LT(frob_distance(anticommutator(nc.x, nc.y), 4.0 * nc.ec.matrix), 1e-12);
    EXPECT_GE(min_eigenvalue(nc.x), -1e-12);
    EXPECT_GE(min_eigenvalue(nc.y), -1e-12);
  }
}

TEST(Cycle, IncompatiblePairRejected) {
  auto o = canonical_cycle();
  o.b = embed(DichotomicObservable(pauli_z()), 1, 2);  // shares a slot with A = I x sigma_x
  EXPECT_THROW(noncontextual_cycle(o), DomainError);
  EXPECT_EQ(worst_compatibility(o).first, "[A,B]");
}

TEST(ChshSigns, Classification) {
  using A = std::array<int, 4>;
  EXPECT_EQ(classify_chsh_signs(A{1, 1, 1, -1})->form, ChshForm::kStandard);
  EXPECT_EQ(classify_chsh_signs(A{-1, -1, -1, 1})->overall, -1);
  EXPECT_EQ(classify_chsh_signs(A{1, -1, -1, -1})->form, ChshForm::kAlternate);
  EXPECT_EQ(classify_chsh_signs(A{-1, 1, 1, 1})->form, ChshForm::kAlternate);
  EXPECT_FALSE(classify_chsh_signs(A{1, 1, 1, 1}));
  EXPECT_FALSE(classify_chsh_signs(A{1, -1, 1, -1}));
}

TEST(Decompose, ThreeQubitElements) {
  const auto s = random_settings(3);
  const auto el = decompose_svetlichny(s);
  ASSERT_EQ(el.size(), 2u);
  EXPECT_EQ(el[0].signs, (std::array<int, 4>{1, 1, 1, -1}));
  EXPECT_EQ(el[1].signs, (std::array<int, 4>{1, -1, -1, -1}));
  EXPECT_EQ(el[0].signature.form, ChshForm::kStandard);
  EXPECT_EQ(el[1].signature.form, ChshForm::kAlternate);
  for (const auto& e : el) {
    EXPECT_EQ(e.grouping.group_a(), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(e.grouping.group_b(), (std::vector<std::size_t>{2}));
    EXPECT_EQ(e.fixed_choices.at(0), static_cast<int>(e.xi));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const auto q = kron_oracle(kron_oracle(bloch_oracle(s.setting(0, static_cast<int>(e.xi))),
                                               bloch_oracle(s.setting(1, i))),
                                   bloch_oracle(s.setting(2, j)));
        EXPECT_LT(frob_distance(e.terms[2 * i + j], q), 1e-13);
      }
  }
}

TEST(Decompose, FourQubitElementCount) {
  const auto s = random_settings(4);
  const auto el = decompose_svetlichny(s);
  ASSERT_EQ(el.size(), 4u);
  for (const auto& e : el) EXPECT_EQ(e.terms.size(), 4u);
  EXPECT_LT(frob_distance(sum_elements(el), svetlichny_operator(s).matrix), 1e-12);
}

TEST(Decompose, ReconstructionUpToSixQubits) {
  for (std::size_t n = 3; n <= 6; ++n)
    for (int t = 0; t < 3; ++t) {
      const auto s = random_settings(n);
      EXPECT_LT(frob_distance(sum_elements(decompose_svetlichny(s)), svetlichny_operator(s).matrix),
                1e-12)
          << "n=" << n;
    }
}

TEST(Decompose, ElementSpectraWithinTsirelson) {
  for (std::size_t n = 3; n <= 5; ++n) {
    const auto el = decompose_svetlichny(random_settings(n));
    for (const auto& e : el) {
      const auto r = hermitian_eigenvalues(e.matrix(), {.compute_vectors = false});
      EXPECT_GE(r.values.front(), -2 * kSqrt2 - 1e-12);
      EXPECT_LE(r.values.back(), 2 * kSqrt2 + 1e-12);
    }
  }
}

TEST(Decompose, NonChshPatternRejected) {
  try {
    decompose_pattern(random_settings(3), SignPattern(3, std::vector<int>(8, 1)));
    FAIL() << "expected IdentityError";
  } catch (const IdentityError& e) {
    EXPECT_EQ(e.identity(), "chsh_type_element_1");
  }
}

TEST(Decompose, NeedsThreeParties) {
  EXPECT_THROW(decompose_svetlichny(random_settings(2)), DomainError);
}

TEST(Relabeling, MaximumUnchangedUnderSettingSwap) {
  OptimizationConfig cfg;
  cfg.restarts = 6;
  const double base = maximize_pattern(SignPattern::svetlichny(3), cfg).best_value;
  for (std::size_t p = 0; p < 3; ++p) {
    const double r = maximize_pattern(SignPattern::svetlichny(3).relabeled(p), cfg).best_value;
    EXPECT_NEAR(r, base, 1e-6) << "party " << p;
  }
  EXPECT_NEAR(base, 4 * kSqrt2, 1e-6);
}

}  // namespace
