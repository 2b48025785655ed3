#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qwitness/optimize.hpp"
#include "qwitness/witness.hpp"
#include "test_support.hpp"

using namespace qwitness;
using namespace qwitness::testing;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

OptimizationConfig quick(int restarts = 4) {
  OptimizationConfig c;
  c.restarts = restarts;
  return c;
}

TEST(Lcg64, MatchesWideArithmetic) {
  const unsigned __int128 a = 6364136223846793005ULL, c = 1442695040888963407ULL;
  const unsigned __int128 mod = static_cast<unsigned __int128>(1) << 64;
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
    unsigned __int128 s = seed;
    s = (s * a + c) % mod;  // discarded draw
    Lcg64 g(seed);
    for (int k = 0; k < 10; ++k) {
      s = (s * a + c) % mod;
      const double expected = std::ldexp(static_cast<double>(static_cast<std::uint64_t>(s) >> 11), -53);
      EXPECT_EQ(g.uniform(), expected);
    }
  }
}

TEST(Lcg64, StreamsOffsetTheSeed) {
  Lcg64 a = Lcg64::stream(7, 3);
  Lcg64 b(7 + 3 * 0x9E3779B97F4A7C15ULL);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(a.next(), b.next());
}

TEST(Lcg64, BlochDrawsAreUnit) {
  Lcg64 g(5);
  for (int k = 0; k < 100; ++k) EXPECT_TRUE(g.bloch().is_unit());
}

TEST(MaxEigenvalue, Examples) {
  const auto zz = kron(pauli_z(), pauli_z());
  EXPECT_NEAR(max_eigenvalue(InequalityOperator(2.0 * zz, 2.0, "zz")), 2.0, 1e-14);
  EXPECT_EQ(max_eigenvalue(InequalityOperator(ComplexMatrix(4), 0.0, "zero")), 0.0);
  const BlochVector z{0, 0, 1}, x{1, 0, 0}, p{1 / kSqrt2, 0, 1 / kSqrt2}, m{-1 / kSqrt2, 0, 1 / kSqrt2};
  EXPECT_NEAR(max_eigenvalue(chsh_operator(table({{z, x}, {p, m}}))), 2 * kSqrt2, 1e-12);
}

TEST(SettingsFromAngles, Layout) {
  const double a[] = {0.0, 0.0, std::numbers::pi / 2, 0.0, std::numbers::pi, 0.0, std::numbers::pi / 2,
                      std::numbers::pi / 2};
  const auto s = settings_from_angles(a);
  EXPECT_NEAR(s.setting(0, 0).z, 1.0, 1e-15);
  EXPECT_NEAR(s.setting(0, 1).x, 1.0, 1e-15);
  EXPECT_NEAR(s.setting(1, 0).z, -1.0, 1e-15);
  EXPECT_NEAR(s.setting(1, 1).y, 1.0, 1e-15);
  const double bad[] = {0.0, 0.0, 0.0};
  EXPECT_THROW(settings_from_angles(bad), DimensionError);
}

TEST(GoldenMax, FindsInteriorMaximum) {
  const auto r = detail::golden_max([](double t) { return -(t - 0.3) * (t - 0.3); }, -1.0, 1.0, 1e-9);
  EXPECT_NEAR(r.x, 0.3, 1e-8);
}

TEST(MaximizeViolation, ChshReachesTsirelson) {
  const auto r = maximize_violation(2, InequalityKind::kChsh, OptimizationConfig{});
  EXPECT_NEAR(r.best_value, 2 * kSqrt2, 1e-6);
  EXPECT_NEAR(max_eigenvalue(chsh_operator(r.settings)), r.best_value, 1e-9);
  EXPECT_TRUE(r.converged);
}

TEST(MaximizeViolation, ThreeQubitSvetlichny) {
  const auto r = maximize_violation(3, InequalityKind::kSvetlichny, OptimizationConfig{});
  EXPECT_NEAR(r.best_value, 4 * kSqrt2, 1e-6);
  EXPECT_NEAR(max_eigenvalue(svetlichny_operator(r.settings)), r.best_value, 1e-9);
}

TEST(MaximizeViolation, FourQubitSvetlichny) {
  const auto r = maximize_violation(4, InequalityKind::kSvetlichny, quick(4));
  EXPECT_NEAR(r.best_value, 8 * kSqrt2, 1e-5);
  EXPECT_LE(r.best_value, 8 * kSqrt2 + 1e-6);
}

TEST(MaximizeViolation, HistoryNondecreasingAndBounded) {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    auto cfg = quick(3);
    cfg.seed = seed;
    const auto r = maximize_violation(3, InequalityKind::kSvetlichny, cfg);
    ASSERT_FALSE(r.history.empty());
    for (std::size_t k = 1; k < r.history.size(); ++k) {
      EXPECT_GE(r.history[k].second, r.history[k - 1].second);
      EXPECT_EQ(r.history[k].first, r.history[k - 1].first + 1);
    }
    EXPECT_EQ(r.history.back().second, r.best_value);
    EXPECT_LE(r.best_value, 4 * kSqrt2 + 1e-6);
  }
}

TEST(MaximizeViolation, DeterministicAcrossRunsAndWorkers) {
  auto cfg = quick(5);
  cfg.seed = 99;
  cfg.workers = 1;
  const auto a = maximize_violation(3, InequalityKind::kSvetlichny, cfg);
  const auto b = maximize_violation(3, InequalityKind::kSvetlichny, cfg);
  cfg.workers = 4;
  const auto c = maximize_violation(3, InequalityKind::kSvetlichny, cfg);
  for (const auto* r : {&b, &c}) {
    EXPECT_EQ(r->best_value, a.best_value);
    EXPECT_EQ(r->history, a.history);
    EXPECT_EQ(r->restart, a.restart);
    EXPECT_EQ(r->iterations, a.iterations);
  }
}

TEST(MaximizeViolation, SeedChangesStartingPoints) {
  auto cfg = quick(1);
  cfg.seed = 1;
  const auto a = maximize_violation(2, InequalityKind::kChsh, cfg);
  cfg.seed = 2;
  const auto b = maximize_violation(2, InequalityKind::kChsh, cfg);
  EXPECT_NE(a.history.front().second, b.history.front().second);
}

TEST(MaximizeViolation, Errors) {
  EXPECT_THROW(maximize_violation(3, InequalityKind::kChsh, quick()), DomainError);
  EXPECT_THROW(maximize_violation(1, InequalityKind::kSvetlichny, quick()), DomainError);
}

TEST(OptimizationConfig, Validation) {
  OptimizationConfig c;
  c.restarts = 0;
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  c.step_min = 0.5;
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  c.max_iters = -1;
  EXPECT_THROW(c.validate(), DomainError);
  EXPECT_NO_THROW(OptimizationConfig{}.validate());
}

TEST(MaximizeExpectation, GhzReachesEigenvalue) {
  const auto r = maximize_expectation(SignPattern::svetlichny(3), ghz_state(3), quick(4));
  EXPECT_NEAR(r.best_value, 4 * kSqrt2, 1e-6);
  EXPECT_THROW(maximize_expectation(SignPattern::svetlichny(3), ghz_state(2), quick()), DimensionError);
}

TEST(ViolationThreshold, ThreeQubitGhz) {
  EXPECT_NEAR(violation_threshold(3, quick(3)), 1 / kSqrt2, 1e-4);
  EXPECT_THROW(violation_threshold(2, quick()), DomainError);
}

TEST(ViolationThreshold, EndpointsOfTheFamily) {
  const auto ghz = ghz_state(3);
  const auto cfg = quick(3);
  const auto s1 = maximize_expectation(SignPattern::svetlichny(3), ghz, cfg).settings;
  EXPECT_TRUE(evaluate_witness(s1, noisy_mixture(ghz, 1.0)).negative);
  const auto s0 = maximize_expectation(SignPattern::svetlichny(3), noisy_mixture(ghz, 0.0), cfg).settings;
  EXPECT_FALSE(evaluate_witness(s0, noisy_mixture(ghz, 0.0)).negative);
}

}  // namespace
