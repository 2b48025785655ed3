#pragma once

// Exhaustive classical baselines for full-correlation sign patterns:
// deterministic local strategies, deterministic bipartition (hybrid)
// strategies and the four-cycle noncontextual assignments. All arithmetic is
// on integers, and strategies are enumerated by index so the first maximizer
// in index order is reported regardless of the worker count.

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qwitness/error.hpp"
#include "qwitness/ineq.hpp"
#include "qwitness/parallel.hpp"
#include "qwitness/qobs.hpp"

namespace qwitness {

inline constexpr std::size_t kMaxLhvParties = 8;
inline constexpr std::size_t kMaxHybridParties = 5;

/// outcomes[p][s] in {+1, -1}: party p's answer to setting s.
struct DeterministicStrategy {
  std::vector<std::array<int, 2>> outcomes;
  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

/// Each group answers its joint setting word (group-local, lowest party index
/// most significant) with a single +-1 product outcome.
struct HybridStrategy {
  Grouping grouping;
  std::vector<int> response_a;
  std::vector<int> response_b;
  friend bool operator==(const HybridStrategy&, const HybridStrategy&) = default;
};

struct CycleAssignment {
  int a = 1, b = 1, c = 1, d = 1;
  friend bool operator==(const CycleAssignment&, const CycleAssignment&) = default;
};

using Strategy = std::variant<DeterministicStrategy, HybridStrategy, CycleAssignment>;

struct BoundResult {
  long long bound = 0;
  Strategy argmax_strategy;
  std::uint64_t evaluations = 0;
};

inline long long evaluate_strategy(const SignPattern& pattern, const DeterministicStrategy& s) {
  if (s.outcomes.size() != pattern.n_parties())
    throw DimensionError("deterministic strategy size does not match pattern");
  long long total = 0;
  for (std::size_t w = 0; w < pattern.size(); ++w) {
    int prod = pattern.coeff(w);
    for (std::size_t p = 0; p < pattern.n_parties(); ++p) prod *= s.outcomes[p][pattern.bit(w, p)];
    total += prod;
  }
  return total;
}

namespace detail {

inline std::size_t local_word(const SignPattern& pattern, std::size_t word,
                              const std::vector<std::size_t>& group) {
  std::size_t lw = 0;
  for (auto p : group) lw = (lw << 1) | static_cast<std::size_t>(pattern.bit(word, p));
  return lw;
}

}  // namespace detail

inline long long evaluate_strategy(const SignPattern& pattern, const HybridStrategy& s) {
  const auto& ga = s.grouping.group_a();
  const auto& gb = s.grouping.group_b();
  if (s.grouping.n_parties() != pattern.n_parties() ||
      s.response_a.size() != (std::size_t{1} << ga.size()) ||
      s.response_b.size() != (std::size_t{1} << gb.size()))
    throw DimensionError("hybrid strategy shape does not match pattern");
  long long total = 0;
  for (std::size_t w = 0; w < pattern.size(); ++w)
    total += pattern.coeff(w) * s.response_a[detail::local_word(pattern, w, ga)] *
             s.response_b[detail::local_word(pattern, w, gb)];
  return total;
}

/// ab + bc + cd - ad
inline long long evaluate_cycle(const CycleAssignment& x) {
  return x.a * x.b + x.b * x.c + x.c * x.d - x.a * x.d;
}

/// Maximum over all 2^(2N) deterministic local strategies. Strategy index bit
/// (2p + s) set means party p answers -1 to setting s.
inline BoundResult lhv_bound(const SignPattern& pattern, unsigned workers = 0) {
  const std::size_t n = pattern.n_parties();
  if (n > kMaxLhvParties)
    throw CapExceededError("lhv_bound: " + std::to_string(n) + " parties exceeds the " +
                           std::to_string(kMaxLhvParties) +
                           "-party enumeration cap; use the hybrid bound for small N or a "
                           "sampled search");
  // masks[w] selects the outcome bits read by setting word w
  std::vector<std::uint64_t> masks(pattern.size());
  for (std::size_t w = 0; w < pattern.size(); ++w)
    for (std::size_t p = 0; p < n; ++p)
      masks[w] |= std::uint64_t{1} << (2 * p + static_cast<std::size_t>(pattern.bit(w, p)));
  const auto& coeffs = pattern.coeffs();
  auto eval = [&](std::uint64_t s) {
    long long total = 0;
    for (std::size_t w = 0; w < masks.size(); ++w)
      total += (std::popcount(s & masks[w]) & 1) ? -coeffs[w] : coeffs[w];
    return total;
  };
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  const auto best = parallel_argmax<long long>(count, eval, resolve_workers(workers));

  DeterministicStrategy strat;
  strat.outcomes.resize(n);
  for (std::size_t p = 0; p < n; ++p)
    for (int s = 0; s < 2; ++s) strat.outcomes[p][s] = ((best.index >> (2 * p + s)) & 1U) ? -1 : 1;
  return {best.value, strat, count};
}

/// Maximum over every bipartition (group A always holds party 0) and every
/// pair of deterministic group response functions.
inline BoundResult hybrid_bound(const SignPattern& pattern, unsigned workers = 0) {
  const std::size_t n = pattern.n_parties();
  if (n > kMaxHybridParties)
    throw CapExceededError("hybrid_bound: " + std::to_string(n) + " parties exceeds the " +
                           std::to_string(kMaxHybridParties) +
                           "-party cap (response-function space grows as 2^(2^m))");
  if (n < 2) throw DomainError("hybrid_bound: needs at least two parties");

  struct Block {
    Grouping grouping;
    std::vector<std::size_t> word_a, word_b;  // local words per setting word
    std::uint64_t count_b;                    // response functions of group B
    std::uint64_t offset;
  };
  std::vector<Block> blocks;
  std::uint64_t total = 0;
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t mask = 1; mask < all; ++mask) {
    if (!(mask & 1U)) continue;  // party 0 in group A
    std::vector<std::size_t> ga;
    for (std::size_t p = 0; p < n; ++p)
      if ((mask >> p) & 1U) ga.push_back(p);
    Grouping g(ga, n);
    Block b{g, {}, {}, std::uint64_t{1} << (std::size_t{1} << g.group_b().size()), total};
    for (std::size_t w = 0; w < pattern.size(); ++w) {
      b.word_a.push_back(detail::local_word(pattern, w, g.group_a()));
      b.word_b.push_back(detail::local_word(pattern, w, g.group_b()));
    }
    total += (std::uint64_t{1} << (std::size_t{1} << ga.size())) * b.count_b;
    blocks.push_back(std::move(b));
  }

  auto locate = [&](std::uint64_t idx) -> const Block& {
    std::size_t k = blocks.size() - 1;
    while (blocks[k].offset > idx) --k;
    return blocks[k];
  };
  const auto& coeffs = pattern.coeffs();
  auto eval = [&](std::uint64_t idx) {
    const Block& b = locate(idx);
    const std::uint64_t local = idx - b.offset;
    const std::uint64_t ra = local / b.count_b, rb = local % b.count_b;
    long long v = 0;
    for (std::size_t w = 0; w < coeffs.size(); ++w) {
      const bool flip = (((ra >> b.word_a[w]) ^ (rb >> b.word_b[w])) & 1U) != 0;
      v += flip ? -coeffs[w] : coeffs[w];
    }
    return v;
  };
  const auto best = parallel_argmax<long long>(total, eval, resolve_workers(workers));

  const Block& b = locate(best.index);
  const std::uint64_t local = best.index - b.offset;
  const std::uint64_t ra = local / b.count_b, rb = local % b.count_b;
  HybridStrategy strat{b.grouping, {}, {}};
  for (std::size_t k = 0; k < (std::size_t{1} << b.grouping.group_a().size()); ++k)
    strat.response_a.push_back(((ra >> k) & 1U) ? -1 : 1);
  for (std::size_t k = 0; k < (std::size_t{1} << b.grouping.group_b().size()); ++k)
    strat.response_b.push_back(((rb >> k) & 1U) ? -1 : 1);
  return {best.value, strat, total};
}

/// Maximum of ab + bc + cd - ad over the 16 assignments in {+1,-1}^4.
inline BoundResult noncontextual_bound() {
  auto assignment = [](std::uint64_t idx) {
    auto v = [&](int bit) { return ((idx >> bit) & 1U) ? -1 : 1; };
    return CycleAssignment{v(3), v(2), v(1), v(0)};
  };
  const auto best = parallel_argmax<long long>(
      16, [&](std::uint64_t i) { return evaluate_cycle(assignment(i)); }, 1);
  return {best.value, assignment(best.index), 16};
}

}  // namespace qwitness
