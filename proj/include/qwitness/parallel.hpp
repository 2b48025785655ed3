#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace qwitness {

/// Worker count: an explicit request wins, otherwise QWITNESS_THREADS
/// (0 = auto), otherwise hardware concurrency.
inline unsigned resolve_workers(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QWITNESS_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

template <typename Value>
struct ArgMax {
  Value value{};
  std::uint64_t index = 0;
};

/// Maximum of eval(i) over i in [0, count). Ties resolve to the smallest
/// index, so the answer does not depend on the number of workers.
template <typename Value, typename Eval>
ArgMax<Value> parallel_argmax(std::uint64_t count, Eval eval, unsigned workers) {
  workers = std::max(1U, workers);
  if (count < workers) workers = static_cast<unsigned>(std::max<std::uint64_t>(1, count));
  std::vector<ArgMax<Value>> partial(workers);
  std::vector<char> seen(workers, 0);  // not vector<bool>: workers write concurrently
  auto run = [&](unsigned w) {
    const std::uint64_t lo = count * w / workers;
    const std::uint64_t hi = count * (w + 1) / workers;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const Value v = eval(i);
      if (!seen[w] || v > partial[w].value) {
        partial[w] = {v, i};
        seen[w] = 1;
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  ArgMax<Value> best{};
  bool have = false;
  for (unsigned w = 0; w < workers; ++w) {
    if (!seen[w]) continue;
    if (!have || partial[w].value > best.value ||
        (partial[w].value == best.value && partial[w].index < best.index)) {
      best = partial[w];
      have = true;
    }
  }
  return best;
}

}  // namespace qwitness
