#pragma once

#include <stdexcept>
#include <thread>
#include <vector>

namespace seqppm::montecarlo {

template <typename State, typename Body, typename Merge>
State run_trials(std::uint64_t trials, int workers, Body body, Merge merge) {
  if (workers < 1) throw std::domain_error("run_trials: workers must be >= 1");
  if (workers == 1 || trials < 2) {
    State state{};
    for (std::uint64_t t = 0; t < trials; ++t) body(t, state);
    return state;
  }
  std::uint64_t n_chunks = std::min<std::uint64_t>(workers, trials);
  std::vector<State> states(n_chunks);
  std::vector<std::thread> threads;
  threads.reserve(n_chunks);
  for (std::uint64_t c = 0; c < n_chunks; ++c) {
    std::uint64_t lo = trials * c / n_chunks;
    std::uint64_t hi = trials * (c + 1) / n_chunks;
    threads.emplace_back([&, lo, hi, c] {
      for (std::uint64_t t = lo; t < hi; ++t) body(t, states[c]);
    });
  }
  for (auto& th : threads) th.join();
  State total{};
  for (auto& s : states) merge(total, s);
  return total;
}

}  // namespace seqppm::montecarlo
