#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace seqppm::channel {

// Finite-alphabet channel with per-input costs and a designated zero-cost
// input, for the capacity-per-unit-cost experiments.
struct DmcSpec {
  std::size_t num_inputs = 0;
  std::size_t num_outputs = 0;
  std::vector<double> cost;              // per input, nonnegative
  std::vector<std::vector<double>> transition;  // transition[x][y], rows sum to 1
  std::size_t zero_cost_input = 0;

  // Throws std::domain_error on shape mismatch, probabilities outside [0,1],
  // rows off by more than 1e-12, negative costs, or no zero-cost input.
  void validate() const;

  std::span<const double> row(std::size_t x) const { return transition.at(x); }
};

// Plain-text format: first line "num_inputs num_outputs", then the cost row,
// then one transition row per input, whitespace-separated decimals.
DmcSpec load_dmc(std::istream& in);
DmcSpec load_dmc_file(const std::string& path);

// Output symbol drawn from row P(.|x), addressed by (seed, address words);
// identical addresses give identical outputs.
std::size_t dmc_sample(const DmcSpec& spec, std::uint64_t seed,
                       std::span<const std::uint64_t> address, std::size_t x);

}  // namespace seqppm::channel
