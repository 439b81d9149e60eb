#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "seqppm/codec.hpp"
#include "seqppm/theory.hpp"

namespace seqppm::channel {

// Deterministic, lazily evaluated AWGN channel in matched-filter coordinates.
// query(k, m) returns the matched-filter output of sub-slot m of slot k:
// addressed standard normal noise, plus sqrt(2 eb) if (k, m) lies on the
// transmitted path. Nothing is stored per sub-slot, so depth-40 trees with
// 2^40 sub-slots cost nothing until queried.
//
// Immutable after construction; safe for concurrent queries.
class ObservationOracle {
 public:
  // Replaces the default addressed-normal noise; used by decoder tests.
  using NoiseFn = std::function<double(int slot, std::uint64_t subslot)>;

  ObservationOracle(std::uint64_t seed, std::uint64_t trial, theory::ChannelSpec spec,
                    std::vector<codec::Bit> true_bits, double noise_scale = 1.0);

  ObservationOracle(std::uint64_t seed, std::uint64_t trial, theory::ChannelSpec spec,
                    std::vector<codec::Bit> true_bits, NoiseFn noise_hook);

  double query(int slot, std::uint64_t subslot) const;

  int horizon() const { return static_cast<int>(true_bits_.size()); }
  const std::vector<codec::Bit>& true_bits() const { return true_bits_; }
  std::uint64_t true_subslot(int slot) const;
  const theory::ChannelSpec& spec() const { return spec_; }
  double signal_amplitude() const { return amplitude_; }

 private:
  std::uint64_t seed_;
  std::uint64_t trial_;
  theory::ChannelSpec spec_;
  std::vector<codec::Bit> true_bits_;
  std::vector<std::uint64_t> true_path_;  // true_path_[k-1] = transmitted sub-slot of slot k
  double amplitude_;
  double noise_scale_;
  NoiseFn noise_hook_;  // empty -> addressed normal
};

// Equiprobable data bits addressed by (seed, trial, position).
std::vector<codec::Bit> random_bits(std::uint64_t seed, std::uint64_t trial, int count);

}  // namespace seqppm::channel
