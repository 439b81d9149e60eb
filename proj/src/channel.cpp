#include "seqppm/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "seqppm/rng.hpp"

namespace seqppm::channel {

namespace {

std::vector<std::uint64_t> path_of(const std::vector<codec::Bit>& bits) {
  std::vector<std::uint64_t> path(bits.size());
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw std::domain_error("ObservationOracle: bits must be 0 or 1");
    m = (m << 1) | bits[i];
    path[i] = m;
  }
  return path;
}

}  // namespace

ObservationOracle::ObservationOracle(std::uint64_t seed, std::uint64_t trial,
                                     theory::ChannelSpec spec,
                                     std::vector<codec::Bit> true_bits, double noise_scale)
    : seed_(seed),
      trial_(trial),
      spec_(spec),
      true_bits_(std::move(true_bits)),
      true_path_(path_of(true_bits_)),
      amplitude_(std::sqrt(2.0 * spec.eb)),
      noise_scale_(noise_scale) {
  spec_.validate();
  if (true_bits_.size() > static_cast<std::size_t>(codec::kMaxSlots))
    throw std::length_error("ObservationOracle: stream longer than 62 slots");
}

ObservationOracle::ObservationOracle(std::uint64_t seed, std::uint64_t trial,
                                     theory::ChannelSpec spec,
                                     std::vector<codec::Bit> true_bits, NoiseFn noise_hook)
    : ObservationOracle(seed, trial, spec, std::move(true_bits), 1.0) {
  noise_hook_ = std::move(noise_hook);
}

std::uint64_t ObservationOracle::true_subslot(int slot) const {
  if (slot < 1 || slot > horizon())
    throw std::domain_error("ObservationOracle: slot out of range");
  return true_path_[slot - 1];
}

double ObservationOracle::query(int slot, std::uint64_t subslot) const {
  if (slot < 1 || slot > horizon())
    throw std::domain_error("ObservationOracle: slot out of range");
  if (slot < 64 && subslot >= (std::uint64_t{1} << slot))
    throw std::domain_error("ObservationOracle: sub-slot out of range");
  double noise;
  if (noise_hook_) {
    noise = noise_hook_(slot, subslot);
  } else {
    noise = noise_scale_ * rng::normal({rng::kNoise, seed_, trial_,
                                        static_cast<std::uint64_t>(slot), subslot});
  }
  double signal = (subslot == true_path_[slot - 1]) ? amplitude_ : 0.0;
  return signal + noise;
}

std::vector<codec::Bit> random_bits(std::uint64_t seed, std::uint64_t trial, int count) {
  std::vector<codec::Bit> bits(count);
  for (int i = 0; i < count; ++i)
    bits[i] = static_cast<codec::Bit>(
        rng::bit({rng::kDataBits, seed, trial, static_cast<std::uint64_t>(i)}));
  return bits;
}

}  // namespace seqppm::channel
