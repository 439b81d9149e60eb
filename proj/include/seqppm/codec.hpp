#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "seqppm/theory.hpp"

// The streaming semi-orthogonal encoder. Bit-slot k is divided into 2^k
// sub-slots, one per possible bit prefix; the encoder puts the whole E_b of
// the slot into the sub-slot selected by the bits seen so far. Sub-slots of
// slot k+1 refine those of slot k (children of sub-slot m are 2m and 2m+1),
// so two streams that disagree at or before slot j have disjoint support on
// every slot from j onward.
//
// No waveforms are materialized: a Pulse in matched-filter coordinates is the
// complete description.

namespace seqppm::codec {

using Bit = std::uint8_t;
using BitSpan = std::span<const Bit>;

// 2^k sub-slot indices must fit a 64-bit integer.
inline constexpr int kMaxSlots = 62;

// One leaf of the code tree: slot k (1-based) and sub-slot m in [0, 2^k).
// The sub-slot is the MSB-first integer value of the bit prefix.
struct PathIndex {
  int slot;
  std::uint64_t subslot;

  friend bool operator==(const PathIndex&, const PathIndex&) = default;
};

struct Pulse {
  PathIndex path;
  double energy;
};

inline void check_bits(BitSpan bits) {
  if (bits.empty()) throw std::domain_error("codec: empty bit sequence");
  if (bits.size() > static_cast<std::size_t>(kMaxSlots))
    throw std::length_error("codec: more than 62 slots (sub-slot index would overflow)");
  for (Bit b : bits)
    if (b > 1) throw std::domain_error("codec: bits must be 0 or 1");
}

inline PathIndex subslot_index(BitSpan bits) {
  check_bits(bits);
  std::uint64_t m = 0;
  for (Bit b : bits) m = (m << 1) | b;
  return {static_cast<int>(bits.size()), m};
}

inline Pulse encode_slot(BitSpan bits, const theory::ChannelSpec& spec) {
  spec.validate();
  return {subslot_index(bits), spec.eb};
}

// Energy overlap of two length-n streams over slots from_slot..n. Zero
// whenever the streams differ at any position <= from_slot (semi-
// orthogonality); otherwise eb per slot up to the first divergence.
inline double tail_inner_product(BitSpan a, BitSpan b, int from_slot,
                                 const theory::ChannelSpec& spec) {
  if (a.size() != b.size()) throw std::domain_error("tail_inner_product: length mismatch");
  check_bits(a);
  check_bits(b);
  spec.validate();
  int n = static_cast<int>(a.size());
  if (from_slot < 1 || from_slot > n)
    throw std::domain_error("tail_inner_product: from_slot out of range");
  double total = 0.0;
  std::uint64_t ma = 0, mb = 0;
  for (int k = 1; k <= n; ++k) {
    ma = (ma << 1) | a[k - 1];
    mb = (mb << 1) | b[k - 1];
    if (k >= from_slot && ma == mb) total += spec.eb;
  }
  return total;
}

}  // namespace seqppm::codec
