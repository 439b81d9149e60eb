#pragma once

#include <vector>

#include "seqppm/channel.hpp"
#include "seqppm/codec.hpp"

// Maximum-likelihood sequence decoding over the binary code tree. Because
// every candidate waveform carries exactly eb per slot, the sum of queried
// matched-filter outputs along a path is a strictly monotone transform of the
// log-likelihood, so argmax of the path metric is the ML sequence.
//
// ml_window_decode walks the tree depth-first with O(n) live state; cost is
// Theta(2^(n+1)) node visits, which caps the usable horizons.

namespace seqppm::decoder {

struct DecodeResult {
  int horizon;
  std::vector<codec::Bit> ml_path;
  double metric;
};

// est[t][i] (1-based): estimate of bit i from observations through slot t.
// Row t is the full ML path at horizon t; decisions are never remembered.
struct AnytimeEstimates {
  std::vector<std::vector<codec::Bit>> rows;  // rows[t-1] has t entries

  codec::Bit at(int t, int i) const { return rows.at(t - 1).at(i - 1); }
};

inline constexpr int kMaxWindowHorizon = 28;
inline constexpr int kMaxExhaustiveHorizon = 16;
inline constexpr int kMaxAnytimeHorizon = 24;
inline constexpr int kMaxGenieDelay = 26;

// Sum of queried Z along the path's sub-slots.
double path_metric(codec::BitSpan bits, const channel::ObservationOracle& oracle);

// ML path over slots 1..horizon by depth-first subtree maximization. Ties
// break toward bit 0 at the shallowest differing slot.
DecodeResult ml_window_decode(const channel::ObservationOracle& oracle, int horizon);

// Brute-force argmax over all 2^n paths; same tie rule. Test oracle.
DecodeResult exhaustive_decode(const channel::ObservationOracle& oracle, int horizon);

// Re-runs ml_window_decode at every horizon t = 1..n.
AnytimeEstimates anytime_estimates(const channel::ObservationOracle& oracle, int horizon);

// Genie-aided suffix error: with bits before window_start known, does some
// path with the wrong bit at window_start beat every path with the correct
// bit over the d+1 slots window_start..window_start+d? Ties count as errors.
bool genie_suffix_error(const channel::ObservationOracle& oracle, int delay,
                        int window_start);

// Enumeration twin of genie_suffix_error for cross-checks (delay <= 14).
bool genie_suffix_error_exhaustive(const channel::ObservationOracle& oracle, int delay,
                                   int window_start);

}  // namespace seqppm::decoder
