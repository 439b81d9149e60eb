#include "seqppm/decoder.hpp"

#include <stdexcept>

namespace seqppm::decoder {

namespace {

// Best completion value of the subtree rooted at (slot, subslot), summed over
// slots slot..last. Depth-first, O(depth) live state.
double subtree_best(const channel::ObservationOracle& oracle, int slot,
                    std::uint64_t subslot, int last) {
  double z = oracle.query(slot, subslot);
  if (slot == last) return z;
  double b0 = subtree_best(oracle, slot + 1, subslot << 1, last);
  double b1 = subtree_best(oracle, slot + 1, (subslot << 1) | 1, last);
  return z + (b1 > b0 ? b1 : b0);
}

}  // namespace

double path_metric(codec::BitSpan bits, const channel::ObservationOracle& oracle) {
  codec::check_bits(bits);
  if (static_cast<int>(bits.size()) > oracle.horizon())
    throw std::domain_error("path_metric: path longer than oracle horizon");
  double total = 0.0;
  std::uint64_t m = 0;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    m = (m << 1) | bits[k];
    total += oracle.query(static_cast<int>(k) + 1, m);
  }
  return total;
}

DecodeResult ml_window_decode(const channel::ObservationOracle& oracle, int horizon) {
  if (horizon < 1) throw std::domain_error("ml_window_decode: horizon must be >= 1");
  if (horizon > kMaxWindowHorizon)
    throw std::length_error("ml_window_decode: horizon above supported cap");
  if (horizon > oracle.horizon())
    throw std::domain_error("ml_window_decode: horizon beyond oracle");

  // Descend, recomputing the two child subtree values at each level. The
  // recomputation along the chosen path costs the same order as one sweep.
  DecodeResult result{horizon, {}, 0.0};
  result.ml_path.reserve(horizon);
  std::uint64_t m = 0;
  for (int k = 1; k <= horizon; ++k) {
    double b0 = subtree_best(oracle, k, m << 1, horizon);
    double b1 = subtree_best(oracle, k, (m << 1) | 1, horizon);
    codec::Bit bit = b1 > b0 ? 1 : 0;
    m = (m << 1) | bit;
    result.ml_path.push_back(bit);
    if (k == 1) result.metric = bit ? b1 : b0;
  }
  return result;
}

DecodeResult exhaustive_decode(const channel::ObservationOracle& oracle, int horizon) {
  if (horizon < 1) throw std::domain_error("exhaustive_decode: horizon must be >= 1");
  if (horizon > kMaxExhaustiveHorizon)
    throw std::length_error("exhaustive_decode: horizon above supported cap");
  if (horizon > oracle.horizon())
    throw std::domain_error("exhaustive_decode: horizon beyond oracle");

  std::uint64_t best_m = 0;
  double best = 0.0;
  const std::uint64_t count = std::uint64_t{1} << horizon;
  for (std::uint64_t m = 0; m < count; ++m) {
    double metric = 0.0;
    for (int k = 1; k <= horizon; ++k) metric += oracle.query(k, m >> (horizon - k));
    // Scanning in increasing m with strict > keeps the lexicographically
    // smallest path on ties.
    if (m == 0 || metric > best) {
      best = metric;
      best_m = m;
    }
  }
  DecodeResult result{horizon, {}, best};
  result.ml_path.resize(horizon);
  for (int k = 0; k < horizon; ++k)
    result.ml_path[k] = static_cast<codec::Bit>((best_m >> (horizon - 1 - k)) & 1u);
  return result;
}

AnytimeEstimates anytime_estimates(const channel::ObservationOracle& oracle, int horizon) {
  if (horizon < 1 || horizon > kMaxAnytimeHorizon)
    throw std::length_error("anytime_estimates: horizon outside supported range");
  AnytimeEstimates est;
  est.rows.reserve(horizon);
  for (int t = 1; t <= horizon; ++t)
    est.rows.push_back(ml_window_decode(oracle, t).ml_path);
  return est;
}

bool genie_suffix_error(const channel::ObservationOracle& oracle, int delay,
                        int window_start) {
  if (delay < 0) throw std::domain_error("genie_suffix_error: negative delay");
  if (delay > kMaxGenieDelay)
    throw std::length_error("genie_suffix_error: delay above supported cap");
  int last = window_start + delay;
  if (window_start < 1 || last > oracle.horizon())
    throw std::domain_error("genie_suffix_error: window outside oracle horizon");

  std::uint64_t prefix =
      window_start == 1 ? 0 : oracle.true_subslot(window_start - 1);
  codec::Bit true_bit = oracle.true_bits()[window_start - 1];
  std::uint64_t correct_root = (prefix << 1) | true_bit;
  std::uint64_t wrong_root = (prefix << 1) | (1u - true_bit);
  double correct = subtree_best(oracle, window_start, correct_root, last);
  double wrong = subtree_best(oracle, window_start, wrong_root, last);
  return wrong >= correct;
}

bool genie_suffix_error_exhaustive(const channel::ObservationOracle& oracle, int delay,
                                   int window_start) {
  if (delay < 0 || delay > 14)
    throw std::length_error("genie_suffix_error_exhaustive: delay outside range");
  int last = window_start + delay;
  if (window_start < 1 || last > oracle.horizon())
    throw std::domain_error("genie_suffix_error_exhaustive: window outside horizon");

  std::uint64_t prefix =
      window_start == 1 ? 0 : oracle.true_subslot(window_start - 1);
  codec::Bit true_bit = oracle.true_bits()[window_start - 1];

  auto best_over = [&](codec::Bit first_bit) {
    double best = 0.0;
    bool any = false;
    std::uint64_t suffixes = std::uint64_t{1} << delay;
    for (std::uint64_t s = 0; s < suffixes; ++s) {
      double metric = 0.0;
      std::uint64_t m = (prefix << 1) | first_bit;
      metric += oracle.query(window_start, m);
      for (int k = 1; k <= delay; ++k) {
        m = (m << 1) | ((s >> (delay - k)) & 1u);
        metric += oracle.query(window_start + k, m);
      }
      if (!any || metric > best) {
        best = metric;
        any = true;
      }
    }
    return best;
  };

  return best_over(static_cast<codec::Bit>(1u - true_bit)) >= best_over(true_bit);
}

}  // namespace seqppm::decoder
