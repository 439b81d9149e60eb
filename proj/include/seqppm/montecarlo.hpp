#pragma once

#include <cstdint>
#include <vector>

#include "seqppm/channel.hpp"
#include "seqppm/theory.hpp"

namespace seqppm::montecarlo {

struct CurvePoint {
  int delay = 0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;  // 95% Wilson score interval
  double ci_hi = 0.0;
};

struct ErrorCurve {
  std::vector<CurvePoint> points;
};

struct ExponentFit {
  double slope = 0.0;      // nats per bit-slot
  double intercept = 0.0;  // nats
  double stderr_slope = 0.0;
  int points_used = 0;
};

struct RunOptions {
  int workers = 1;
  double noise_scale = 1.0;  // test hook; 1.0 for real experiments
};

CurvePoint make_point(int delay, std::uint64_t trials, std::uint64_t errors);

// Genie-aided suffix error frequency per delay. True bits are drawn
// equiprobably per trial; a single noise realization is shared across the
// delay grid, so the curve points are positively correlated.
ErrorCurve run_genie_curve(const theory::ChannelSpec& spec, const std::vector<int>& delays,
                           std::uint64_t trials_per_delay, std::uint64_t seed,
                           const RunOptions& opt = {});

// Full (no-genie) anytime decoding error of bit `bit_index` at each delay.
ErrorCurve run_anytime_curve(const theory::ChannelSpec& spec, int bit_index,
                             const std::vector<int>& delays, std::uint64_t trials,
                             std::uint64_t seed, const RunOptions& opt = {});

// Weighted least squares of -ln p_hat against d, weights = error counts.
// Points with fewer than 10 errors are excluded; needs >= 3 usable points
// (throws std::runtime_error otherwise).
ExponentFit fit_exponent(const ErrorCurve& curve);

// Monte Carlo block error rate of M-ary orthogonal ML detection.
double run_block_baseline(std::uint64_t message_count, const theory::ChannelSpec& spec,
                          std::uint64_t trials, std::uint64_t seed,
                          const RunOptions& opt = {});

struct FeedbackResult {
  // age_histogram[a] counts slots whose earliest current error is a-1 bits
  // old (a = 0: tentative decode fully correct).
  std::vector<std::uint64_t> age_histogram;
  std::uint64_t observations = 0;
  double tail_slope = 0.0;       // fitted d ln P(a) / da over the tail
  bool tail_slope_valid = false;
  // Theoretical candidates for the tail in log2 P(f) vs log2 f coordinates,
  // alongside the empirical value; no one of them is asserted.
  double empirical_log2p_per_log2f = 0.0;
  double candidate_slope_shallow = 0.0;  // -E/(2R): per-octave reading
  double candidate_slope_steep = 0.0;    // -2 E/(R ln2): per-delay bound
};

// Tentative-decision experiment: decode at every horizon t = 1..n, record the
// age of the earliest erroneous bit. The no-feedback system is simulated and
// relabeled; distance properties make this statistically identical to the
// error-sequence transmitter.
FeedbackResult run_feedback_bandwidth(const theory::ChannelSpec& spec, int stream_length,
                                      std::uint64_t trials, std::uint64_t seed,
                                      const RunOptions& opt = {});

// Partition [0, trials) into worker chunks, run `body(trial, state)` on each,
// and merge chunk states in index order. Deterministic for any worker count
// as long as merging is commutative and associative.
template <typename State, typename Body, typename Merge>
State run_trials(std::uint64_t trials, int workers, Body body, Merge merge);

}  // namespace seqppm::montecarlo

#include "seqppm/montecarlo_impl.hpp"
