#include "seqppm/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seqppm/decoder.hpp"
#include "seqppm/rng.hpp"

namespace seqppm::montecarlo {

namespace {

constexpr double kZ95 = 1.959963984540054;

struct Counts {
  std::vector<std::uint64_t> errors;
};

void merge_counts(Counts& into, const Counts& from) {
  if (into.errors.empty()) into.errors.assign(from.errors.size(), 0);
  for (std::size_t i = 0; i < from.errors.size(); ++i) into.errors[i] += from.errors[i];
}

}  // namespace

CurvePoint make_point(int delay, std::uint64_t trials, std::uint64_t errors) {
  if (trials == 0) throw std::domain_error("make_point: zero trials");
  CurvePoint pt;
  pt.delay = delay;
  pt.trials = trials;
  pt.errors = errors;
  double n = static_cast<double>(trials);
  double p = static_cast<double>(errors) / n;
  pt.p_hat = p;
  // Wilson score interval.
  double z2 = kZ95 * kZ95;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = kZ95 / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  pt.ci_lo = std::max(0.0, center - half);
  pt.ci_hi = std::min(1.0, center + half);
  return pt;
}

ErrorCurve run_genie_curve(const theory::ChannelSpec& spec, const std::vector<int>& delays,
                           std::uint64_t trials_per_delay, std::uint64_t seed,
                           const RunOptions& opt) {
  spec.validate();
  if (delays.empty()) throw std::domain_error("run_genie_curve: empty delay list");
  int max_d = *std::max_element(delays.begin(), delays.end());
  if (max_d > decoder::kMaxGenieDelay)
    throw std::length_error("run_genie_curve: delay above supported cap");

  auto counts = run_trials<Counts>(
      trials_per_delay, opt.workers,
      [&](std::uint64_t trial, Counts& state) {
        if (state.errors.empty()) state.errors.assign(delays.size(), 0);
        auto bits = channel::random_bits(seed, trial, max_d + 1);
        channel::ObservationOracle oracle(seed, trial, spec, std::move(bits),
                                          opt.noise_scale);
        for (std::size_t j = 0; j < delays.size(); ++j)
          if (decoder::genie_suffix_error(oracle, delays[j], 1)) ++state.errors[j];
      },
      merge_counts);

  ErrorCurve curve;
  for (std::size_t j = 0; j < delays.size(); ++j)
    curve.points.push_back(make_point(delays[j], trials_per_delay, counts.errors[j]));
  return curve;
}

ErrorCurve run_anytime_curve(const theory::ChannelSpec& spec, int bit_index,
                             const std::vector<int>& delays, std::uint64_t trials,
                             std::uint64_t seed, const RunOptions& opt) {
  spec.validate();
  if (bit_index < 1) throw std::domain_error("run_anytime_curve: bit index must be >= 1");
  if (delays.empty()) throw std::domain_error("run_anytime_curve: empty delay list");
  int max_d = *std::max_element(delays.begin(), delays.end());
  if (bit_index + max_d > decoder::kMaxAnytimeHorizon)
    throw std::length_error("run_anytime_curve: bit_index + delay above supported cap");

  auto counts = run_trials<Counts>(
      trials, opt.workers,
      [&](std::uint64_t trial, Counts& state) {
        if (state.errors.empty()) state.errors.assign(delays.size(), 0);
        auto bits = channel::random_bits(seed, trial, bit_index + max_d);
        codec::Bit truth = bits[bit_index - 1];
        channel::ObservationOracle oracle(seed, trial, spec, std::move(bits),
                                          opt.noise_scale);
        for (std::size_t j = 0; j < delays.size(); ++j) {
          auto decoded = decoder::ml_window_decode(oracle, bit_index + delays[j]);
          if (decoded.ml_path[bit_index - 1] != truth) ++state.errors[j];
        }
      },
      merge_counts);

  ErrorCurve curve;
  for (std::size_t j = 0; j < delays.size(); ++j)
    curve.points.push_back(make_point(delays[j], trials, counts.errors[j]));
  return curve;
}

ExponentFit fit_exponent(const ErrorCurve& curve) {
  std::vector<double> x, y, w;
  for (const auto& pt : curve.points) {
    if (pt.errors < 10) continue;  // log of near-zero estimates is unstable
    x.push_back(static_cast<double>(pt.delay));
    y.push_back(-std::log(pt.p_hat));
    w.push_back(static_cast<double>(pt.errors));
  }
  if (x.size() < 3)
    throw std::runtime_error("fit_exponent: fewer than 3 points with >= 10 errors");

  double sw = 0, swx = 0, swy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  double xbar = swx / sw, ybar = swy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }
  if (sxx == 0.0) throw std::runtime_error("fit_exponent: degenerate delay grid");

  ExponentFit fit;
  fit.points_used = static_cast<int>(x.size());
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += w[i] * r * r;
  }
  int dof = static_cast<int>(x.size()) - 2;
  fit.stderr_slope = dof > 0 ? std::sqrt((ss_res / dof) / sxx) : 0.0;
  return fit;
}

double run_block_baseline(std::uint64_t message_count, const theory::ChannelSpec& spec,
                          std::uint64_t trials, std::uint64_t seed, const RunOptions& opt) {
  spec.validate();
  if (message_count < 2) throw std::domain_error("run_block_baseline: need M >= 2");
  if (message_count > (std::uint64_t{1} << 20))
    throw std::length_error("run_block_baseline: M above 2^20");
  double boost =
      std::sqrt(2.0 * spec.eb * std::log2(static_cast<double>(message_count)));

  struct State {
    std::uint64_t errors = 0;
  };
  auto state = run_trials<State>(
      trials, opt.workers,
      [&](std::uint64_t trial, State& s) {
        // The transmitted message is a free choice by symmetry; index 0 keeps
        // the draw addressing simple.
        double best = 0.0;
        std::uint64_t best_i = 0;
        for (std::uint64_t i = 0; i < message_count; ++i) {
          double z = opt.noise_scale * rng::normal({rng::kBlockDraw, seed, trial, i});
          if (i == 0) z += boost;
          if (i == 0 || z > best) {
            best = z;
            best_i = i;
          }
        }
        if (best_i != 0) ++s.errors;
      },
      [](State& a, const State& b) { a.errors += b.errors; });

  return static_cast<double>(state.errors) / static_cast<double>(trials);
}

FeedbackResult run_feedback_bandwidth(const theory::ChannelSpec& spec, int stream_length,
                                      std::uint64_t trials, std::uint64_t seed,
                                      const RunOptions& opt) {
  spec.validate();
  if (stream_length < 1 || stream_length > decoder::kMaxAnytimeHorizon)
    throw std::length_error("run_feedback_bandwidth: stream length outside range");

  struct State {
    std::vector<std::uint64_t> hist;
  };
  auto state = run_trials<State>(
      trials, opt.workers,
      [&](std::uint64_t trial, State& s) {
        if (s.hist.empty()) s.hist.assign(stream_length + 1, 0);
        auto bits = channel::random_bits(seed, trial, stream_length);
        channel::ObservationOracle oracle(seed, trial, spec, bits, opt.noise_scale);
        for (int t = 1; t <= stream_length; ++t) {
          auto est = decoder::ml_window_decode(oracle, t).ml_path;
          int age = 0;
          for (int i = 1; i <= t; ++i)
            if (est[i - 1] != bits[i - 1]) {
              age = t - i + 1;
              break;
            }
          ++s.hist[age];
        }
      },
      [](State& a, const State& b) {
        if (a.hist.empty()) a.hist.assign(b.hist.size(), 0);
        for (std::size_t i = 0; i < b.hist.size(); ++i) a.hist[i] += b.hist[i];
      });

  FeedbackResult result;
  result.age_histogram = std::move(state.hist);
  for (auto c : result.age_histogram) result.observations += c;

  // Tail fit of ln P(a) vs a over bins a >= 3 with at least 10 counts.
  ErrorCurve tail;
  for (std::size_t a = 3; a < result.age_histogram.size(); ++a)
    if (result.age_histogram[a] >= 10)
      tail.points.push_back(
          make_point(static_cast<int>(a), result.observations, result.age_histogram[a]));
  if (tail.points.size() >= 3) {
    auto fit = fit_exponent(tail);
    result.tail_slope = -fit.slope;  // fit_exponent works on -ln p
    result.tail_slope_valid = true;
  }

  // Frequency-domain view: the earliest error a bits back needs a waveform of
  // frequency about 2^(a/2), so log2 f = a/2 and the empirical slope converts
  // by a factor 2/ln2.
  double e_per_bit = theory::exponent_eb(spec.eb).value;  // E_orth(R)/R, nats per bit
  result.empirical_log2p_per_log2f = 2.0 * result.tail_slope / theory::kLn2;
  result.candidate_slope_shallow = -e_per_bit / 2.0;
  result.candidate_slope_steep = -2.0 * e_per_bit / theory::kLn2;
  return result;
}

}  // namespace seqppm::montecarlo
