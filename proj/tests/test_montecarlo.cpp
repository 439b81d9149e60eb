#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>
#include <vector>

#include "seqppm/montecarlo.hpp"
#include "seqppm/theory.hpp"

using namespace seqppm;
using theory::kLn2;

namespace {

const theory::ChannelSpec kSpec{2 * kLn2, {}, {}};

bool same_curve(const montecarlo::ErrorCurve& a, const montecarlo::ErrorCurve& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const auto& p = a.points[i];
    const auto& q = b.points[i];
    if (p.delay != q.delay || p.trials != q.trials || p.errors != q.errors) return false;
    if (p.p_hat != q.p_hat || p.ci_lo != q.ci_lo || p.ci_hi != q.ci_hi) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("make_point Wilson interval") {
  auto pt = montecarlo::make_point(3, 1000, 100);
  CHECK(pt.p_hat == doctest::Approx(0.1));
  // Hand-computed Wilson bounds for p=0.1, n=1000, z=1.96.
  CHECK(pt.ci_lo == doctest::Approx(0.0828).epsilon(2e-3));
  CHECK(pt.ci_hi == doctest::Approx(0.1203).epsilon(2e-3));
  CHECK(pt.ci_lo < pt.p_hat);
  CHECK(pt.p_hat < pt.ci_hi);

  auto zero = montecarlo::make_point(0, 50, 0);
  CHECK(zero.p_hat == 0.0);
  CHECK(zero.ci_lo == 0.0);
  CHECK(zero.ci_hi > 0.0);
  auto full = montecarlo::make_point(0, 50, 50);
  CHECK(full.ci_hi == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(full.ci_hi <= 1.0);
  CHECK(full.ci_lo < 1.0);
  CHECK_THROWS_AS(montecarlo::make_point(0, 0, 0), std::domain_error);
}

TEST_CASE("run_trials determinism and chunking") {
  struct Sum {
    std::uint64_t value = 0;
  };
  auto body = [](std::uint64_t trial, Sum& s) { s.value += trial * trial; };
  auto merge = [](Sum& a, const Sum& b) { a.value += b.value; };
  std::uint64_t expected = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) expected += t * t;
  for (int workers : {1, 2, 3, 7, 16}) {
    auto got = montecarlo::run_trials<Sum>(1000, workers, body, merge);
    CHECK(got.value == expected);
  }
  // More workers than trials.
  CHECK(montecarlo::run_trials<Sum>(3, 8, body, merge).value == 5);
}

TEST_CASE("run_genie_curve matches the closed form at d = 0") {
  // With the genie pinning everything else, d = 0 is a two-hypothesis test
  // whose error probability is the M = 2 block error.
  std::vector<int> delays{0};
  auto curve = montecarlo::run_genie_curve(kSpec, delays, 200'000, 2024);
  double p = theory::exact_block_error(2, kSpec.eb);
  double sigma = std::sqrt(p * (1 - p) / 200'000.0);
  CHECK(std::abs(curve.points[0].p_hat - p) < 4 * sigma);
}

TEST_CASE("run_genie_curve shares randomness and is worker-invariant") {
  std::vector<int> delays{0, 2, 4, 6};
  auto base = montecarlo::run_genie_curve(kSpec, delays, 20'000, 7);
  for (int workers : {2, 5, 8}) {
    montecarlo::RunOptions opt;
    opt.workers = workers;
    CHECK(same_curve(base, montecarlo::run_genie_curve(kSpec, delays, 20'000, 7, opt)));
  }
  // Error probability decreases with delay on a shared noise realization.
  for (std::size_t j = 1; j < base.points.size(); ++j)
    CHECK(base.points[j].errors <= base.points[j - 1].errors);

  CHECK_THROWS_AS(montecarlo::run_genie_curve(kSpec, {}, 100, 1), std::domain_error);
  CHECK_THROWS_AS(montecarlo::run_genie_curve(kSpec, {40}, 100, 1), std::length_error);
}

TEST_CASE("run_genie_curve near the reliability boundary") {
  // Just above eb = ln2 the exponent is nearly zero: the d = 0 error rate sits
  // close to Q(sqrt(ln2)) ~ 0.2 and the curve decays slowly.
  theory::ChannelSpec near{1.001 * kLn2, {}, {}};
  auto curve = montecarlo::run_genie_curve(near, {0, 4}, 1'000'000, 99,
                                           montecarlo::RunOptions{8, 1.0});
  CHECK(curve.points[0].p_hat > 0.2);
  CHECK(curve.points[0].p_hat < 0.6);
  CHECK(curve.points[1].p_hat < curve.points[0].p_hat);
  // Slow decay: far from the e^{-0.9d}-type falloff seen at high energy.
  CHECK(curve.points[1].p_hat > 0.25 * curve.points[0].p_hat);
}

TEST_CASE("anytime curve dominates the genie curve") {
  // The genie-aided decoder is strictly better informed, so per delay the
  // full decoder's error rate can only sit above it (up to noise).
  std::vector<int> delays{0, 1, 2, 3, 4, 5, 6};
  const std::uint64_t trials = 20'000;
  auto genie = montecarlo::run_genie_curve(kSpec, delays, trials, 21);
  auto anytime = montecarlo::run_anytime_curve(kSpec, 1, delays, trials, 22);
  for (std::size_t j = 0; j < delays.size(); ++j) {
    double pg = genie.points[j].p_hat;
    double pa = anytime.points[j].p_hat;
    double sigma = std::sqrt(pg * (1 - pg) / trials + pa * (1 - pa) / trials);
    CHECK(pa >= pg - 3 * sigma);
  }
}

TEST_CASE("run_anytime_curve basics") {
  std::vector<int> delays{0, 2, 4};
  auto curve = montecarlo::run_anytime_curve(kSpec, 1, delays, 20'000, 11);
  REQUIRE(curve.points.size() == 3);
  for (std::size_t j = 1; j < curve.points.size(); ++j)
    CHECK(curve.points[j].p_hat < curve.points[j - 1].p_hat);
  montecarlo::RunOptions opt;
  opt.workers = 6;
  CHECK(same_curve(curve, montecarlo::run_anytime_curve(kSpec, 1, delays, 20'000, 11, opt)));

  CHECK_THROWS_AS(montecarlo::run_anytime_curve(kSpec, 0, delays, 100, 1),
                  std::domain_error);
  CHECK_THROWS_AS(montecarlo::run_anytime_curve(kSpec, 20, {10}, 100, 1),
                  std::length_error);
}

TEST_CASE("fit_exponent on synthetic curves") {
  // Exact exponential decay p = exp(-0.7 d): slope recovers 0.7.
  montecarlo::ErrorCurve curve;
  for (int d : {0, 2, 4, 6, 8}) {
    double p = std::exp(-0.7 * d);
    auto errors = static_cast<std::uint64_t>(std::llround(p * 1e9));
    curve.points.push_back(montecarlo::make_point(d, 1'000'000'000, errors));
  }
  auto fit = montecarlo::fit_exponent(curve);
  CHECK(fit.points_used == 5);
  CHECK(fit.slope == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(fit.intercept == doctest::Approx(0.0).epsilon(1e-5));

  // A constant prefactor lands in the intercept: p(d) = 0.3 exp(-0.2 d).
  montecarlo::ErrorCurve scaled;
  for (int d : {0, 3, 6, 9}) {
    double p = 0.3 * std::exp(-0.2 * d);
    scaled.points.push_back(montecarlo::make_point(
        d, 1'000'000'000, static_cast<std::uint64_t>(std::llround(p * 1e9))));
  }
  auto scaled_fit = montecarlo::fit_exponent(scaled);
  CHECK(scaled_fit.slope == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(scaled_fit.intercept == doctest::Approx(std::log(1.0 / 0.3)).epsilon(1e-6));

  // Points under 10 errors are dropped.
  curve.points.push_back(montecarlo::make_point(40, 1'000'000'000, 5));
  auto trimmed = montecarlo::fit_exponent(curve);
  CHECK(trimmed.points_used == 5);
  CHECK(trimmed.slope == doctest::Approx(fit.slope));

  montecarlo::ErrorCurve sparse;
  sparse.points.push_back(montecarlo::make_point(0, 1000, 100));
  sparse.points.push_back(montecarlo::make_point(1, 1000, 50));
  CHECK_THROWS_AS(montecarlo::fit_exponent(sparse), std::runtime_error);
}

TEST_CASE("run_block_baseline") {
  double p2 = montecarlo::run_block_baseline(2, kSpec, 200'000, 5);
  double want = theory::exact_block_error(2, kSpec.eb);
  CHECK(std::abs(p2 - want) < 4 * std::sqrt(want * (1 - want) / 200'000.0));

  double p16 = montecarlo::run_block_baseline(16, theory::ChannelSpec{4 * kLn2, {}, {}},
                                              200'000, 5);
  double want16 = theory::exact_block_error(16, 4 * kLn2);
  CHECK(std::abs(p16 - want16) < 4 * std::sqrt(want16 * (1 - want16) / 200'000.0));

  montecarlo::RunOptions opt;
  opt.workers = 4;
  CHECK(montecarlo::run_block_baseline(2, kSpec, 50'000, 9) ==
        montecarlo::run_block_baseline(2, kSpec, 50'000, 9, opt));
  CHECK_THROWS_AS(montecarlo::run_block_baseline(1, kSpec, 100, 1), std::domain_error);
}

TEST_CASE("run_feedback_bandwidth accounting") {
  auto result = montecarlo::run_feedback_bandwidth(kSpec, 8, 2'000, 13);
  REQUIRE(result.age_histogram.size() == 9);
  std::uint64_t total =
      std::accumulate(result.age_histogram.begin(), result.age_histogram.end(),
                      std::uint64_t{0});
  CHECK(total == result.observations);
  CHECK(result.observations == 2'000 * 8);
  // Most tentative decisions are fully correct at this energy.
  CHECK(result.age_histogram[0] > result.observations / 2);

  double e = theory::exponent_eb(kSpec.eb).value;
  CHECK(result.candidate_slope_shallow == doctest::Approx(-e / 2.0));
  CHECK(result.candidate_slope_steep == doctest::Approx(-2.0 * e / kLn2));
  if (result.tail_slope_valid) {
    CHECK(result.tail_slope < 0.0);
    CHECK(result.empirical_log2p_per_log2f ==
          doctest::Approx(2.0 * result.tail_slope / kLn2));
  }

  montecarlo::RunOptions opt;
  opt.workers = 3;
  auto again = montecarlo::run_feedback_bandwidth(kSpec, 8, 2'000, 13, opt);
  CHECK(again.age_histogram == result.age_histogram);
  CHECK_THROWS_AS(montecarlo::run_feedback_bandwidth(kSpec, 0, 10, 1), std::length_error);
  CHECK_THROWS_AS(montecarlo::run_feedback_bandwidth(kSpec, 30, 10, 1), std::length_error);
}

TEST_CASE("noise_scale hook silences errors") {
  montecarlo::RunOptions quiet;
  quiet.noise_scale = 0.0;
  auto curve = montecarlo::run_genie_curve(kSpec, {0, 1, 2}, 500, 3, quiet);
  for (const auto& pt : curve.points) CHECK(pt.errors == 0);
}
