#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "seqppm/channel.hpp"
#include "seqppm/dmc.hpp"
#include "seqppm/rng.hpp"

using namespace seqppm;
using codec::Bit;

namespace {

const theory::ChannelSpec kSpec{2 * theory::kLn2, {}, {}};

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("oracle determinism and signal placement") {
  std::vector<Bit> bits{0, 1, 0, 1, 1};
  channel::ObservationOracle oracle(42, 7, kSpec, bits);
  double z1 = oracle.query(3, 2);
  double z2 = oracle.query(3, 2);
  CHECK(z1 == z2);

  channel::ObservationOracle again(42, 7, kSpec, bits);
  CHECK(again.query(3, 2) == z1);
  CHECK(again.query(5, 11) != again.query(5, 10));

  // Zero-noise hook: the true path carries sqrt(2 eb), everything else 0.
  channel::ObservationOracle quiet(42, 7, kSpec, bits,
                                   [](int, std::uint64_t) { return 0.0; });
  double amp = std::sqrt(2.0 * kSpec.eb);
  CHECK(quiet.query(1, 0) == doctest::Approx(amp));
  CHECK(quiet.query(1, 1) == 0.0);
  CHECK(quiet.query(5, 11) == doctest::Approx(amp));
  CHECK(quiet.query(5, 12) == 0.0);

  CHECK_THROWS_AS(oracle.query(0, 0), std::domain_error);
  CHECK_THROWS_AS(oracle.query(6, 0), std::domain_error);
  CHECK_THROWS_AS(oracle.query(2, 4), std::domain_error);
}

TEST_CASE("deep trees stay lazy") {
  // Slot 40 has 2^40 sub-slots; a single query must not materialize them.
  std::vector<Bit> bits(40, 1);
  channel::ObservationOracle oracle(1, 0, kSpec, bits);
  double z = oracle.query(40, (std::uint64_t{1} << 40) - 1);
  CHECK(std::isfinite(z));
  CHECK(z == oracle.query(40, (std::uint64_t{1} << 40) - 1));
}

TEST_CASE("addressed noise is statistically sound") {
  const int n = 1'000'000;
  std::vector<double> draws(n);
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    draws[i] = rng::normal({rng::kNoise, 99, static_cast<std::uint64_t>(i), 1, 0});
    sum += draws[i];
    sum2 += draws[i] * draws[i];
  }
  double mean = sum / n;
  double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.004);
  CHECK(std::abs(var - 1.0) < 0.01);

  // Kolmogorov-Smirnov against the standard normal, 1% critical value.
  std::sort(draws.begin(), draws.end());
  double ks = 0;
  for (int i = 0; i < n; ++i) {
    double f = normal_cdf(draws[i]);
    ks = std::max(ks, std::abs(f - (i + 1.0) / n));
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
  }
  CHECK(ks < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("adjacent addresses are uncorrelated") {
  const int n = 1'000'000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    std::uint64_t m = static_cast<std::uint64_t>(i);
    double x = rng::normal({rng::kNoise, 5, 0, 20, 2 * m});
    double y = rng::normal({rng::kNoise, 5, 0, 20, 2 * m + 1});
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  double cov = sxy / n - (sx / n) * (sy / n);
  double vx = sxx / n - (sx / n) * (sx / n);
  double vy = syy / n - (sy / n) * (sy / n);
  CHECK(std::abs(cov / std::sqrt(vx * vy)) < 0.005);
}

TEST_CASE("DmcSpec loading and validation") {
  std::istringstream in("2 2\n0 1\n0.95 0.05\n0.1 0.9\n");
  auto dmc = channel::load_dmc(in);
  CHECK(dmc.num_inputs == 2);
  CHECK(dmc.zero_cost_input == 0);
  CHECK(dmc.transition[1][1] == doctest::Approx(0.9));

  std::istringstream bad_row("2 2\n0 1\n0.9 0.2\n0.1 0.9\n");
  CHECK_THROWS_AS(channel::load_dmc(bad_row), std::domain_error);
  std::istringstream no_free("2 2\n0.5 1\n0.95 0.05\n0.1 0.9\n");
  CHECK_THROWS_AS(channel::load_dmc(no_free), std::domain_error);
  std::istringstream truncated("2 2\n0 1\n0.95 0.05\n");
  CHECK_THROWS_AS(channel::load_dmc(truncated), std::domain_error);
}

TEST_CASE("dmc_sample determinism and degenerate rows") {
  channel::DmcSpec det;
  det.num_inputs = 2;
  det.num_outputs = 2;
  det.cost = {0.0, 1.0};
  det.transition = {{1.0, 0.0}, {0.0, 1.0}};
  det.zero_cost_input = 0;
  det.validate();
  for (std::uint64_t a = 0; a < 100; ++a) {
    std::uint64_t addr[] = {a};
    CHECK(channel::dmc_sample(det, 3, addr, 0) == 0);
    CHECK(channel::dmc_sample(det, 3, addr, 1) == 1);
  }
  std::uint64_t addr[] = {17, 4};
  CHECK(channel::dmc_sample(det, 3, addr, 0) == channel::dmc_sample(det, 3, addr, 0));
  CHECK_THROWS_AS(channel::dmc_sample(det, 3, addr, 2), std::domain_error);
}

TEST_CASE("dmc_sample frequencies match the row") {
  channel::DmcSpec dmc;
  dmc.num_inputs = 2;
  dmc.num_outputs = 3;
  dmc.cost = {0.0, 1.0};
  dmc.transition = {{0.5, 0.3, 0.2}, {0.1, 0.2, 0.7}};
  dmc.zero_cost_input = 0;
  dmc.validate();

  const int n = 1'000'000;
  for (std::size_t x : {std::size_t{0}, std::size_t{1}}) {
    std::vector<int> counts(3, 0);
    for (int i = 0; i < n; ++i) {
      std::uint64_t addr[] = {static_cast<std::uint64_t>(i), x};
      ++counts[channel::dmc_sample(dmc, 11, addr, x)];
    }
    for (std::size_t y = 0; y < 3; ++y) {
      double p = dmc.transition[x][y];
      double sigma = std::sqrt(p * (1 - p) * n);
      CHECK(std::abs(counts[y] - p * n) < 4 * sigma);
    }
  }
}

TEST_CASE("random_bits is deterministic and balanced") {
  auto a = channel::random_bits(123, 5, 20);
  auto b = channel::random_bits(123, 5, 20);
  CHECK(a == b);
  CHECK(channel::random_bits(123, 6, 20) != a);

  int ones = 0;
  const int n = 200'000;
  for (int t = 0; t < n; ++t) ones += channel::random_bits(7, t, 1)[0];
  CHECK(std::abs(ones - n / 2) < 4 * std::sqrt(n / 4.0));
}
