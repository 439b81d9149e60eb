#pragma once

#include <cstdint>
#include <optional>

// Closed-form capacities, exponents and unit conversions for the
// infinite-bandwidth AWGN channel. Everything here is analytic; the Monte
// Carlo experiments are checked against these curves.
//
// Unit convention: all exponents are kept in nats internally. Bits appear
// only at I/O boundaries (rates in bits per unit time, energies as the
// dimensionless E_b/N0 ratio).

namespace seqppm::theory {

inline constexpr double kLn2 = 0.6931471805599453094;

// Normalized channel parameters. `eb` is E_b/N0 and is the single source of
// truth; the optional time-domain fields only provide the R = 1/tau view.
struct ChannelSpec {
  double eb;                      // E_b/N0, dimensionless, > 0
  std::optional<double> c_inf;    // capacity, bits per unit time
  std::optional<double> tau;      // seconds per bit-slot (rate R = 1/tau)

  // Throws std::domain_error when eb <= 0 or the time-domain fields are
  // inconsistent with eb (rate fraction R/C_inf must equal ln2/eb).
  void validate() const;

  double rate_fraction() const;   // R/C_inf = ln2/eb
};

enum class ExponentDomain { kRate, kEb };

// Nonnegative exponent with its unit: nats per unit time (rate domain) or
// nats per bit-slot (eb domain).
struct ExponentValue {
  double value;
  ExponentDomain domain;
};

// Capacity in bits per unit time given P/N0.
double capacity_rate(double p_over_n0);

// Orthogonal-coding block error exponent at rate R, nats per unit time.
ExponentValue exponent_rate(double rate, double c_inf);

// Same exponent reparameterized by E_b/N0, nats per bit-slot.
ExponentValue exponent_eb(double eb);

// High-rate converse on the delay exponent: (sqrt(C) - sqrt(R))^2 ln2 for
// all 0 < R < C. Equals exponent_rate above C/4; larger below it, where
// tightness is not claimed.
ExponentValue converse_exponent(double rate, double c_inf);

// Geometric-series factor 1/(e^x - 1) converting the per-suffix constant to
// the overall anytime constant. x must be positive (the series diverges at 0).
double prefix_constant(double tau_times_exponent);

// Rate fraction r = R/C_inf <-> eb conversions: eb = ln2/r.
double eb_from_rate_fraction(double r);
double rate_fraction_from_eb(double eb);

// Gaussian tail Q(x) = P(N(0,1) > x).
double gaussian_tail(double x);

// Exact M-ary orthogonal-signaling block error probability,
//   1 - Integral phi(z) Phi(z + sqrt(2 eb log2 M))^(M-1) dz,
// by adaptive quadrature to 1e-10 absolute. For M = 2 this is Q(sqrt(eb)).
// Throws std::runtime_error if the quadrature fails to converge.
double exact_block_error(std::uint64_t message_count, double eb);

}  // namespace seqppm::theory
