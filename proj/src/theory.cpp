#include "seqppm/theory.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace seqppm::theory {
namespace {

double normal_pdf(double z) {
  static const double kInvSqrt2Pi = 0.3989422804014326779;
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.70710678118654752440); }

template <typename F>
struct Quadrature {
  F f;
  int max_depth = 60;
  long evaluations = 0;

  double eval(double z) {
    ++evaluations;
    return f(z);
  }

  // Adaptive Simpson with the classic 1/15 error estimate.
  double simpson(double a, double b, double fa, double fm, double fb, double whole,
                 double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = eval(lm), frm = eval(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
    if (depth <= 0) {
      std::ostringstream msg;
      msg << "block-error quadrature did not converge on [" << a << ", " << b
          << "] (residual " << std::abs(err) / 15.0 << ", " << evaluations
          << " evaluations)";
      throw std::runtime_error(msg.str());
    }
    return simpson(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }

  double integrate(double a, double b, double tol) {
    double fa = eval(a), fb = eval(b), fm = eval(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(a, b, fa, fm, fb, whole, tol, max_depth);
  }
};

}  // namespace

void ChannelSpec::validate() const {
  if (!(eb > 0.0)) throw std::domain_error("ChannelSpec: eb must be positive");
  if (c_inf.has_value() != tau.has_value())
    throw std::domain_error("ChannelSpec: c_inf and tau must be set together");
  if (c_inf) {
    if (!(*c_inf > 0.0) || !(*tau > 0.0))
      throw std::domain_error("ChannelSpec: time-domain fields must be positive");
    double rate = 1.0 / *tau;
    double r = rate / *c_inf;
    if (std::abs(r - kLn2 / eb) > 1e-9 * (r + kLn2 / eb))
      throw std::domain_error("ChannelSpec: rate fraction inconsistent with eb");
  }
}

double ChannelSpec::rate_fraction() const { return kLn2 / eb; }

double capacity_rate(double p_over_n0) {
  if (p_over_n0 < 0.0) throw std::domain_error("capacity_rate: negative P/N0");
  return p_over_n0 * 1.4426950408889634074;  // log2(e)
}

ExponentValue exponent_rate(double rate, double c_inf) {
  if (!(c_inf > 0.0)) throw std::domain_error("exponent_rate: c_inf must be positive");
  if (rate < 0.0) throw std::domain_error("exponent_rate: negative rate");
  double value;
  if (rate <= 0.25 * c_inf) {
    value = (0.5 * c_inf - rate) * kLn2;
  } else if (rate < c_inf) {
    double s = std::sqrt(c_inf) - std::sqrt(rate);
    value = s * s * kLn2;
  } else {
    value = 0.0;
  }
  return {value, ExponentDomain::kRate};
}

ExponentValue exponent_eb(double eb) {
  if (eb < 0.0) throw std::domain_error("exponent_eb: negative eb");
  double value;
  if (eb > 4.0 * kLn2) {
    value = (eb / (2.0 * kLn2) - 1.0) * kLn2;
  } else if (eb > kLn2) {
    double s = std::sqrt(eb / kLn2) - 1.0;
    value = s * s * kLn2;
  } else {
    value = 0.0;
  }
  return {value, ExponentDomain::kEb};
}

ExponentValue converse_exponent(double rate, double c_inf) {
  if (!(c_inf > 0.0) || !(rate > 0.0) || !(rate < c_inf))
    throw std::domain_error("converse_exponent: rate must be in (0, c_inf)");
  double s = std::sqrt(c_inf) - std::sqrt(rate);
  return {s * s * kLn2, ExponentDomain::kRate};
}

double prefix_constant(double tau_times_exponent) {
  if (!(tau_times_exponent > 0.0))
    throw std::domain_error("prefix_constant: argument must be positive");
  return 1.0 / std::expm1(tau_times_exponent);
}

double eb_from_rate_fraction(double r) {
  if (!(r > 0.0)) throw std::domain_error("eb_from_rate_fraction: nonpositive fraction");
  return kLn2 / r;
}

double rate_fraction_from_eb(double eb) {
  if (!(eb > 0.0)) throw std::domain_error("rate_fraction_from_eb: nonpositive eb");
  return kLn2 / eb;
}

double gaussian_tail(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

double exact_block_error(std::uint64_t message_count, double eb) {
  if (message_count < 2) throw std::domain_error("exact_block_error: need M >= 2");
  if (!(eb > 0.0)) throw std::domain_error("exact_block_error: eb must be positive");
  double bits = std::log2(static_cast<double>(message_count));
  double boost = std::sqrt(2.0 * eb * bits);
  double mm1 = static_cast<double>(message_count - 1);

  auto integrand = [boost, mm1](double z) {
    return normal_pdf(z) * std::pow(normal_cdf(z + boost), mm1);
  };
  Quadrature<decltype(integrand)> q{integrand};
  // The integrand is bounded by the standard normal density, so the mass
  // outside [-10, 10] is below 1e-22 for every boost.
  double p_correct = q.integrate(-10.0, 10.0, 1e-12);
  double pe = 1.0 - p_correct;
  if (pe < 0.0) pe = 0.0;
  return pe;
}

}  // namespace seqppm::theory
