#pragma once

#include <iosfwd>
#include <string>

#include "seqppm/montecarlo.hpp"

namespace seqppm::report {

// Shortest decimal string that round-trips the double; locale-independent.
std::string format_double(double value);

// Columns: d, trials, errors, p_hat, ci_lo, ci_hi. Byte-identical for
// identical curves.
void write_curve_csv(std::ostream& out, const montecarlo::ErrorCurve& curve);

montecarlo::ErrorCurve read_curve_csv(std::istream& in);

}  // namespace seqppm::report
