#include "seqppm/report.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace seqppm::report {

std::string format_double(double value) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_curve_csv(std::ostream& out, const montecarlo::ErrorCurve& curve) {
  out << "d,trials,errors,p_hat,ci_lo,ci_hi\n";
  for (const auto& pt : curve.points)
    out << pt.delay << ',' << pt.trials << ',' << pt.errors << ','
        << format_double(pt.p_hat) << ',' << format_double(pt.ci_lo) << ','
        << format_double(pt.ci_hi) << '\n';
}

montecarlo::ErrorCurve read_curve_csv(std::istream& in) {
  montecarlo::ErrorCurve curve;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("curve CSV: empty input");
  if (line.rfind("d,trials,errors", 0) != 0)
    throw std::runtime_error("curve CSV: unexpected header: " + line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    montecarlo::CurvePoint pt;
    char comma;
    if (!(row >> pt.delay >> comma >> pt.trials >> comma >> pt.errors >> comma >>
          pt.p_hat >> comma >> pt.ci_lo >> comma >> pt.ci_hi))
      throw std::runtime_error("curve CSV: malformed row: " + line);
    curve.points.push_back(pt);
  }
  return curve;
}

}  // namespace seqppm::report
