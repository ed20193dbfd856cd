#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace ucauchy {

// Planar points are complex numbers; the Cauchy kernel lives naturally there.
using Point = std::complex<double>;
using Complex = std::complex<double>;

// A violated precondition or malformed input. The CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a test-function family cannot be built because the disc it
// needs holds too little of the measure.
class NoSupportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative solver failed to reach its tolerance, or an estimate was flagged
// unstable. The CLI maps it to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

inline double dist(Point a, Point b) { return std::abs(a - b); }

inline double dist2(Point a, Point b) {
  const double dx = a.real() - b.real();
  const double dy = a.imag() - b.imag();
  return dx * dx + dy * dy;
}

// Distance from p to the closed segment [a, b].
double segment_distance(Point p, Point a, Point b);

// Parameter t in [0,1] of the point of [a, b] closest to p.
double segment_projection(Point p, Point a, Point b);

}  // namespace ucauchy
