#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lcavs {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input files (CSV cells, JSON config, trace artifacts).
struct ParseError : Error {
  using Error::Error;
};

// A type or configuration invariant is violated; message names the field.
struct ValidationError : Error {
  using Error::Error;
};

// A count table or state self-check failed; indicates a bug, not bad input.
struct InternalError : Error {
  using Error::Error;
};

// lgamma without the signgam global, so chains can run on separate threads.
inline double log_gamma(double x) {
#if defined(__GLIBC__) || defined(__unix__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

inline double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

}  // namespace lcavs
