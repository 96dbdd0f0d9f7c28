#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace agla {

using cplx = std::complex<double>;

/// Coefficient-space vector (length M).
using CoefVec = std::vector<cplx>;
/// Signal-space vector (length L). Real signals carry zero imaginary parts.
using SignalVec = std::vector<cplx>;
using RealVec = std::vector<double>;

/// Base class of every error the library raises.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  DimensionMismatch(const std::string& what, std::size_t expected, std::size_t got)
      : Error(what + ": expected length " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

class BadShape : public Error {
public:
  using Error::Error;
};

class RankDeficient : public Error {
public:
  using Error::Error;
};

class BadLattice : public Error {
public:
  using Error::Error;
};

class NotAFrame : public Error {
public:
  using Error::Error;
};

class InvalidParameter : public Error {
public:
  using Error::Error;
};

inline void require_length(const char* what, std::size_t expected, std::size_t got) {
  if (expected != got) throw DimensionMismatch(what, expected, got);
}

// Small vector helpers shared across modules.

inline double norm2_squared(std::span<const cplx> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return acc;
}

inline double norm2(std::span<const cplx> v) { return std::sqrt(norm2_squared(v)); }

inline double distance_squared(std::span<const cplx> a, std::span<const cplx> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return acc;
}

inline double distance(std::span<const cplx> a, std::span<const cplx> b) {
  return std::sqrt(distance_squared(a, b));
}

inline SignalVec to_complex(std::span<const double> v) {
  return SignalVec(v.begin(), v.end());
}

}  // namespace agla
