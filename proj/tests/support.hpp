#pragma once

// Shared builders and tolerances for the test binaries.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "agla/io.hpp"
#include "agla/linops.hpp"
#include "agla/magproj.hpp"
#include "agla/types.hpp"

namespace agla::test {

inline CoefVec random_complex(io::Rng& rng, std::size_t n) {
  CoefVec v(n);
  for (auto& z : v) z = {rng.normal(), rng.normal()};
  return v;
}

inline SignalVec random_real(io::Rng& rng, std::size_t n) {
  SignalVec v(n);
  for (auto& z : v) z = {rng.normal(), 0.0};
  return v;
}

/// Complex Gaussian matrix, row-major.
inline std::vector<cplx> random_matrix(io::Rng& rng, std::size_t rows, std::size_t cols) {
  return random_complex(rng, rows * cols);
}

inline LinearTransform random_dense(io::Rng& rng, std::size_t rows, std::size_t cols) {
  const auto a = random_matrix(rng, rows, cols);
  return make_dense(a, rows, cols);
}

/// s = |T x| scaled to unit norm.
inline MagnitudeSpec unit_target(const LinearTransform& t, std::span<const cplx> x) {
  const CoefVec c = t.analyze(x);
  RealVec s(c.size());
  double nrm = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    s[i] = std::abs(c[i]);
    nrm += s[i] * s[i];
  }
  nrm = std::sqrt(nrm);
  for (auto& v : s) v /= nrm;
  return MagnitudeSpec(std::move(s));
}

/// Dense matrix-vector product, row-major.
inline CoefVec matvec(std::span<const cplx> a, std::size_t rows, std::size_t cols,
                      std::span<const cplx> x) {
  CoefVec y(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < cols; ++k) acc += a[r * cols + k] * x[k];
    y[r] = acc;
  }
  return y;
}

/// A^H y.
inline CoefVec adjoint_matvec(std::span<const cplx> a, std::size_t rows, std::size_t cols,
                              std::span<const cplx> y) {
  CoefVec x(cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t k = 0; k < cols; ++k) x[k] += std::conj(a[r * cols + k]) * y[r];
  return x;
}

/// Explicit DGT matrix built from the definition
/// c[m, n] = sum_l x[l] g((l - n a) mod L) exp(-2 pi i m l / M), stored frame-major.
inline std::vector<cplx> explicit_dgt_matrix(std::size_t length, std::size_t hop, std::size_t channels,
                                             std::span<const double> g) {
  const std::size_t frames = length / hop;
  const std::size_t rows = frames * channels;
  std::vector<cplx> a(rows * length);
  const double two_pi = 2.0 * std::acos(-1.0);
  for (std::size_t n = 0; n < frames; ++n)
    for (std::size_t m = 0; m < channels; ++m)
      for (std::size_t l = 0; l < length; ++l) {
        const std::size_t shift = (l + length - (n * hop) % length) % length;
        const double phase = -two_pi * static_cast<double>((m * l) % channels) / static_cast<double>(channels);
        a[(n * channels + m) * length + l] = g[shift] * std::polar(1.0, phase);
      }
  return a;
}

inline double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(std::span<const cplx> a) {
  double m = 0.0;
  for (const auto& z : a) m = std::max(m, std::abs(z));
  return m;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace agla::test
