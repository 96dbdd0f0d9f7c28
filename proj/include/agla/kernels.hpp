#pragma once

// Data-parallel inner loops. Every kernel exists twice: an OpenMP version
// used by default and a plain serial reference kept for testing and
// benchmarking. Both versions accumulate in the same order, so their outputs
// are bit-identical.

#include <cstddef>
#include <memory>
#include <span>

#include "agla/types.hpp"

namespace agla::kernels {

enum class Execution { serial, parallel };

/// In-place-capable complex DFT of fixed length, unnormalized in both
/// directions. Plans are created once; execution is thread-safe.
class Fft {
public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }
  /// out[m] = sum_j in[j] exp(-2 pi i m j / n)
  void forward(const cplx* in, cplx* out) const;
  /// out[j] = sum_m in[m] exp(+2 pi i m j / n)
  void backward(const cplx* in, cplx* out) const;

private:
  std::size_t n_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Discrete Gabor lattice over a cyclic signal of length `length`.
/// Coefficients are stored frame-major: index = frame * channels + channel.
struct GaborLattice {
  std::size_t length = 0;
  std::size_t hop = 0;
  std::size_t channels = 0;

  std::size_t frames() const { return length / hop; }
  std::size_t coefficients() const { return channels * frames(); }
};

namespace serial {

// c[m, n] = sum_l x[l] window[(l - n*hop) mod L] exp(-2 pi i m l / channels)
void dgt_analysis(const GaborLattice& lat, std::span<const double> window, const Fft& fft,
                  std::span<const cplx> x, std::span<cplx> out);

// x[l] = sum_n window[(l - n*hop) mod L] sum_m c[m, n] exp(2 pi i m l / channels)
void dgt_synthesis(const GaborLattice& lat, std::span<const double> window, const Fft& fft,
                   std::span<const cplx> c, std::span<cplx> out);

void project_magnitude(std::span<const cplx> c, std::span<const double> s, std::span<cplx> out);

}  // namespace serial

namespace parallel {

void dgt_analysis(const GaborLattice& lat, std::span<const double> window, const Fft& fft,
                  std::span<const cplx> x, std::span<cplx> out);

void dgt_synthesis(const GaborLattice& lat, std::span<const double> window, const Fft& fft,
                   std::span<const cplx> c, std::span<cplx> out);

void project_magnitude(std::span<const cplx> c, std::span<const double> s, std::span<cplx> out);

}  // namespace parallel

inline void dgt_analysis(Execution ex, const GaborLattice& lat, std::span<const double> window,
                         const Fft& fft, std::span<const cplx> x, std::span<cplx> out) {
  if (ex == Execution::parallel)
    parallel::dgt_analysis(lat, window, fft, x, out);
  else
    serial::dgt_analysis(lat, window, fft, x, out);
}

inline void dgt_synthesis(Execution ex, const GaborLattice& lat, std::span<const double> window,
                          const Fft& fft, std::span<const cplx> c, std::span<cplx> out) {
  if (ex == Execution::parallel)
    parallel::dgt_synthesis(lat, window, fft, c, out);
  else
    serial::dgt_synthesis(lat, window, fft, c, out);
}

inline void project_magnitude(Execution ex, std::span<const cplx> c, std::span<const double> s,
                              std::span<cplx> out) {
  if (ex == Execution::parallel)
    parallel::project_magnitude(c, s, out);
  else
    serial::project_magnitude(c, s, out);
}

/// Scalar body of the magnitude projection, shared by both kernel flavours.
inline cplx rescale_to_magnitude(cplx c, double s) {
  if (c == cplx(0.0, 0.0)) return {s, 0.0};
  return c * (s / std::abs(c));
}

}  // namespace agla::kernels
