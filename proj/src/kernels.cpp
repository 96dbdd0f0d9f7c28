#include "agla/kernels.hpp"

#include <fftw3.h>
#include <omp.h>

#include <mutex>
#include <vector>

namespace agla::kernels {

namespace {

// The FFTW planner is not reentrant; plan execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const cplx* p) { return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p)); }

// Folds the windowed signal of frame `n` onto `channels` bins.
void fold_frame(const GaborLattice& lat, std::span<const double> window, std::span<const cplx> x,
                std::size_t n, cplx* folded) {
  const std::size_t L = lat.length;
  const std::size_t M = lat.channels;
  for (std::size_t j = 0; j < M; ++j) folded[j] = cplx(0.0, 0.0);
  std::size_t gi = (L - (n * lat.hop) % L) % L;
  std::size_t j = 0;
  for (std::size_t l = 0; l < L; ++l) {
    folded[j] += x[l] * window[gi];
    if (++gi == L) gi = 0;
    if (++j == M) j = 0;
  }
}

// Overlap-add of all frames onto sample l, frames visited in ascending order.
cplx gather_sample(const GaborLattice& lat, std::span<const double> window,
                   const std::vector<cplx>& spectra, std::size_t l) {
  const std::size_t L = lat.length;
  const std::size_t M = lat.channels;
  const std::size_t j = l % M;
  cplx acc(0.0, 0.0);
  std::size_t gi = l;
  for (std::size_t n = 0; n < lat.frames(); ++n) {
    acc += window[gi] * spectra[n * M + j];
    gi = gi >= lat.hop ? gi - lat.hop : gi + L - lat.hop;
  }
  return acc;
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  std::vector<cplx> a(n), b(n);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const int len = static_cast<int>(n);
  forward_plan_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void Fft::forward(const cplx* in, cplx* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(in), as_fftw(out));
}

void Fft::backward(const cplx* in, cplx* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(in), as_fftw(out));
}

namespace serial {

void dgt_analysis(const GaborLattice& lat, std::span<const double> window, const Fft& fft,
                  std::span<const cplx> x, std::span<cplx> out) {
  std::vector<cplx> folded(lat.channels);
  for (std::size_t n = 0; n < lat.frames(); ++n) {
    fold_frame(lat, window, x, n, folded.data());
    fft.forward(folded.data(), out.data() + n * lat.channels);
  }
}

void dgt_synthesis(const GaborLattice& lat, std::span<const double> window, const Fft& fft,
                   std::span<const cplx> c, std::span<cplx> out) {
  std::vector<cplx> spectra(lat.coefficients());
  for (std::size_t n = 0; n < lat.frames(); ++n)
    fft.backward(c.data() + n * lat.channels, spectra.data() + n * lat.channels);
  for (std::size_t l = 0; l < lat.length; ++l) out[l] = gather_sample(lat, window, spectra, l);
}

void project_magnitude(std::span<const cplx> c, std::span<const double> s, std::span<cplx> out) {
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = rescale_to_magnitude(c[i], s[i]);
}

}  // namespace serial

namespace parallel {

void dgt_analysis(const GaborLattice& lat, std::span<const double> window, const Fft& fft,
                  std::span<const cplx> x, std::span<cplx> out) {
  const auto frames = static_cast<std::ptrdiff_t>(lat.frames());
#pragma omp parallel
  {
    std::vector<cplx> folded(lat.channels);
#pragma omp for schedule(static)
    for (std::ptrdiff_t n = 0; n < frames; ++n) {
      fold_frame(lat, window, x, static_cast<std::size_t>(n), folded.data());
      fft.forward(folded.data(), out.data() + n * lat.channels);
    }
  }
}

void dgt_synthesis(const GaborLattice& lat, std::span<const double> window, const Fft& fft,
                   std::span<const cplx> c, std::span<cplx> out) {
  std::vector<cplx> spectra(lat.coefficients());
  const auto frames = static_cast<std::ptrdiff_t>(lat.frames());
  const auto length = static_cast<std::ptrdiff_t>(lat.length);
#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (std::ptrdiff_t n = 0; n < frames; ++n)
      fft.backward(c.data() + n * lat.channels, spectra.data() + n * lat.channels);
#pragma omp for schedule(static)
    for (std::ptrdiff_t l = 0; l < length; ++l)
      out[l] = gather_sample(lat, window, spectra, static_cast<std::size_t>(l));
  }
}

void project_magnitude(std::span<const cplx> c, std::span<const double> s, std::span<cplx> out) {
  const auto size = static_cast<std::ptrdiff_t>(c.size());
#pragma omp parallel for schedule(static) if (size > 4096)
  for (std::ptrdiff_t i = 0; i < size; ++i) out[i] = rescale_to_magnitude(c[i], s[i]);
}

}  // namespace parallel

}  // namespace agla::kernels
