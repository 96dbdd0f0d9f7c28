#pragma once

// Injective linear transforms T : C^L -> C^M together with the pseudo-inverse
// synthesis T^+ and the orthogonal projection T T^+ onto the range of T.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "agla/kernels.hpp"
#include "agla/types.hpp"

namespace agla {

enum class TransformKind { dense, gabor };
enum class WindowKind { gaussian, rectangular };

/// Frame bounds of a Gabor system (extreme eigenvalues of the frame operator).
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

namespace detail {
class TransformBackend;
}

/// Immutable handle to a full-column-rank transform. Copies share the backend
/// and may be used concurrently.
class LinearTransform {
public:
  TransformKind kind() const;
  /// Signal length L.
  std::size_t signal_length() const;
  /// Coefficient count M.
  std::size_t coefficient_count() const;

  void analyze(std::span<const cplx> x, std::span<cplx> out) const;
  void synthesize(std::span<const cplx> c, std::span<cplx> out) const;
  void project_range(std::span<const cplx> c, std::span<cplx> out) const;

  CoefVec analyze(std::span<const cplx> x) const;
  SignalVec synthesize(std::span<const cplx> c) const;
  CoefVec project_range(std::span<const cplx> c) const;
  /// 2 P(c) - c.
  CoefVec reflect_range(std::span<const cplx> c) const;

  /// Gabor-only accessors; empty for dense transforms.
  const kernels::GaborLattice* lattice() const;
  std::span<const double> window() const;
  std::span<const double> dual_window() const;
  FrameBounds frame_bounds() const;

  explicit LinearTransform(std::shared_ptr<const detail::TransformBackend> backend);

private:
  std::shared_ptr<const detail::TransformBackend> backend_;
};

/// Builds a dense transform from row-major complex entries (M rows, L columns).
/// Throws BadShape when M < L or the entry count is inconsistent, and
/// RankDeficient when sigma_min < 1e-12 sigma_max.
LinearTransform make_dense(std::span<const cplx> row_major, std::size_t rows, std::size_t cols);

/// Builds a discrete Gabor transform on a cyclic signal of length L with hop
/// `hop` and `channels` frequency bins. Requires hop | L and channels | L.
/// The window is full length, periodized and normalized to unit l2 norm.
LinearTransform make_gabor(std::size_t length, std::size_t hop, std::size_t channels,
                           WindowKind window = WindowKind::gaussian,
                           kernels::Execution exec = kernels::Execution::parallel);

/// Periodized Gaussian of length L whose time/frequency spread ratio is
/// `tfr`; tfr = hop * channels / L matches it to the lattice.
RealVec periodic_gaussian(std::size_t length, double tfr);

inline CoefVec analyze(const LinearTransform& t, std::span<const cplx> x) { return t.analyze(x); }
inline SignalVec synthesize(const LinearTransform& t, std::span<const cplx> c) {
  return t.synthesize(c);
}
inline CoefVec project_range(const LinearTransform& t, std::span<const cplx> c) {
  return t.project_range(c);
}
inline CoefVec reflect_range(const LinearTransform& t, std::span<const cplx> c) {
  return t.reflect_range(c);
}

namespace detail {

class TransformBackend {
public:
  virtual ~TransformBackend() = default;
  virtual TransformKind kind() const = 0;
  virtual std::size_t signal_length() const = 0;
  virtual std::size_t coefficient_count() const = 0;
  virtual void analyze(std::span<const cplx> x, std::span<cplx> out) const = 0;
  virtual void synthesize(std::span<const cplx> c, std::span<cplx> out) const = 0;
  virtual void project_range(std::span<const cplx> c, std::span<cplx> out) const;

  virtual const kernels::GaborLattice* lattice() const { return nullptr; }
  virtual std::span<const double> window() const { return {}; }
  virtual std::span<const double> dual_window() const { return {}; }
  virtual FrameBounds frame_bounds() const { return {}; }
};

}  // namespace detail

}  // namespace agla
