#include "agla/linops.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace agla {

namespace detail {

void TransformBackend::project_range(std::span<const cplx> c, std::span<cplx> out) const {
  SignalVec x(signal_length());
  synthesize(c, x);
  analyze(x, out);
}

namespace {

using MatrixXcdR = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VecMap = Eigen::Map<const Eigen::VectorXcd>;
using VecMapMut = Eigen::Map<Eigen::VectorXcd>;

// Pseudo-inverse through a thin QR factorization T = QR, cached at build time:
// T^+ = R^{-1} Q^*, T T^+ = Q Q^*.
class DenseBackend final : public TransformBackend {
public:
  DenseBackend(Eigen::MatrixXcd t) : t_(std::move(t)) {
    const auto rows = t_.rows();
    const auto cols = t_.cols();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(t_);
    q_ = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
    r_ = qr.matrixQR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
  }

  TransformKind kind() const override { return TransformKind::dense; }
  std::size_t signal_length() const override { return static_cast<std::size_t>(t_.cols()); }
  std::size_t coefficient_count() const override { return static_cast<std::size_t>(t_.rows()); }

  void analyze(std::span<const cplx> x, std::span<cplx> out) const override {
    VecMapMut(out.data(), t_.rows()).noalias() = t_ * VecMap(x.data(), t_.cols());
  }

  void synthesize(std::span<const cplx> c, std::span<cplx> out) const override {
    Eigen::VectorXcd qc = q_.adjoint() * VecMap(c.data(), t_.rows());
    VecMapMut(out.data(), t_.cols()) = r_.triangularView<Eigen::Upper>().solve(qc);
  }

  void project_range(std::span<const cplx> c, std::span<cplx> out) const override {
    Eigen::VectorXcd qc = q_.adjoint() * VecMap(c.data(), t_.rows());
    VecMapMut(out.data(), t_.rows()).noalias() = q_ * qc;
  }

private:
  Eigen::MatrixXcd t_;
  Eigen::MatrixXcd q_;
  Eigen::MatrixXcd r_;
};

// Frame operator S = T^* T of a Gabor system in Walnut form: S couples only
// samples congruent modulo the channel count, so it is stored as
// L/channels diagonals, diag[k][l] = S[l, l + k*channels].
struct WalnutOperator {
  std::size_t length;
  std::size_t channels;
  std::vector<RealVec> diag;

  WalnutOperator(const kernels::GaborLattice& lat, std::span<const double> g)
      : length(lat.length), channels(lat.channels) {
    const std::size_t L = lat.length;
    const std::size_t blocks = L / lat.channels;
    diag.assign(blocks, RealVec(L, 0.0));
    for (std::size_t k = 0; k < blocks; ++k) {
      for (std::size_t l = 0; l < L; ++l) {
        double acc = 0.0;
        for (std::size_t n = 0; n < lat.frames(); ++n) {
          const std::size_t shift = n * lat.hop;
          acc += g[(l + L - shift) % L] * g[(l + k * lat.channels + L - shift) % L];
        }
        diag[k][l] = static_cast<double>(lat.channels) * acc;
      }
    }
  }

  void apply(std::span<const double> f, std::span<double> out) const {
    for (std::size_t l = 0; l < length; ++l) {
      double acc = 0.0;
      for (std::size_t k = 0; k < diag.size(); ++k)
        acc += diag[k][l] * f[(l + k * channels) % length];
      out[l] = acc;
    }
  }

  // Extreme eigenvalues over the channels independent blocks.
  FrameBounds bounds() const {
    const std::size_t q = diag.size();
    FrameBounds fb{std::numeric_limits<double>::infinity(), 0.0};
    Eigen::MatrixXd block(q, q);
    for (std::size_t r = 0; r < channels; ++r) {
      for (std::size_t p = 0; p < q; ++p) {
        for (std::size_t j = 0; j < q; ++j) {
          const std::size_t row = r + p * channels;
          const std::size_t k = (j + q - p) % q;
          block(p, j) = diag[k][row];
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block, Eigen::EigenvaluesOnly);
      fb.lower = std::min(fb.lower, es.eigenvalues().minCoeff());
      fb.upper = std::max(fb.upper, es.eigenvalues().maxCoeff());
    }
    return fb;
  }
};

// Conjugate gradient on the symmetric positive definite frame operator.
RealVec solve_frame_operator(const WalnutOperator& s, std::span<const double> rhs, double tol) {
  const std::size_t n = rhs.size();
  RealVec x(n, 0.0), r(rhs.begin(), rhs.end()), p = r, sp(n);
  auto dot = [](std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
  };
  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  double rr = dot(r, r);
  for (std::size_t it = 0; it < 10 * n + 100 && std::sqrt(rr) > tol * rhs_norm; ++it) {
    s.apply(p, sp);
    const double step = rr / dot(p, sp);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += step * p[i];
      r[i] -= step * sp[i];
    }
    const double rr_next = dot(r, r);
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + (rr_next / rr) * p[i];
    rr = rr_next;
  }
  // Recompute the true residual; CG recursion drifts for ill-conditioned frames.
  s.apply(x, sp);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) res += (rhs[i] - sp[i]) * (rhs[i] - sp[i]);
  if (std::sqrt(res) > 1e3 * tol * rhs_norm)
    throw NotAFrame("canonical dual: conjugate gradient did not reach tolerance");
  return x;
}

RealVec rectangular_window(std::size_t length, std::size_t support) {
  RealVec g(length, 0.0);
  const auto half = static_cast<std::ptrdiff_t>(support / 2);
  const auto L = static_cast<std::ptrdiff_t>(length);
  for (std::ptrdiff_t d = -half; d < static_cast<std::ptrdiff_t>(support) - half; ++d)
    g[static_cast<std::size_t>((d + L) % L)] = 1.0;
  return g;
}

void normalize(RealVec& g) {
  double acc = 0.0;
  for (double v : g) acc += v * v;
  const double scale = 1.0 / std::sqrt(acc);
  for (double& v : g) v *= scale;
}

class GaborBackend final : public TransformBackend {
public:
  GaborBackend(kernels::GaborLattice lat, RealVec window, kernels::Execution exec)
      : lat_(lat), window_(std::move(window)), fft_(lat.channels), exec_(exec) {
    WalnutOperator s(lat_, window_);
    bounds_ = s.bounds();
    if (!(bounds_.lower > 1e-12 * bounds_.upper))
      throw NotAFrame("frame operator is not invertible (lower frame bound " +
                      std::to_string(bounds_.lower) + ")");
    dual_ = solve_frame_operator(s, window_, 1e-12);
  }

  TransformKind kind() const override { return TransformKind::gabor; }
  std::size_t signal_length() const override { return lat_.length; }
  std::size_t coefficient_count() const override { return lat_.coefficients(); }

  void analyze(std::span<const cplx> x, std::span<cplx> out) const override {
    kernels::dgt_analysis(exec_, lat_, window_, fft_, x, out);
  }

  void synthesize(std::span<const cplx> c, std::span<cplx> out) const override {
    kernels::dgt_synthesis(exec_, lat_, dual_, fft_, c, out);
  }

  const kernels::GaborLattice* lattice() const override { return &lat_; }
  std::span<const double> window() const override { return window_; }
  std::span<const double> dual_window() const override { return dual_; }
  FrameBounds frame_bounds() const override { return bounds_; }

private:
  kernels::GaborLattice lat_;
  RealVec window_;
  RealVec dual_;
  kernels::Fft fft_;
  kernels::Execution exec_;
  FrameBounds bounds_;
};

}  // namespace
}  // namespace detail

LinearTransform::LinearTransform(std::shared_ptr<const detail::TransformBackend> backend)
    : backend_(std::move(backend)) {}

TransformKind LinearTransform::kind() const { return backend_->kind(); }
std::size_t LinearTransform::signal_length() const { return backend_->signal_length(); }
std::size_t LinearTransform::coefficient_count() const { return backend_->coefficient_count(); }

void LinearTransform::analyze(std::span<const cplx> x, std::span<cplx> out) const {
  require_length("analyze: signal", signal_length(), x.size());
  require_length("analyze: output", coefficient_count(), out.size());
  backend_->analyze(x, out);
}

void LinearTransform::synthesize(std::span<const cplx> c, std::span<cplx> out) const {
  require_length("synthesize: coefficients", coefficient_count(), c.size());
  require_length("synthesize: output", signal_length(), out.size());
  backend_->synthesize(c, out);
}

void LinearTransform::project_range(std::span<const cplx> c, std::span<cplx> out) const {
  require_length("project_range: coefficients", coefficient_count(), c.size());
  require_length("project_range: output", coefficient_count(), out.size());
  backend_->project_range(c, out);
}

CoefVec LinearTransform::analyze(std::span<const cplx> x) const {
  CoefVec out(coefficient_count());
  analyze(x, out);
  return out;
}

SignalVec LinearTransform::synthesize(std::span<const cplx> c) const {
  SignalVec out(signal_length());
  synthesize(c, out);
  return out;
}

CoefVec LinearTransform::project_range(std::span<const cplx> c) const {
  CoefVec out(coefficient_count());
  project_range(c, out);
  return out;
}

CoefVec LinearTransform::reflect_range(std::span<const cplx> c) const {
  CoefVec out = project_range(c);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * out[i] - c[i];
  return out;
}

const kernels::GaborLattice* LinearTransform::lattice() const { return backend_->lattice(); }
std::span<const double> LinearTransform::window() const { return backend_->window(); }
std::span<const double> LinearTransform::dual_window() const { return backend_->dual_window(); }
FrameBounds LinearTransform::frame_bounds() const { return backend_->frame_bounds(); }

LinearTransform make_dense(std::span<const cplx> row_major, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw BadShape("dense transform: empty matrix");
  if (rows < cols)
    throw BadShape("dense transform: need M >= L, got " + std::to_string(rows) + "x" +
                   std::to_string(cols));
  if (row_major.size() != rows * cols)
    throw BadShape("dense transform: " + std::to_string(row_major.size()) +
                   " entries for shape " + std::to_string(rows) + "x" + std::to_string(cols));

  Eigen::MatrixXcd t = Eigen::Map<const detail::MatrixXcdR>(row_major.data(),
                                                            static_cast<Eigen::Index>(rows),
                                                            static_cast<Eigen::Index>(cols));
  if (!t.allFinite()) throw BadShape("dense transform: non-finite entry");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t);
  const auto& sv = svd.singularValues();
  const double smax = sv.maxCoeff();
  const double smin = sv.minCoeff();
  if (!(smax > 0.0) || smin < 1e-12 * smax)
    throw RankDeficient("dense transform: smallest singular value " + std::to_string(smin) +
                        " below 1e-12 relative to " + std::to_string(smax));
  return LinearTransform(std::make_shared<detail::DenseBackend>(std::move(t)));
}

RealVec periodic_gaussian(std::size_t length, double tfr) {
  const double L = static_cast<double>(length);
  const double width2 = L * tfr;
  // exp(-pi (l + kL)^2 / width2) is below 1e-300 once |l + kL| exceeds this.
  const auto reach = static_cast<long>(std::ceil(std::sqrt(700.0 * width2 / std::numbers::pi) / L)) + 1;
  RealVec g(length, 0.0);
  for (std::size_t l = 0; l < length; ++l) {
    double acc = 0.0;
    for (long k = -reach; k <= reach; ++k) {
      const double d = static_cast<double>(l) + static_cast<double>(k) * L;
      acc += std::exp(-std::numbers::pi * d * d / width2);
    }
    g[l] = acc;
  }
  return g;
}

LinearTransform make_gabor(std::size_t length, std::size_t hop, std::size_t channels,
                           WindowKind window, kernels::Execution exec) {
  if (length == 0 || hop == 0 || channels == 0)
    throw BadLattice("gabor: L, hop and channels must be positive");
  if (length % hop != 0)
    throw BadLattice("gabor: hop " + std::to_string(hop) + " does not divide L " +
                     std::to_string(length));
  if (length % channels != 0)
    throw BadLattice("gabor: channel count " + std::to_string(channels) +
                     " does not divide L " + std::to_string(length));
  if (channels < hop)
    throw NotAFrame("gabor: redundancy " + std::to_string(double(channels) / double(hop)) +
                    " < 1, lattice is undersampled");

  const kernels::GaborLattice lat{length, hop, channels};
  RealVec g = window == WindowKind::gaussian
                  ? periodic_gaussian(length, double(hop) * double(channels) / double(length))
                  : detail::rectangular_window(length, channels);
  detail::normalize(g);
  return LinearTransform(std::make_shared<detail::GaborBackend>(lat, std::move(g), exec));
}

}  // namespace agla
