#include "agla/guarantees.hpp"

#include <cmath>
#include <cstdio>

namespace agla {

std::string to_string(GammaRegime r) {
  switch (r) {
    case GammaRegime::gamma_le_1:
      return "gamma_le_1";
    case GammaRegime::gamma_in_1_2:
      return "gamma_in_1_2";
    case GammaRegime::invalid:
      break;
  }
  return "invalid";
}

namespace {

GammaRegime regime_of(double gamma) {
  if (gamma > 0.0 && gamma <= 1.0) return GammaRegime::gamma_le_1;
  if (gamma > 1.0 && gamma < 2.0) return GammaRegime::gamma_in_1_2;
  return GammaRegime::invalid;
}

}  // namespace

bool check_cond1(double beta, double gamma) {
  if (!std::isfinite(beta) || !std::isfinite(gamma)) return false;
  if (!(gamma > 0.0 && gamma < 2.0)) return false;
  const double lhs = 2.0 * beta * std::abs(1.0 - gamma);
  return 0.0 <= lhs && lhs < 2.0 - gamma;
}

double alpha_bound(double beta, double gamma) {
  if (!check_cond1(beta, gamma))
    throw Cond1Violated("beta=" + std::to_string(beta) + ", gamma=" + std::to_string(gamma) +
                        " violates 0 < gamma < 2, 2 beta |1 - gamma| < 2 - gamma");
  if (gamma <= 1.0) return (1.0 - 1.0 / gamma) * beta + 1.0 / gamma - 0.5;
  return 1.0 / (2.0 * beta * (gamma - 1.0) + gamma) - 0.5;
}

std::pair<double, double> descent_constants_unchecked(double alpha, double beta, double gamma) {
  const double a = alpha, b = beta, g = gamma;
  const double w = (1.0 - g) / g;
  if (g <= 1.0) {
    const double k1 = w * (1.0 + 2.0 * a + a * a - b - a * b) + (1.0 / g) * (1.0 - a - a * a);
    const double k2 = w * (b - a * b + a * a) + (1.0 / g) * (a - a * a);
    return {k1, k2};
  }
  const double k1 = w * (1.0 + 2.0 * a + a * a + b + a * b) + (1.0 / g) * (1.0 - a - a * a);
  const double k2 = w * (a * a - b - 3.0 * a * b) + (1.0 / g) * (a - a * a);
  return {k1, k2};
}

GateVerdict gate(double alpha, double beta, double gamma, const GateOptions& opts) {
  GateVerdict v;
  v.regime = regime_of(gamma);
  v.cond1_ok = beta >= 0.0 && check_cond1(beta, gamma);
  if (!v.cond1_ok) return v;
  v.alpha_bound = alpha_bound(beta, gamma);
  const bool lower_ok = opts.allow_zero_alpha ? alpha >= 0.0 : alpha > 0.0;
  v.alpha_ok = std::isfinite(alpha) && lower_ok && alpha < *v.alpha_bound;
  if (v.alpha_ok) {
    const auto [k1, k2] = descent_constants_unchecked(alpha, beta, gamma);
    v.k1 = k1;
    v.k2 = k2;
  }
  return v;
}

std::pair<double, double> descent_constants(double alpha, double beta, double gamma,
                                            const GateOptions& opts) {
  const GateVerdict v = gate(alpha, beta, gamma, opts);
  if (!v.passes())
    throw GateFailed("(alpha, beta, gamma) = (" + std::to_string(alpha) + ", " +
                     std::to_string(beta) + ", " + std::to_string(gamma) +
                     ") is outside the convergence guarantee");
  return {*v.k1, *v.k2};
}

double lyapunov(double d2, double delta_t, double k2) { return d2 + k2 * delta_t * delta_t; }

std::pair<double, double> parallelogram_identity(std::span<const cplx> a, std::span<const cplx> b,
                                                 double tau, double sigma) {
  require_length("parallelogram_identity", a.size(), b.size());
  double lhs = 0.0, na = 0.0, nb = 0.0, nd = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    lhs += std::norm(tau * a[i] + sigma * b[i]);
    na += std::norm(a[i]);
    nb += std::norm(b[i]);
    nd += std::norm(a[i] - b[i]);
  }
  const double rhs = (tau + sigma) * tau * na + (tau + sigma) * sigma * nb - tau * sigma * nd;
  return {lhs, rhs};
}

std::vector<double> grid_axis(ParamRange range, double step) {
  if (!(step > 0.0) || !(range.hi >= range.lo))
    throw InvalidParameter("grid axis: need step > 0 and lo <= hi");
  std::vector<double> nodes;
  for (std::size_t j = 0;; ++j) {
    const double v = range.lo + static_cast<double>(j) * step;
    if (v > range.hi + 0.5 * step) break;
    nodes.push_back(std::round(v * 1e12) / 1e12);
  }
  return nodes;
}

AlphaGrid alpha_grid(ParamRange beta, ParamRange gamma, double step) {
  if (beta.lo < 0.0) throw InvalidParameter("alpha grid: beta must be nonnegative");
  AlphaGrid grid;
  grid.betas = grid_axis(beta, step);
  grid.gammas = grid_axis(gamma, step);
  if (grid.betas.size() < 2 || grid.gammas.size() < 2)
    throw InvalidParameter("alpha grid: need at least two nodes per axis");
  grid.cells.assign(grid.betas.size(), std::vector<std::optional<double>>(grid.gammas.size()));
  const auto rows = static_cast<std::ptrdiff_t>(grid.betas.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < grid.gammas.size(); ++j) {
      const double b = grid.betas[i], g = grid.gammas[j];
      if (check_cond1(b, g)) grid.cells[i][j] = alpha_bound(b, g);
    }
  }
  return grid;
}

void AlphaGrid::write_csv(std::ostream& os) const {
  char buf[64];
  os << "beta\\gamma";
  for (double g : gammas) {
    std::snprintf(buf, sizeof buf, "%.12g", g);
    os << ',' << buf;
  }
  os << '\n';
  for (std::size_t i = 0; i < betas.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", betas[i]);
    os << buf;
    for (const auto& cell : cells[i]) {
      os << ',';
      if (cell) {
        std::snprintf(buf, sizeof buf, "%.17g", *cell);
        os << buf;
      }
    }
    os << '\n';
  }
}

}  // namespace agla
