#pragma once

// Sufficient parameter conditions under which the accelerated iteration has
// the descent property
//   d^2(c_n) + K1 dt_n^2 <= d^2(c_{n-1}) + K2 dt_{n-1}^2,  K1 > K2 > 0.

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "agla/types.hpp"

namespace agla {

enum class GammaRegime { gamma_le_1, gamma_in_1_2, invalid };

std::string to_string(GammaRegime r);

struct GateOptions {
  /// Admit alpha == 0. K2 degenerates to a non-positive value there, so the
  /// Lyapunov monitor carries no information and should be disabled.
  bool allow_zero_alpha = false;
};

struct GateVerdict {
  bool cond1_ok = false;
  /// Strict upper bound on alpha; present iff cond1_ok.
  std::optional<double> alpha_bound;
  bool alpha_ok = false;
  /// Present iff the gate passes.
  std::optional<double> k1;
  std::optional<double> k2;
  GammaRegime regime = GammaRegime::invalid;

  bool passes() const { return cond1_ok && alpha_ok; }
};

class Cond1Violated : public Error {
public:
  using Error::Error;
};

class GateFailed : public Error {
public:
  using Error::Error;
};

/// 0 < gamma < 2 and 0 <= 2 beta |1 - gamma| < 2 - gamma.
bool check_cond1(double beta, double gamma);

/// Upper bound on alpha for a (beta, gamma) pair satisfying check_cond1:
///   (1 - 1/gamma) beta + 1/gamma - 1/2      for 0 < gamma <= 1,
///   1 / (2 beta (gamma - 1) + gamma) - 1/2  for 1 < gamma < 2.
/// Throws Cond1Violated otherwise.
double alpha_bound(double beta, double gamma);

/// The raw K1/K2 expressions of the regime selected by gamma, without any
/// validity check. Used where a Lyapunov value is wanted for arbitrary
/// parameters.
std::pair<double, double> descent_constants_unchecked(double alpha, double beta, double gamma);

/// (K1, K2) for a gate-passing triple; throws GateFailed otherwise.
std::pair<double, double> descent_constants(double alpha, double beta, double gamma,
                                            const GateOptions& opts = {});

GateVerdict gate(double alpha, double beta, double gamma, const GateOptions& opts = {});

/// d2 + K2 * dt^2.
double lyapunov(double d2, double delta_t, double k2);

/// ||tau a + sigma b||^2 and
/// (tau + sigma) tau ||a||^2 + (tau + sigma) sigma ||b||^2 - tau sigma ||a - b||^2.
std::pair<double, double> parallelogram_identity(std::span<const cplx> a, std::span<const cplx> b,
                                                 double tau, double sigma);

struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Largest admissible alpha sampled over a (beta, gamma) lattice.
struct AlphaGrid {
  std::vector<double> betas;
  std::vector<double> gammas;
  /// cells[i][j] for betas[i], gammas[j]; empty where cond1 fails.
  std::vector<std::vector<std::optional<double>>> cells;

  void write_csv(std::ostream& os) const;
};

/// Samples nodes lo, lo + step, ..., up to hi (inclusive within step/2) on
/// each axis. Node values are snapped to 12 decimals so decimal steps land
/// on exact grid values such as gamma = 1.
AlphaGrid alpha_grid(ParamRange beta, ParamRange gamma, double step);

std::vector<double> grid_axis(ParamRange range, double step);

}  // namespace agla
