#pragma once

// Reconstruction quality metrics and the brute-force oracles the test suite
// checks the closed-form machinery against.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "agla/linops.hpp"
#include "agla/magproj.hpp"
#include "agla/trace.hpp"
#include "agla/types.hpp"

namespace agla {

/// SSNR value reported for an exact magnitude match.
inline constexpr double kSsnrCap = 310.0;

/// -10 log10(error_norm / target_norm), capped at kSsnrCap. Note the ratio of
/// norms, not of squared norms; the 20 log10 convention is not used.
double ssnr_from_error(double error_norm, double target_norm);

/// Spectrogram SNR of a signal: -10 log10(|| |Tx| - s || / ||s||).
/// Throws InvalidParameter when ||s|| == 0.
double ssnr(const LinearTransform& t, std::span<const cplx> x, const MagnitudeSpec& s);

/// ||P_C1(P_C2(c)) - c||; zero exactly at fixed points of alternating projections.
double fixed_point_residual(const LinearTransform& t, std::span<const cplx> c,
                            const MagnitudeSpec& s);

/// Grid-search stand-in for the magnitude projection: component-wise the
/// best of s_i exp(2 pi i k / grid_points), k = 0..grid_points-1. Ties keep
/// the smallest k (exact ties only). Requires grid_points >= 8.
CoefVec oracle_nearest_c2(std::span<const cplx> c, const MagnitudeSpec& s, std::size_t grid_points);

struct DescentAudit {
  bool passed = true;
  std::optional<std::size_t> first_violation;
  /// max over audited n of lhs - rhs (negative when every step strictly descends).
  double max_slack = -std::numeric_limits<double>::infinity();
  std::size_t checked = 0;

  std::string to_json() const;
};

/// Checks d2_n + K1 dt_n^2 <= d2_{n-1} + K2 dt_{n-1}^2 + tolerance for every
/// trace row n >= first_row (rows are matched by position).
DescentAudit descent_audit(std::span<const TraceRecord> trace, double k1, double k2,
                           double tolerance = 1e-9, std::size_t first_row = 1);

}  // namespace agla
