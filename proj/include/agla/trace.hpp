#pragma once

#include <cstddef>

namespace agla {

/// Per-iteration diagnostics of a solver run. Row n describes the iterate c_n;
/// y_n = P_C1(P_C2(c_n)).
struct TraceRecord {
  std::size_t n = 0;
  /// d_C2(c_n)^2
  double d2 = 0.0;
  /// ||t_n - t_{n-1}|| (||c_n - c_{n-1}|| for non-inertial solvers), 0 at n = 0.
  double delta_t = 0.0;
  /// d2 + K2 delta_t^2
  double lyapunov = 0.0;
  /// ||y_n - c_n||
  double residual = 0.0;
  /// SSNR of the signal T^+ c_n.
  double ssnr_c = 0.0;
  /// SSNR of the signal T^+ y_n.
  double ssnr_y = 0.0;
  /// c_n lies in the pole set D.
  bool pole_hit = false;
  /// d_C2(y_n)^2. Kept in memory for audits, not exported.
  double d2_y = 0.0;
};

}  // namespace agla
