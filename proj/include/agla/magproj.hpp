#pragma once

// The magnitude-constraint set C2 = { c : |c_i| = s_i for all i }.

#include <cstddef>
#include <span>
#include <vector>

#include "agla/kernels.hpp"
#include "agla/types.hpp"

namespace agla {

/// Target magnitudes s; every entry finite and nonnegative.
class MagnitudeSpec {
public:
  MagnitudeSpec() = default;
  explicit MagnitudeSpec(RealVec s);

  std::size_t size() const { return s_.size(); }
  std::span<const double> values() const { return s_; }
  double operator[](std::size_t i) const { return s_[i]; }
  double norm() const { return norm_; }

private:
  RealVec s_;
  double norm_ = 0.0;
};

/// Closed-form nearest point in C2: s_i c_i / |c_i|, or s_i when c_i == 0 exactly.
CoefVec project_magnitude(std::span<const cplx> c, const MagnitudeSpec& s,
                          kernels::Execution exec = kernels::Execution::parallel);
void project_magnitude(std::span<const cplx> c, const MagnitudeSpec& s, std::span<cplx> out,
                       kernels::Execution exec = kernels::Execution::parallel);

/// || |c| - s ||, the distance from c to C2.
double distance_c2(std::span<const cplx> c, const MagnitudeSpec& s);
double distance_c2_squared(std::span<const cplx> c, const MagnitudeSpec& s);

struct PoleReport {
  bool hit = false;
  std::vector<std::size_t> indices;
};

/// Membership in the pole set D (projection not unique): some |c_i| <= tol
/// while s_i > tol.
PoleReport in_pole_set(std::span<const cplx> c, const MagnitudeSpec& s, double tol);
/// Same with the default diagnostic band 1e-12 * max_i |c_i|.
PoleReport in_pole_set(std::span<const cplx> c, const MagnitudeSpec& s);
double default_pole_tolerance(std::span<const cplx> c);

/// 2 P_C2(c) - c.
CoefVec reflect_magnitude(std::span<const cplx> c, const MagnitudeSpec& s);

}  // namespace agla
