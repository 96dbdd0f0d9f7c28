#include "agla/magproj.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace agla {

MagnitudeSpec::MagnitudeSpec(RealVec s) : s_(std::move(s)) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s_.size(); ++i) {
    if (!std::isfinite(s_[i]) || s_[i] < 0.0)
      throw InvalidParameter("magnitude " + std::to_string(i) + " is negative or not finite");
    acc += s_[i] * s_[i];
  }
  norm_ = std::sqrt(acc);
}

void project_magnitude(std::span<const cplx> c, const MagnitudeSpec& s, std::span<cplx> out,
                       kernels::Execution exec) {
  require_length("project_magnitude", s.size(), c.size());
  require_length("project_magnitude: output", s.size(), out.size());
  kernels::project_magnitude(exec, c, s.values(), out);
}

CoefVec project_magnitude(std::span<const cplx> c, const MagnitudeSpec& s, kernels::Execution exec) {
  CoefVec out(c.size());
  project_magnitude(c, s, out, exec);
  return out;
}

double distance_c2_squared(std::span<const cplx> c, const MagnitudeSpec& s) {
  require_length("distance_c2", s.size(), c.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = std::abs(c[i]) - s[i];
    acc += d * d;
  }
  return acc;
}

double distance_c2(std::span<const cplx> c, const MagnitudeSpec& s) {
  return std::sqrt(distance_c2_squared(c, s));
}

double default_pole_tolerance(std::span<const cplx> c) {
  double peak = 0.0;
  for (const auto& z : c) peak = std::max(peak, std::abs(z));
  return 1e-12 * peak;
}

PoleReport in_pole_set(std::span<const cplx> c, const MagnitudeSpec& s, double tol) {
  require_length("in_pole_set", s.size(), c.size());
  if (tol < 0.0) throw InvalidParameter("pole tolerance must be nonnegative");
  PoleReport report;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (std::abs(c[i]) <= tol && s[i] > tol) report.indices.push_back(i);
  report.hit = !report.indices.empty();
  return report;
}

PoleReport in_pole_set(std::span<const cplx> c, const MagnitudeSpec& s) {
  return in_pole_set(c, s, default_pole_tolerance(c));
}

CoefVec reflect_magnitude(std::span<const cplx> c, const MagnitudeSpec& s) {
  CoefVec out = project_magnitude(c, s);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * out[i] - c[i];
  return out;
}

}  // namespace agla
