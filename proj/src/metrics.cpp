#include "agla/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace agla {

double ssnr_from_error(double error_norm, double target_norm) {
  if (!(target_norm > 0.0)) throw InvalidParameter("ssnr: target magnitudes have zero norm");
  const double ratio = error_norm / target_norm;
  if (ratio == 0.0) return kSsnrCap;
  return std::min(-10.0 * std::log10(ratio), kSsnrCap);
}

double ssnr(const LinearTransform& t, std::span<const cplx> x, const MagnitudeSpec& s) {
  const CoefVec c = t.analyze(x);
  return ssnr_from_error(distance_c2(c, s), s.norm());
}

double fixed_point_residual(const LinearTransform& t, std::span<const cplx> c,
                            const MagnitudeSpec& s) {
  const CoefVec y = t.project_range(project_magnitude(c, s));
  return distance(y, c);
}

CoefVec oracle_nearest_c2(std::span<const cplx> c, const MagnitudeSpec& s, std::size_t grid_points) {
  require_length("oracle_nearest_c2", s.size(), c.size());
  if (grid_points < 8) throw InvalidParameter("oracle_nearest_c2: need at least 8 grid points");
  std::vector<cplx> phases(grid_points);
  for (std::size_t k = 0; k < grid_points; ++k)
    phases[k] = std::polar(1.0, 2.0 * std::numbers::pi * double(k) / double(grid_points));

  CoefVec out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    cplx best_point;
    for (const auto& p : phases) {
      const cplx candidate = s[i] * p;
      const double d = std::norm(c[i] - candidate);
      if (d < best) {
        best = d;
        best_point = candidate;
      }
    }
    out[i] = best_point;
  }
  return out;
}

DescentAudit descent_audit(std::span<const TraceRecord> trace, double k1, double k2,
                           double tolerance, std::size_t first_row) {
  DescentAudit audit;
  for (std::size_t n = std::max<std::size_t>(first_row, 1); n < trace.size(); ++n) {
    const auto& cur = trace[n];
    const auto& prev = trace[n - 1];
    const double lhs = cur.d2 + k1 * cur.delta_t * cur.delta_t;
    const double rhs = prev.d2 + k2 * prev.delta_t * prev.delta_t;
    const double slack = lhs - rhs;
    audit.max_slack = std::max(audit.max_slack, slack);
    ++audit.checked;
    if (!(slack <= tolerance) && audit.passed) {
      audit.passed = false;
      audit.first_violation = cur.n;
    }
  }
  return audit;
}

std::string DescentAudit::to_json() const {
  nlohmann::json j;
  j["passed"] = passed;
  j["first_violation"] = first_violation ? nlohmann::json(*first_violation) : nlohmann::json();
  j["max_slack"] = checked > 0 ? nlohmann::json(max_slack) : nlohmann::json();
  j["checked"] = checked;
  return j.dump(2);
}

}  // namespace agla
