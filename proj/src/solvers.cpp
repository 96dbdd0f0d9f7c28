#include "agla/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "agla/guarantees.hpp"
#include "agla/metrics.hpp"

namespace agla {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::gla:
      return "gla";
    case Algorithm::fgla:
      return "fgla";
    case Algorithm::agla:
      return "agla";
    case Algorithm::raar:
      return "raar";
    case Algorithm::dm:
      return "dm";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  for (Algorithm a : {Algorithm::gla, Algorithm::fgla, Algorithm::agla, Algorithm::raar, Algorithm::dm})
    if (lower == to_string(a)) return a;
  throw InvalidParameter("unknown algorithm '" + name + "'");
}

void SolverParams::validate() const {
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (max_iters < 1) throw InvalidParameter("max_iters must be at least 1");
  if (stop_delta_t && !(*stop_delta_t >= 0.0))
    throw InvalidParameter("stop_delta_t must be nonnegative");
  switch (algorithm) {
    case Algorithm::gla:
      break;
    case Algorithm::fgla:
      if (!finite_nonneg(alpha)) throw InvalidParameter("fgla: alpha must be >= 0");
      break;
    case Algorithm::agla:
      if (!finite_nonneg(alpha)) throw InvalidParameter("agla: alpha must be >= 0");
      if (!finite_nonneg(beta)) throw InvalidParameter("agla: beta must be >= 0");
      if (!(std::isfinite(gamma) && gamma > 0.0)) throw InvalidParameter("agla: gamma must be > 0");
      break;
    case Algorithm::raar:
      if (!(lambda > 0.0 && lambda <= 1.0)) throw InvalidParameter("raar: lambda must lie in (0, 1]");
      break;
    case Algorithm::dm:
      if (!(std::isfinite(rho) && rho != 0.0)) throw InvalidParameter("dm: rho must be nonzero");
      break;
  }
}

IterateState make_inertial_state(const LinearTransform& t, std::span<const cplx> init) {
  IterateState st;
  st.c.assign(init.begin(), init.end());
  st.t = t.project_range(init);
  st.d = st.t;
  st.t_prev = st.t;
  return st;
}

CoefVec step_gla(const LinearTransform& t, const MagnitudeSpec& s, std::span<const cplx> c) {
  return t.project_range(project_magnitude(c, s));
}

void advance_inertial(IterateState& st, std::span<const cplx> y, double alpha, double beta,
                      double gamma) {
  const double keep = 1.0 - gamma;
  std::swap(st.t_prev, st.t);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const cplx t_new = keep * st.d[i] + gamma * y[i];
    const cplx step = t_new - st.t_prev[i];
    st.t[i] = t_new;
    st.c[i] = t_new + alpha * step;
    st.d[i] = t_new + beta * step;
  }
  ++st.n;
}

void step_agla(const LinearTransform& t, const MagnitudeSpec& s, IterateState& st, double alpha,
               double beta, double gamma) {
  const CoefVec y = step_gla(t, s, st.c);
  advance_inertial(st, y, alpha, beta, gamma);
}

void step_fgla(const LinearTransform& t, const MagnitudeSpec& s, IterateState& st, double alpha) {
  step_agla(t, s, st, alpha, 0.0, 1.0);
}

CoefVec step_raar(const LinearTransform& t, const MagnitudeSpec& s, std::span<const cplx> c,
                  double lambda) {
  const CoefVec p2 = project_magnitude(c, s);
  CoefVec r2(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) r2[i] = 2.0 * p2[i] - c[i];
  const CoefVec p1 = t.project_range(r2);
  CoefVec out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const cplx r1r2 = 2.0 * p1[i] - r2[i];
    out[i] = 0.5 * lambda * (c[i] + r1r2) + (1.0 - lambda) * p2[i];
  }
  return out;
}

CoefVec step_dm(const LinearTransform& t, const MagnitudeSpec& s, std::span<const cplx> c,
                double rho) {
  const std::size_t m = c.size();
  const CoefVec p2 = project_magnitude(c, s);
  const CoefVec p1 = t.project_range(c);
  CoefVec u(m), v(m);
  for (std::size_t i = 0; i < m; ++i) {
    u[i] = p2[i] + (p2[i] - c[i]) / rho;
    v[i] = p1[i] + (p1[i] - c[i]) / rho;
  }
  const CoefVec p1u = t.project_range(u);
  const CoefVec p2v = project_magnitude(v, s);
  CoefVec out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = c[i] + rho * (p1u[i] - p2v[i]);
  return out;
}

namespace {

bool all_finite(std::span<const cplx> v) {
  return std::all_of(v.begin(), v.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double trace_k2(const SolverParams& p, const Monitors& m) {
  if (m.lyapunov_k2) return *m.lyapunov_k2;
  if (p.algorithm == Algorithm::fgla || p.algorithm == Algorithm::agla) {
    const double beta = p.algorithm == Algorithm::fgla ? 0.0 : p.beta;
    const double gamma = p.algorithm == Algorithm::fgla ? 1.0 : p.gamma;
    const GateVerdict v = gate(p.alpha, beta, gamma);
    if (v.passes()) return *v.k2;
  }
  return 0.0;
}

class Recorder {
public:
  Recorder(const MagnitudeSpec& s, double k2, const Monitors& m, std::vector<TraceRecord>& out)
      : s_(s), k2_(k2), monitors_(m), out_(out) {}

  // `range_c` is P1(c_n), used for the SSNR of the synthesized signal.
  void record(std::size_t n, std::span<const cplx> c, std::span<const cplx> y,
              std::span<const cplx> range_c, double delta_t) {
    TraceRecord r;
    r.n = n;
    r.d2 = distance_c2_squared(c, s_);
    r.delta_t = delta_t;
    r.lyapunov = lyapunov(r.d2, delta_t, k2_);
    r.residual = distance(y, c);
    r.d2_y = distance_c2_squared(y, s_);
    r.ssnr_c = ssnr_from_error(distance_c2(range_c, s_), s_.norm());
    r.ssnr_y = ssnr_from_error(std::sqrt(r.d2_y), s_.norm());
    if (monitors_.track_poles) {
      const double tol = monitors_.pole_tolerance ? *monitors_.pole_tolerance
                                                  : default_pole_tolerance(c);
      r.pole_hit = in_pole_set(c, s_, tol).hit;
    }
    out_.push_back(r);
    if (monitors_.on_record) monitors_.on_record(r);
  }

private:
  const MagnitudeSpec& s_;
  double k2_;
  const Monitors& monitors_;
  std::vector<TraceRecord>& out_;
};

// Only from n = 2 on: with t_0 = d_0 = P1(c_0) and c_0 already in C2 (the
// zero-phase start), t_1 = t_0 and delta_t vanishes at n = 1 by construction.
bool should_stop(const SolverParams& p, std::size_t n, double delta_t) {
  return n >= 2 && p.stop_delta_t && delta_t < *p.stop_delta_t;
}

// GLA, FGLA and AGLA: one range projection per iteration. y_n = P1(P2(c_n))
// is both the residual probe of row n and the input of step n+1. For n >= 1
// the iterate already lies in the range of T, so c_n serves as P1(c_n).
void run_projected_family(const LinearTransform& t, const MagnitudeSpec& s, const SolverParams& p,
                          IterateState& st, Recorder& rec, RunResult& res) {
  const std::size_t m = st.c.size();
  CoefVec x2(m), y(m);
  auto probe = [&] {
    project_magnitude(st.c, s, x2);
    t.project_range(x2, y);
  };
  probe();
  rec.record(0, st.c, y, st.t, 0.0);
  for (std::size_t n = 1; n <= p.max_iters; ++n) {
    switch (p.algorithm) {
      case Algorithm::gla:
        std::swap(st.t_prev, st.t);
        st.t = y;
        st.c = y;
        ++st.n;
        break;
      case Algorithm::fgla:
        advance_inertial(st, y, p.alpha, 0.0, 1.0);
        break;
      default:
        advance_inertial(st, y, p.alpha, p.beta, p.gamma);
        break;
    }
    if (!all_finite(st.c) || !all_finite(st.d)) throw NonFiniteIterate(n);
    probe();
    const double delta_t = distance(st.t, st.t_prev);
    rec.record(n, st.c, y, st.c, delta_t);
    res.iterations = n;
    if (should_stop(p, n, delta_t)) {
      res.stopped_early = n < p.max_iters;
      break;
    }
  }
  res.coefficients = std::move(st.c);
}

void run_reflection_family(const LinearTransform& t, const MagnitudeSpec& s, const SolverParams& p,
                           std::span<const cplx> init, Recorder& rec, RunResult& res) {
  CoefVec c(init.begin(), init.end());
  auto record = [&](std::size_t n, double delta_t) {
    const CoefVec y = step_gla(t, s, c);
    const CoefVec range_c = t.project_range(c);
    rec.record(n, c, y, range_c, delta_t);
  };
  record(0, 0.0);
  for (std::size_t n = 1; n <= p.max_iters; ++n) {
    CoefVec next = p.algorithm == Algorithm::raar ? step_raar(t, s, c, p.lambda)
                                                  : step_dm(t, s, c, p.rho);
    if (!all_finite(next)) throw NonFiniteIterate(n);
    const double delta_t = distance(next, c);
    c = std::move(next);
    record(n, delta_t);
    res.iterations = n;
    if (should_stop(p, n, delta_t)) {
      res.stopped_early = n < p.max_iters;
      break;
    }
  }
  res.coefficients = std::move(c);
}

}  // namespace

RunResult run(const LinearTransform& t, const MagnitudeSpec& s, const SolverParams& params,
              std::span<const cplx> init, const Monitors& monitors) {
  params.validate();
  require_length("run: magnitudes", t.coefficient_count(), s.size());
  require_length("run: initial coefficients", t.coefficient_count(), init.size());
  if (!(s.norm() > 0.0)) throw InvalidParameter("run: target magnitudes are identically zero");
  if (!all_finite(init)) throw NonFiniteIterate(0);

  RunResult res;
  res.lyapunov_k2 = trace_k2(params, monitors);
  res.trace.reserve(params.max_iters + 1);
  Recorder rec(s, res.lyapunov_k2, monitors, res.trace);

  switch (params.algorithm) {
    case Algorithm::gla:
    case Algorithm::fgla:
    case Algorithm::agla: {
      IterateState st = make_inertial_state(t, init);
      run_projected_family(t, s, params, st, rec, res);
      break;
    }
    case Algorithm::raar:
    case Algorithm::dm:
      run_reflection_family(t, s, params, init, rec, res);
      break;
  }
  res.signal = t.synthesize(res.coefficients);
  return res;
}

}  // namespace agla
