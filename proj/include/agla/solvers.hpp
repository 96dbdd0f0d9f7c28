#pragma once

// Iteration engines for magnitude-only reconstruction:
//   GLA   alternating projections        c_n = P1 P2 c_{n-1}
//   FGLA  one inertial sequence          t_n = P1 P2 c_{n-1}, c_n = t_n + a (t_n - t_{n-1})
//   AGLA  projected + unprojected inertia (reduces to FGLA at gamma = 1)
//   RAAR  relaxed averaged alternating reflections
//   DM    difference map
// P1 is the projection onto the range of the transform, P2 the magnitude
// projection.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agla/linops.hpp"
#include "agla/magproj.hpp"
#include "agla/trace.hpp"
#include "agla/types.hpp"

namespace agla {

enum class Algorithm { gla, fgla, agla, raar, dm };

std::string to_string(Algorithm a);
/// Accepts the lower- or upper-case algorithm names.
Algorithm parse_algorithm(const std::string& name);

struct SolverParams {
  Algorithm algorithm = Algorithm::agla;
  double alpha = 0.99;
  double beta = 0.0;
  double gamma = 1.0;
  double lambda = 0.9;
  double rho = 0.8;
  std::size_t max_iters = 100;
  /// Stop after the first iteration whose delta_t falls below this.
  std::optional<double> stop_delta_t;

  /// Throws InvalidParameter when a parameter of the selected algorithm is out of range.
  void validate() const;
};

/// State of the inertial solvers. t, t_prev and d stay in the range of T.
struct IterateState {
  CoefVec c;
  CoefVec t;
  CoefVec d;
  CoefVec t_prev;
  std::size_t n = 0;
};

/// c_0 = init, t_0 = d_0 = t_prev = P1(init).
IterateState make_inertial_state(const LinearTransform& t, std::span<const cplx> init);

CoefVec step_gla(const LinearTransform& t, const MagnitudeSpec& s, std::span<const cplx> c);

/// Advances state from n-1 to n. FGLA shares the AGLA update with gamma = 1
/// and beta = 0, so the two coincide bit for bit at gamma = 1.
void step_fgla(const LinearTransform& t, const MagnitudeSpec& s, IterateState& state,
               double alpha);
void step_agla(const LinearTransform& t, const MagnitudeSpec& s, IterateState& state,
               double alpha, double beta, double gamma);

/// Inertial update given y = P1(P2(c_{n-1})):
///   t_n = (1 - gamma) d_{n-1} + gamma y
///   c_n = t_n + alpha (t_n - t_{n-1})
///   d_n = t_n + beta (t_n - t_{n-1})
void advance_inertial(IterateState& state, std::span<const cplx> y, double alpha, double beta,
                      double gamma);

/// (lambda/2)(c + R1(R2(c))) + (1 - lambda) P2(c), with R = 2P - I.
CoefVec step_raar(const LinearTransform& t, const MagnitudeSpec& s, std::span<const cplx> c,
                  double lambda);

/// u = P2(c) + (P2(c) - c)/rho, v = P1(c) + (P1(c) - c)/rho,
/// c + rho (P1(u) - P2(v)).
CoefVec step_dm(const LinearTransform& t, const MagnitudeSpec& s, std::span<const cplx> c,
                double rho);

class NonFiniteIterate : public Error {
public:
  NonFiniteIterate(std::size_t iteration)
      : Error("non-finite iterate at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

private:
  std::size_t iteration_;
};

/// Opt-in observers. They never alter the iterates.
struct Monitors {
  /// Called once per recorded trace row.
  std::function<void(const TraceRecord&)> on_record;
  bool track_poles = true;
  /// Pole-set tolerance; defaults to 1e-12 * max |c_i| per iterate.
  std::optional<double> pole_tolerance;
  /// K2 used for the trace's Lyapunov column. When unset, the gate's K2 is
  /// used for gate-passing FGLA/AGLA parameters and 0 otherwise.
  std::optional<double> lyapunov_k2;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  CoefVec coefficients;
  /// T^+ c_N.
  SignalVec signal;
  std::size_t iterations = 0;
  bool stopped_early = false;
  /// K2 used for the Lyapunov column.
  double lyapunov_k2 = 0.0;
};

/// Runs the selected solver from `init` for params.max_iters iterations (or
/// until the early-stop criterion fires), recording one trace row per
/// iterate including n = 0. Throws NonFiniteIterate if an entry turns NaN/Inf.
RunResult run(const LinearTransform& t, const MagnitudeSpec& s, const SolverParams& params,
              std::span<const cplx> init, const Monitors& monitors = {});

}  // namespace agla
