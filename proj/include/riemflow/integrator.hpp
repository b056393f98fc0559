#pragma once

#include <string>
#include <vector>

#include "riemflow/instance.hpp"
#include "riemflow/manifold.hpp"
#include "riemflow/objective.hpp"

namespace riemflow {

/// Configuration of a single solver run of the damped second-order flow
///   nabla X' (t) + (alpha / t) X'(t) + grad f(X(t)) = 0,  X'(0) = 0.
///
/// The damping is singular at t = 0, so the discrete clock starts at
/// time_origin (default: one step dt). The first velocity update divides by
/// time_origin but multiplies the zero initial velocity, so the choice only
/// matters from the second step on.
struct SolverConfig {
  double alpha = 3.0;
  double dt = 0.1;
  double horizon = 100.0;
  double time_origin = 0.0;  // 0 means "use dt"
  int record_every = 1;

  double origin() const { return time_origin > 0.0 ? time_origin : dt; }
  void validate() const;
};

struct TrajectorySample {
  double t = 0.0;
  Point x;
  Tangent v;
  double f_val = 0.0;
  double grad_norm = 0.0;
  bool containment_ok = true;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  SolverConfig config;
  std::string instance_id;
  std::shared_ptr<const Objective> objective;  // for post-processing
  // steps where |1 - alpha dt / t| > 1 was applied to a nonzero velocity
  int overshoot_warnings = 0;
  bool completed = true;
  std::string error;  // set when a step failed and the trajectory is partial
};

/// One semi-implicit step: explicit velocity update, exponential-map
/// position update, parallel transport of the velocity:
///   v~ = (1 - alpha dt / t) v - dt grad f(x)
///   x+ = Exp_x(dt v~)
///   v+ = Gamma_x^{x+} v~
struct StepResult {
  Point x;
  Tangent v;
};

StepResult step(const Objective& obj, const Point& x, const Tangent& v, double t,
                double dt, double alpha);

/// Integrates from t = time_origin to the horizon, recording every
/// record_every steps (the final state is always recorded). Containment
/// (manifold chart and geodesic ball of radius profile.diameter around the
/// benchmark minimizer) is flagged per sample, not enforced. A failing step
/// aborts with the partial trajectory plus error record.
Trajectory solve(const ProblemInstance& instance, const SolverConfig& config);

}  // namespace riemflow
