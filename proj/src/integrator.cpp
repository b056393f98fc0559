#include "riemflow/integrator.hpp"

#include <cmath>
#include <stdexcept>

namespace riemflow {

void SolverConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("solver config: alpha must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("solver config: dt must be positive");
  if (!(dt <= horizon)) throw std::invalid_argument("solver config: dt must not exceed horizon");
  if (!(origin() >= dt))
    throw std::invalid_argument("solver config: time_origin must be at least dt");
  if (record_every < 1) throw std::invalid_argument("solver config: record_every must be >= 1");
}

StepResult step(const Objective& obj, const Point& x, const Tangent& v, double t,
                double dt, double alpha) {
  if (!(t > 0.0)) throw std::invalid_argument("step: time must be positive");
  const Manifold& m = obj.manifold();
  const Tangent grad = obj.gradient(x);
  const double damping = 1.0 - alpha * dt / t;
  Tangent vt{x, damping * v.components - dt * grad.components};
  Tangent move{x, dt * vt.components};
  Point xn = m.exp(x, move);
  Tangent vn = m.transport(x, xn, vt);
  return StepResult{std::move(xn), std::move(vn)};
}

Trajectory solve(const ProblemInstance& instance, const SolverConfig& config) {
  config.validate();
  const Objective& obj = *instance.objective;
  const Manifold& m = obj.manifold();
  m.validate_point(instance.x0);

  Trajectory traj;
  traj.config = config;
  traj.instance_id = instance.id;
  traj.objective = instance.objective;

  const double t0 = config.origin();
  const double dt = config.dt;
  const long nsteps = std::lround((config.horizon - t0) / dt);
  const double ball = instance.profile.diameter;

  Point x = instance.x0;
  Tangent v = m.zero_tangent(x);

  auto containment_ok = [&](const Point& p) {
    if (!m.contains(p)) return false;
    if (ball > 0.0) {
      const double d = m.distance(p, instance.oracle.zref);
      if (d > ball * (1.0 + 1e-9) + 1e-12) return false;
    }
    return true;
  };

  traj.samples.reserve(static_cast<std::size_t>(nsteps / config.record_every) + 2);
  for (long k = 0; k <= nsteps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    Tangent grad{x, Matrix()};
    double fval;
    try {
      fval = obj.value_and_gradient(x, grad);
    } catch (const std::exception& e) {
      traj.completed = false;
      traj.error = "evaluation failed at step " + std::to_string(k) + ": " + e.what();
      return traj;
    }
    if (k % config.record_every == 0 || k == nsteps)
      traj.samples.push_back(
          TrajectorySample{t, x, v, fval, m.norm(x, grad), containment_ok(x)});
    if (k == nsteps) break;

    const double damping = 1.0 - config.alpha * dt / t;
    if (std::abs(damping) > 1.0 && !v.components.isZero(0.0)) ++traj.overshoot_warnings;
    try {
      Tangent vt{x, damping * v.components - dt * grad.components};
      Tangent move{x, dt * vt.components};
      Point xn = m.exp(x, move);
      v = m.transport(x, xn, vt);
      x = std::move(xn);
    } catch (const std::exception& e) {
      traj.completed = false;
      traj.error = "step " + std::to_string(k) + " failed: " + e.what();
      return traj;
    }
  }
  return traj;
}

}  // namespace riemflow
