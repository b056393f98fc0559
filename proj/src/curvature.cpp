#include "riemflow/curvature.hpp"

#include <cmath>
#include <stdexcept>

namespace riemflow {

namespace {

// Below this argument p cot p and p coth p switch to the 3-term series
// 1 -+ u^2/3 - u^4/45 to avoid 0/0 cancellation.
constexpr double kSeriesThreshold = 1e-4;

}  // namespace

double sigma(double p, double k_max) {
  if (p < 0.0) throw std::invalid_argument("sigma: p must be non-negative");
  if (k_max <= 0.0) return 1.0;
  const double u = std::sqrt(k_max) * p;
  if (u >= M_PI) throw std::domain_error("sigma: sqrt(K_max) p must be below pi");
  if (u < kSeriesThreshold) return 1.0 - u * u / 3.0 - u * u * u * u / 45.0;
  return u * std::cos(u) / std::sin(u);
}

double xi(double p, double k_min) {
  if (p < 0.0) throw std::invalid_argument("xi: p must be non-negative");
  if (k_min >= 0.0) return 1.0;
  const double u = std::sqrt(-k_min) * p;
  if (u < kSeriesThreshold) return 1.0 + u * u / 3.0 - u * u * u * u / 45.0;
  return u / std::tanh(u);
}

CurvatureProfile make_profile(double k_min, double k_max, double diameter) {
  if (!(diameter > 0.0)) throw std::invalid_argument("profile: diameter must be positive");
  if (k_min > k_max) throw std::invalid_argument("profile: K_min must not exceed K_max");
  if (k_max > 0.0 && diameter >= M_PI / std::sqrt(k_max))
    throw std::invalid_argument("profile: diameter must satisfy D < pi / sqrt(K_max)");
  CurvatureProfile prof;
  prof.k_min = k_min;
  prof.k_max = k_max;
  prof.diameter = diameter;
  prof.zeta = xi(diameter, k_min);
  prof.delta = 2.0 * prof.zeta + 1.0;
  return prof;
}

double rate_exponent(double alpha, const CurvatureProfile& profile) {
  if (!(alpha > 0.0)) throw std::invalid_argument("rate_exponent: alpha must be positive");
  return std::min(2.0, 2.0 * alpha / profile.delta);
}

HessianBoundReport hessian_bound_check(const Manifold& m, const Point& z, int samples,
                                       const CurvatureProfile& profile, double radius,
                                       Rng& rng, double fd_step) {
  if (samples < 1) throw std::invalid_argument("hessian_bound_check: need samples >= 1");
  if (!(fd_step > 1e-12))
    throw std::runtime_error("hessian_bound_check: differencing step underflow");

  HessianBoundReport report;
  report.samples = samples;
  bool first = true;
  for (int i = 0; i < samples; ++i) {
    // x within the ball, away from both z and the boundary
    Tangent dir = m.random_tangent(z, rng);
    const double nd = m.norm(z, dir);
    if (nd == 0.0) { --i; continue; }
    dir.components *= radius * rng.uniform(0.05, 0.95) / nd;
    const Point x = m.exp(z, dir);

    Tangent v = m.random_tangent(x, rng);
    const double nv = m.norm(x, v);
    if (nv == 0.0) { --i; continue; }
    v.components *= rng.uniform(0.5, 1.5) / nv;
    const double nv2 = m.inner(x, v, v);

    // central difference of t -> Gamma_{exp_x(tv)}^{x} Log_{exp_x(tv)} z
    Tangent step = v;
    step.components *= fd_step;
    const Point xp = m.exp(x, step);
    step.components = -step.components;
    const Point xm = m.exp(x, step);
    const Tangent fp = m.transport(xp, x, m.log(xp, z));
    const Tangent fm = m.transport(xm, x, m.log(xm, z));
    Tangent deriv{x, (fp.components - fm.components) / (2.0 * fd_step)};
    Tangent minus_v{x, -v.components};
    const double middle = m.inner(x, deriv, minus_v);

    const double d = m.distance(x, z);
    const double lower = sigma(d, profile.k_max) * nv2;
    const double upper = xi(d, profile.k_min) * nv2;
    const double margin_lo = middle - lower;
    const double margin_up = upper - middle;
    const double tol = report.tolerance_factor * nv2;
    if (first || margin_lo < report.worst_lower_margin) report.worst_lower_margin = margin_lo;
    if (first || margin_up < report.worst_upper_margin) report.worst_upper_margin = margin_up;
    first = false;
    if (margin_lo < -tol) ++report.lower_violations;
    if (margin_up < -tol) ++report.upper_violations;
  }
  return report;
}

}  // namespace riemflow
