#include "riemflow/diagnostics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace riemflow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const Manifold& manifold_of(const Trajectory& traj) {
  if (!traj.objective)
    throw std::invalid_argument("diagnostics: trajectory carries no objective");
  return traj.objective->manifold();
}

}  // namespace

std::vector<EnergyTrace> energy_trace(const Trajectory& traj, const Point& z, double fstar) {
  const Manifold& m = manifold_of(traj);
  double fmin = std::numeric_limits<double>::infinity();
  for (const TrajectorySample& s : traj.samples) fmin = std::min(fmin, s.f_val);
  if (!traj.samples.empty() && fstar > fmin + kStagnationTol)
    throw std::invalid_argument("energy_trace: fstar exceeds the observed minimum (bad benchmark)");

  std::vector<EnergyTrace> out;
  out.reserve(traj.samples.size());
  bool stagnated = false;
  for (const TrajectorySample& s : traj.samples) {
    const double gap = s.f_val - fstar;
    if (gap < kStagnationTol) stagnated = true;  // sticky cutoff
    EnergyTrace e;
    e.t = s.t;
    e.W = std::max(0.0, 0.5 * m.inner(s.x, s.v, s.v) + gap);
    e.scaled_gap = stagnated ? kNaN : std::max(0.0, s.t * s.t * gap);
    const double d = m.distance(s.x, z);
    e.h = 0.5 * d * d;
    out.push_back(e);
  }
  return out;
}

std::vector<SubcriticalEnergy> subcritical_energy(const Trajectory& traj, const Point& z,
                                                  double fstar, double alpha,
                                                  const CurvatureProfile& profile) {
  if (!(alpha > 0.0) || alpha > profile.delta)
    throw std::invalid_argument(
        "subcritical_energy: requires 0 < alpha <= delta (use energy_trace above the threshold)");
  const Manifold& m = manifold_of(traj);
  const double p = alpha / profile.delta;

  std::vector<SubcriticalEnergy> out;
  out.reserve(traj.samples.size());
  for (const TrajectorySample& s : traj.samples) {
    SubcriticalEnergy e;
    e.t = s.t;
    e.p = p;
    e.lambda_t = 2.0 * p * std::pow(s.t, p - 1.0);
    e.eta_t = 2.0 * p * (alpha - 4.0 * p + 1.0) * std::pow(s.t, 2.0 * p - 2.0);
    e.A = std::pow(s.t, 2.0 * p) * std::max(0.0, s.f_val - fstar);
    // -lambda Log_x z and t^p v both live in the tangent space at x already;
    // no transport is involved.
    const Tangent log_xz = m.log(s.x, z);
    Tangent b{s.x, -e.lambda_t * log_xz.components + std::pow(s.t, p) * s.v.components};
    e.B = 0.5 * m.inner(s.x, b, b);
    const double d = m.distance(s.x, z);
    e.C = 0.5 * e.eta_t * d * d;
    e.W = e.A + e.B + e.C;
    out.push_back(e);
  }
  return out;
}

RateFit fit_power_law(const std::vector<std::pair<double, double>>& series, double t_lo,
                      double t_hi) {
  if (!(t_lo < t_hi)) throw std::invalid_argument("fit_power_law: empty window");
  std::vector<double> lt, lv;
  for (const auto& [t, val] : series) {
    if (t < t_lo || t > t_hi) continue;
    if (!(val > 0.0) || std::isnan(val)) continue;
    lt.push_back(std::log(t));
    lv.push_back(std::log(val));
  }
  if (lt.size() < 10)
    throw std::invalid_argument("fit_power_law: fewer than 10 usable samples in window");

  const Eigen::Index n = static_cast<Eigen::Index>(lt.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = lt[static_cast<std::size_t>(i)];
    design(i, 1) = 1.0;
    rhs[i] = lv[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d sol = design.colPivHouseholderQr().solve(rhs);
  const double ss_res = (design * sol - rhs).squaredNorm();
  const double mean = rhs.mean();
  const double ss_tot = (rhs.array() - mean).matrix().squaredNorm();

  RateFit fit;
  fit.fitted_exponent = -sol[0];
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.n_samples = static_cast<int>(n);
  return fit;
}

RateFit fit_rate(const std::vector<EnergyTrace>& trace, double t_lo, double t_hi) {
  std::vector<std::pair<double, double>> gaps;
  gaps.reserve(trace.size());
  for (const EnergyTrace& e : trace) {
    if (std::isnan(e.scaled_gap)) continue;  // stagnated
    gaps.emplace_back(e.t, e.scaled_gap / (e.t * e.t));
  }
  return fit_power_law(gaps, t_lo, t_hi);
}

RateFit fit_rate_last_decade(const std::vector<EnergyTrace>& trace) {
  double t_hi = 0.0;
  for (const EnergyTrace& e : trace)
    if (!std::isnan(e.scaled_gap)) t_hi = e.t;
  if (t_hi <= 0.0) throw std::invalid_argument("fit_rate: no non-stagnated samples");
  return fit_rate(trace, t_hi / 10.0, t_hi);
}

std::vector<std::pair<double, double>> distance_trace(const Trajectory& traj,
                                                      const Point& zref) {
  const Manifold& m = manifold_of(traj);
  std::vector<std::pair<double, double>> out;
  out.reserve(traj.samples.size());
  for (const TrajectorySample& s : traj.samples) {
    const double d = m.distance(s.x, zref);
    out.emplace_back(s.t, d * d);
  }
  return out;
}

double max_increase(const std::vector<double>& values) {
  double worst = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i)
    worst = std::max(worst, values[i] - values[i - 1]);
  return worst;
}

double stagnation_time(const std::vector<EnergyTrace>& trace) {
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (std::isnan(trace[i].scaled_gap)) return trace[i].t;
  return kNaN;
}

}  // namespace riemflow
