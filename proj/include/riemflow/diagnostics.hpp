#pragma once

#include <vector>

#include "riemflow/curvature.hpp"
#include "riemflow/integrator.hpp"

namespace riemflow {

/// Finite precision floors f - f* around 1e-12; past that point the product
/// t^2 (f - f*) only measures rounding noise, so the scaled-gap series stops
/// (sticky cutoff, matching the benchmark protocol).
inline constexpr double kStagnationTol = 1e-12;

/// Per-sample Lyapunov quantities for the supercritical analysis:
/// W = |v|^2 / 2 + f - f*, scaled_gap = t^2 (f - f*) (NaN once stagnated),
/// h = d(x, z)^2 / 2.
struct EnergyTrace {
  double t = 0.0;
  double W = 0.0;
  double scaled_gap = 0.0;
  double h = 0.0;
};

/// Computes the energy trace against a benchmark minimizer z and value
/// fstar. Throws std::invalid_argument when fstar exceeds the observed
/// minimum by more than the stagnation tolerance (bad benchmark).
std::vector<EnergyTrace> energy_trace(const Trajectory& traj, const Point& z, double fstar);

/// Sub-critical Lyapunov decomposition W = A + B + C with p = alpha/delta,
/// lambda(t) = 2 p t^{p-1}, eta(t) = 2 p (alpha - 4 p + 1) t^{2p-2},
/// A = t^{2p} (f - f*), B = |-lambda Log_x z + t^p v|^2 / 2, C = eta d^2 / 2.
struct SubcriticalEnergy {
  double t = 0.0;
  double p = 0.0;
  double lambda_t = 0.0;
  double eta_t = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double W = 0.0;
};

/// Requires 0 < alpha <= profile.delta (use energy_trace otherwise).
std::vector<SubcriticalEnergy> subcritical_energy(const Trajectory& traj, const Point& z,
                                                  double fstar, double alpha,
                                                  const CurvatureProfile& profile);

struct RateFit {
  double fitted_exponent = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double r_squared = 0.0;
  int n_samples = 0;
};

/// Least-squares slope of log(value) vs log(t) over [t_lo, t_hi], negated.
/// Non-positive values are skipped; needs at least 10 points.
RateFit fit_power_law(const std::vector<std::pair<double, double>>& series, double t_lo,
                      double t_hi);

/// Rate fit of f - f* (recovered from the stagnation-truncated scaled gap)
/// over the window. Stagnated samples are excluded by construction.
RateFit fit_rate(const std::vector<EnergyTrace>& trace, double t_lo, double t_hi);

/// Default window: the last decade of non-stagnated samples.
RateFit fit_rate_last_decade(const std::vector<EnergyTrace>& trace);

/// Squared geodesic distance to a reference point per sample.
std::vector<std::pair<double, double>> distance_trace(const Trajectory& traj,
                                                      const Point& zref);

/// Largest increase between consecutive values (0 for monotone series).
double max_increase(const std::vector<double>& values);

/// First sample time with f - f* < stagnation tolerance; NaN when the run
/// never stagnates.
double stagnation_time(const std::vector<EnergyTrace>& trace);

}  // namespace riemflow
