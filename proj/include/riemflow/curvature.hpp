#pragma once

#include <string>

#include "riemflow/manifold.hpp"
#include "riemflow/rng.hpp"

namespace riemflow {

/// Lower Hessian-comparison bound: sqrt(K_max) p cot(sqrt(K_max) p) for
/// K_max > 0, otherwise 1. Requires sqrt(K_max) p < pi.
double sigma(double p, double k_max);

/// Upper Hessian-comparison bound: sqrt(-K_min) p coth(sqrt(-K_min) p) for
/// K_min < 0, otherwise 1.
double xi(double p, double k_min);

/// Curvature constants governing the convergence-rate phase transition:
/// zeta = xi(D) and delta = 2 zeta + 1, the curved analog of the Euclidean
/// damping threshold 3.
struct CurvatureProfile {
  double k_min = 0.0;
  double k_max = 0.0;
  double diameter = 1.0;
  double zeta = 1.0;
  double delta = 3.0;
};

/// Builds a profile, validating K_min <= K_max and the diameter condition
/// D < pi / sqrt(K_max) for positively curved upper bounds.
CurvatureProfile make_profile(double k_min, double k_max, double diameter);

/// Guaranteed decay exponent p(alpha) = min(2, 2 alpha / delta).
double rate_exponent(double alpha, const CurvatureProfile& profile);

struct HessianBoundReport {
  int samples = 0;
  int lower_violations = 0;
  int upper_violations = 0;
  // min over samples of (middle - sigma |v|^2) and (xi |v|^2 - middle);
  // negative values below -tolerance count as violations.
  double worst_lower_margin = 0.0;
  double worst_upper_margin = 0.0;
  double tolerance_factor = 1e-4;  // violations counted beyond tol * |v|^2
};

/// Checks the Hessian eigenvalue sandwich
///   sigma(d(x,z)) |v|^2 <= < D_v Log_x z, -v > <= xi(d(x,z)) |v|^2
/// on random (x, v) with d(x, z) <= radius. The covariant derivative of the
/// logarithm field is approximated by central differencing of the field
/// parallel-transported back to a common tangent space (h = 1e-5).
HessianBoundReport hessian_bound_check(const Manifold& m, const Point& z, int samples,
                                       const CurvatureProfile& profile, double radius,
                                       Rng& rng, double fd_step = 1e-5);

}  // namespace riemflow
