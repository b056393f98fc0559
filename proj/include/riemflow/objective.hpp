#pragma once

#include <memory>
#include <string>
#include <vector>

#include "riemflow/manifold.hpp"
#include "riemflow/rng.hpp"

namespace riemflow {

/// A geodesically convex objective with a Riemannian gradient. Immutable
/// after construction; evaluation is pure and concurrently callable.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::string kind() const = 0;
  virtual const Manifold& manifold() const = 0;
  virtual double value(const Point& x) const = 0;
  virtual Tangent gradient(const Point& x) const = 0;

  /// Combined evaluation; overridden where value and gradient share work.
  virtual double value_and_gradient(const Point& x, Tangent& grad) const {
    grad = gradient(x);
    return value(x);
  }
};

/// f(x) = -x^T A x / 2 on the unit hemisphere; grad f(x) = (I - x x^T)(-A x).
/// Minimized at the top eigenvector of A, with minimum -lambda_max / 2. The
/// optional pole designates the containment chart.
class RayleighObjective final : public Objective {
 public:
  explicit RayleighObjective(Matrix a);
  RayleighObjective(Matrix a, Eigen::VectorXd pole);

  std::string kind() const override { return "rayleigh"; }
  const Manifold& manifold() const override { return sphere_; }
  double value(const Point& x) const override;
  Tangent gradient(const Point& x) const override;
  const Matrix& matrix() const { return a_; }

 private:
  Matrix a_;
  Hemisphere sphere_;
};

/// Karcher-mean objective f(P) = sum_j d(P, A_j)^2 on the SPD manifold,
/// with grad f(P) = -2 sum_j Log_P(A_j).
class KarcherObjective final : public Objective {
 public:
  explicit KarcherObjective(std::vector<Matrix> mats);

  std::string kind() const override { return "karcher"; }
  const Manifold& manifold() const override { return spd_; }
  double value(const Point& x) const override;
  Tangent gradient(const Point& x) const override;
  double value_and_gradient(const Point& x, Tangent& grad) const override;
  const std::vector<Matrix>& matrices() const { return mats_; }

 private:
  // single pass sharing the eigendecompositions of P and the inner args
  double eval(const Point& x, Tangent* grad) const;

  std::vector<Matrix> mats_;
  SpdManifold spd_;
};

/// f(x) = x^T Q x / 2 on flat space, Q positive definite. Oracle objective.
class FlatQuadratic final : public Objective {
 public:
  explicit FlatQuadratic(Matrix q);
  static FlatQuadratic identity(Eigen::Index n) { return FlatQuadratic(Matrix::Identity(n, n)); }

  std::string kind() const override { return "flat-quadratic"; }
  const Manifold& manifold() const override { return flat_; }
  double value(const Point& x) const override;
  Tangent gradient(const Point& x) const override;

 private:
  Matrix q_;
  FlatSpace flat_;
};

/// Result of sweeping the first-order convexity inequality
/// f(y) >= f(x) + <grad f(x), Log_x y>  over sampled pairs in a ball.
/// Violations beyond 1e-8 (1 + |f(x)|) are recorded, not failed.
struct ConvexityReport {
  int samples = 0;
  int violations = 0;
  double worst_violation = 0.0;  // max over pairs of (rhs - f(y)), clamped at 0
};

ConvexityReport geodesic_convexity_check(const Objective& obj, int samples,
                                         const Point& center, double radius, Rng& rng);

/// Empirical smoothness bracket from samples around a minimizer:
/// mu = inf 2 (f(x) - f(xstar)) / d(x, xstar)^2 floored at 0, and
/// L = sup of the same ratio (local upper bound; L >= mu by construction).
struct SmoothnessEstimate {
  double L = 0.0;
  double mu = 0.0;
};

SmoothnessEstimate estimate_strong_minimum(const Objective& obj, const Point& xstar,
                                           int samples, double radius, Rng& rng);

}  // namespace riemflow
