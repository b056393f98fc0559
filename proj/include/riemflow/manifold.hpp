#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "riemflow/rng.hpp"

namespace riemflow {

using Matrix = Eigen::MatrixXd;

// Invariant tolerances: unit norm / tangency / symmetry are enforced to
// 1e-10, about 100x double-precision accumulation for O(n^3) kernels.
inline constexpr double kInvariantTol = 1e-10;

/// A point on a manifold: a unit column vector (hemisphere), an SPD matrix
/// (SPD manifold) or a plain column vector (flat space).
struct Point {
  Matrix coords;
};

/// A tangent vector tagged with its base point.
struct Tangent {
  Point base;
  Matrix components;
};

/// Interface for the three manifold instances. All operations are pure;
/// instances hold no mutable state and can be shared across threads.
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual std::string name() const = 0;
  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;

  /// Throws std::invalid_argument when the point breaks a type invariant.
  virtual void validate_point(const Point& x) const = 0;
  /// Throws std::invalid_argument on shape/tangency/symmetry violations.
  virtual void validate_tangent(const Point& x, const Tangent& v) const = 0;

  virtual Point exp(const Point& x, const Tangent& v) const = 0;
  virtual Tangent log(const Point& x, const Point& y) const = 0;
  virtual Tangent transport(const Point& x, const Point& y, const Tangent& v) const = 0;
  virtual double distance(const Point& x, const Point& y) const = 0;
  virtual double inner(const Point& x, const Tangent& u, const Tangent& v) const = 0;

  /// Projection of an ambient array onto the tangent space at x.
  virtual Tangent project(const Point& x, const Matrix& ambient) const = 0;

  /// Chart containment (hemisphere: first coordinate positive). Reported by
  /// the integrator, never enforced.
  virtual bool contains(const Point&) const { return true; }

  double norm(const Point& x, const Tangent& v) const { return std::sqrt(inner(x, v, v)); }

  Tangent zero_tangent(const Point& x) const {
    return Tangent{x, Matrix::Zero(x.coords.rows(), x.coords.cols())};
  }

  /// Gaussian ambient sample projected onto the tangent space at x.
  Tangent random_tangent(const Point& x, Rng& rng) const {
    return project(x, rng.normal_matrix(x.coords.rows(), x.coords.cols()));
  }
};

/// Open unit hemisphere in R^n about a designated pole (default e_1). In the
/// chart whose first axis is the pole, containment means a positive first
/// coordinate, i.e. pole . x > 0. Geodesic calculus is that of the full
/// sphere; the hemisphere restriction only enters through contains().
class Hemisphere final : public Manifold {
 public:
  explicit Hemisphere(Eigen::Index n);
  explicit Hemisphere(Eigen::VectorXd pole);

  std::string name() const override { return "hemisphere"; }
  Eigen::Index rows() const override { return n_; }
  Eigen::Index cols() const override { return 1; }

  void validate_point(const Point& x) const override;
  void validate_tangent(const Point& x, const Tangent& v) const override;
  Point exp(const Point& x, const Tangent& v) const override;
  Tangent log(const Point& x, const Point& y) const override;
  Tangent transport(const Point& x, const Point& y, const Tangent& v) const override;
  double distance(const Point& x, const Point& y) const override;
  double inner(const Point& x, const Tangent& u, const Tangent& v) const override;
  Tangent project(const Point& x, const Matrix& ambient) const override;
  bool contains(const Point& x) const override { return pole_.dot(x.coords.col(0)) > 0.0; }
  const Eigen::VectorXd& pole() const { return pole_; }

 private:
  Eigen::Index n_;
  Eigen::VectorXd pole_;
};

/// Manifold of n x n symmetric positive-definite matrices with the
/// affine-invariant metric.
class SpdManifold final : public Manifold {
 public:
  explicit SpdManifold(Eigen::Index n);

  std::string name() const override { return "spd"; }
  Eigen::Index rows() const override { return n_; }
  Eigen::Index cols() const override { return n_; }

  void validate_point(const Point& x) const override;
  void validate_tangent(const Point& x, const Tangent& v) const override;
  Point exp(const Point& x, const Tangent& v) const override;
  Tangent log(const Point& x, const Point& y) const override;
  Tangent transport(const Point& x, const Point& y, const Tangent& v) const override;
  double distance(const Point& x, const Point& y) const override;
  double inner(const Point& x, const Tangent& u, const Tangent& v) const override;
  Tangent project(const Point& x, const Matrix& ambient) const override;

 private:
  Eigen::Index n_;
};

/// Flat R^n. Oracle instance: every operation is the Euclidean formula, so
/// the Riemannian solver must reproduce the known Euclidean scheme exactly.
class FlatSpace final : public Manifold {
 public:
  explicit FlatSpace(Eigen::Index n);

  std::string name() const override { return "flat"; }
  Eigen::Index rows() const override { return n_; }
  Eigen::Index cols() const override { return 1; }

  void validate_point(const Point& x) const override;
  void validate_tangent(const Point& x, const Tangent& v) const override;
  Point exp(const Point& x, const Tangent& v) const override;
  Tangent log(const Point& x, const Point& y) const override;
  Tangent transport(const Point& x, const Point& y, const Tangent& v) const override;
  double distance(const Point& x, const Point& y) const override;
  double inner(const Point& x, const Tangent& u, const Tangent& v) const override;
  Tangent project(const Point& x, const Matrix& ambient) const override;

 private:
  Eigen::Index n_;
};

/// Point at geodesic distance in (0, radius] from center, in a random
/// tangent direction.
Point random_ball_point(const Manifold& m, const Point& center, double radius, Rng& rng);

std::shared_ptr<const Manifold> make_manifold(const std::string& name, Eigen::Index n);

}  // namespace riemflow
