#include "riemflow/manifold.hpp"

#include <cmath>
#include <stdexcept>

#include "riemflow/geometry.hpp"
#include "riemflow/matfun.hpp"

namespace riemflow {

namespace {

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols)
    throw std::invalid_argument(std::string(what) + ": wrong shape");
}

// Base points are compared approximately: tangents produced by transport
// carry the freshly computed target point, which matches the caller's copy
// bit-for-bit in normal use.
void require_base(const Point& x, const Tangent& v, const char* what) {
  if (v.base.coords.rows() != x.coords.rows() || v.base.coords.cols() != x.coords.cols() ||
      (v.base.coords - x.coords).cwiseAbs().maxCoeff() >
          1e-9 * (1.0 + x.coords.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(std::string(what) + ": tangent is based at a different point");
}

}  // namespace

// ---------------------------------------------------------------------------
// Hemisphere
// ---------------------------------------------------------------------------

Hemisphere::Hemisphere(Eigen::Index n) : n_(n), pole_(Eigen::VectorXd::Unit(std::max<Eigen::Index>(n, 1), 0)) {
  if (n < 1) throw std::invalid_argument("Hemisphere: dimension must be positive");
}

Hemisphere::Hemisphere(Eigen::VectorXd pole) : n_(pole.size()), pole_(std::move(pole)) {
  if (n_ < 1) throw std::invalid_argument("Hemisphere: dimension must be positive");
  if (std::abs(pole_.norm() - 1.0) > kInvariantTol)
    throw std::invalid_argument("Hemisphere: pole must be a unit vector");
}

void Hemisphere::validate_point(const Point& x) const {
  require_shape(x.coords, n_, 1, "hemisphere point");
  if (std::abs(x.coords.norm() - 1.0) > kInvariantTol)
    throw std::invalid_argument("hemisphere point: not a unit vector");
}

void Hemisphere::validate_tangent(const Point& x, const Tangent& v) const {
  require_shape(v.components, n_, 1, "hemisphere tangent");
  require_base(x, v, "hemisphere tangent");
  if (std::abs(x.coords.col(0).dot(v.components.col(0))) >
      kInvariantTol * (1.0 + v.components.norm()))
    throw std::invalid_argument("hemisphere tangent: not orthogonal to base point");
}

Point Hemisphere::exp(const Point& x, const Tangent& v) const {
  validate_tangent(x, v);
  return Point{sphere_exp(x.coords.col(0), v.components.col(0))};
}

Tangent Hemisphere::log(const Point& x, const Point& y) const {
  return Tangent{x, sphere_log(x.coords.col(0), y.coords.col(0))};
}

Tangent Hemisphere::transport(const Point& x, const Point& y, const Tangent& v) const {
  require_base(x, v, "hemisphere transport");
  return Tangent{y, sphere_transport(x.coords.col(0), y.coords.col(0), v.components.col(0))};
}

double Hemisphere::distance(const Point& x, const Point& y) const {
  return sphere_distance(x.coords.col(0), y.coords.col(0));
}

double Hemisphere::inner(const Point& x, const Tangent& u, const Tangent& v) const {
  require_base(x, u, "hemisphere inner");
  require_base(x, v, "hemisphere inner");
  return u.components.col(0).dot(v.components.col(0));
}

Tangent Hemisphere::project(const Point& x, const Matrix& ambient) const {
  require_shape(ambient, n_, 1, "hemisphere ambient");
  const double a = x.coords.col(0).dot(ambient.col(0));
  return Tangent{x, ambient - a * x.coords};
}

// ---------------------------------------------------------------------------
// SPD manifold
// ---------------------------------------------------------------------------

SpdManifold::SpdManifold(Eigen::Index n) : n_(n) {
  if (n < 1) throw std::invalid_argument("SpdManifold: dimension must be positive");
}

void SpdManifold::validate_point(const Point& x) const {
  require_shape(x.coords, n_, n_, "spd point");
  const double asym = (x.coords - x.coords.transpose()).norm();
  if (asym > kInvariantTol * std::max(1.0, x.coords.norm()))
    throw std::invalid_argument("spd point: matrix is not symmetric");
  if (sym_min_eigenvalue(x.coords) <= 0.0)
    throw std::invalid_argument("spd point: matrix is not positive definite");
}

void SpdManifold::validate_tangent(const Point& x, const Tangent& v) const {
  require_shape(v.components, n_, n_, "spd tangent");
  require_base(x, v, "spd tangent");
  const double asym = (v.components - v.components.transpose()).norm();
  if (asym > kInvariantTol * std::max(1.0, v.components.norm()))
    throw std::invalid_argument("spd tangent: matrix is not symmetric");
}

Point SpdManifold::exp(const Point& x, const Tangent& v) const {
  validate_tangent(x, v);
  return Point{spd_exp(x.coords, v.components)};
}

Tangent SpdManifold::log(const Point& x, const Point& y) const {
  return Tangent{x, spd_log(x.coords, y.coords)};
}

Tangent SpdManifold::transport(const Point& x, const Point& y, const Tangent& v) const {
  require_base(x, v, "spd transport");
  return Tangent{y, spd_transport(x.coords, y.coords, v.components)};
}

double SpdManifold::distance(const Point& x, const Point& y) const {
  return spd_distance(x.coords, y.coords);
}

double SpdManifold::inner(const Point& x, const Tangent& u, const Tangent& v) const {
  require_base(x, u, "spd inner");
  require_base(x, v, "spd inner");
  return spd_inner(x.coords, u.components, v.components);
}

Tangent SpdManifold::project(const Point& x, const Matrix& ambient) const {
  require_shape(ambient, n_, n_, "spd ambient");
  return Tangent{x, symmetrize(ambient)};
}

// ---------------------------------------------------------------------------
// Flat space
// ---------------------------------------------------------------------------

FlatSpace::FlatSpace(Eigen::Index n) : n_(n) {
  if (n < 1) throw std::invalid_argument("FlatSpace: dimension must be positive");
}

void FlatSpace::validate_point(const Point& x) const {
  require_shape(x.coords, n_, 1, "flat point");
}

void FlatSpace::validate_tangent(const Point& x, const Tangent& v) const {
  require_shape(v.components, n_, 1, "flat tangent");
  require_base(x, v, "flat tangent");
}

Point FlatSpace::exp(const Point& x, const Tangent& v) const {
  validate_tangent(x, v);
  return Point{x.coords + v.components};
}

Tangent FlatSpace::log(const Point& x, const Point& y) const {
  return Tangent{x, y.coords - x.coords};
}

Tangent FlatSpace::transport(const Point& x, const Point& y, const Tangent& v) const {
  require_base(x, v, "flat transport");
  return Tangent{y, v.components};
}

double FlatSpace::distance(const Point& x, const Point& y) const {
  return (x.coords - y.coords).norm();
}

double FlatSpace::inner(const Point& x, const Tangent& u, const Tangent& v) const {
  require_base(x, u, "flat inner");
  require_base(x, v, "flat inner");
  return u.components.col(0).dot(v.components.col(0));
}

Tangent FlatSpace::project(const Point& x, const Matrix& ambient) const {
  require_shape(ambient, n_, 1, "flat ambient");
  return Tangent{x, ambient};
}

// ---------------------------------------------------------------------------

Point random_ball_point(const Manifold& m, const Point& center, double radius, Rng& rng) {
  Tangent dir = m.random_tangent(center, rng);
  const double nd = m.norm(center, dir);
  if (nd == 0.0) return center;
  const double r = radius * rng.uniform(1e-3, 1.0);
  dir.components *= r / nd;
  return m.exp(center, dir);
}

std::shared_ptr<const Manifold> make_manifold(const std::string& name, Eigen::Index n) {
  if (name == "hemisphere") return std::make_shared<Hemisphere>(n);
  if (name == "spd") return std::make_shared<SpdManifold>(n);
  if (name == "flat") return std::make_shared<FlatSpace>(n);
  throw std::invalid_argument("unknown manifold: " + name);
}

}  // namespace riemflow
