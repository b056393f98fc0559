#include "riemflow/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "riemflow/matfun.hpp"

namespace riemflow {

namespace {

void require_on(const Manifold& m, const Point& x, const char* what) {
  if (x.coords.rows() != m.rows() || x.coords.cols() != m.cols())
    throw std::invalid_argument(std::string(what) + ": point is not on the objective's manifold");
}

}  // namespace

// ---------------------------------------------------------------------------
// Rayleigh quotient
// ---------------------------------------------------------------------------

RayleighObjective::RayleighObjective(Matrix a) : a_(std::move(a)), sphere_(a_.rows()) {
  if (a_.rows() != a_.cols()) throw std::invalid_argument("rayleigh: matrix must be square");
  if ((a_ - a_.transpose()).norm() > kInvariantTol * std::max(1.0, a_.norm()))
    throw std::invalid_argument("rayleigh: matrix must be symmetric");
}

RayleighObjective::RayleighObjective(Matrix a, Eigen::VectorXd pole)
    : a_(std::move(a)), sphere_(std::move(pole)) {
  if (a_.rows() != a_.cols() || a_.rows() != sphere_.rows())
    throw std::invalid_argument("rayleigh: matrix and pole dimensions disagree");
  if ((a_ - a_.transpose()).norm() > kInvariantTol * std::max(1.0, a_.norm()))
    throw std::invalid_argument("rayleigh: matrix must be symmetric");
}

double RayleighObjective::value(const Point& x) const {
  require_on(sphere_, x, "rayleigh value");
  return -0.5 * x.coords.col(0).dot(a_ * x.coords.col(0));
}

Tangent RayleighObjective::gradient(const Point& x) const {
  require_on(sphere_, x, "rayleigh gradient");
  return sphere_.project(x, -(a_ * x.coords));
}

// ---------------------------------------------------------------------------
// Karcher mean
// ---------------------------------------------------------------------------

KarcherObjective::KarcherObjective(std::vector<Matrix> mats)
    : mats_(std::move(mats)), spd_(mats_.empty() ? 1 : mats_.front().rows()) {
  if (mats_.empty()) throw std::invalid_argument("karcher: need at least one matrix");
  for (const Matrix& a : mats_) spd_.validate_point(Point{a});
}

double KarcherObjective::eval(const Point& x, Tangent* grad) const {
  require_on(spd_, x, "karcher");
  const Matrix ph = sym_sqrt(x.coords);
  const Matrix pih = sym_inv_sqrt(x.coords);
  double val = 0.0;
  Matrix g;
  if (grad) g = Matrix::Zero(spd_.rows(), spd_.rows());
  for (const Matrix& a : mats_) {
    // L = Logm(P^{-1/2} A P^{-1/2}); |L|_F is the affine-invariant distance
    // and P^{1/2} L P^{1/2} = Log_P(A).
    const Matrix l = sym_logm(symmetrize(pih * a * pih));
    val += l.squaredNorm();
    if (grad) g.noalias() -= 2.0 * (ph * l * ph);
  }
  if (grad) *grad = Tangent{x, symmetrize(g)};
  return val;
}

double KarcherObjective::value(const Point& x) const { return eval(x, nullptr); }

Tangent KarcherObjective::gradient(const Point& x) const {
  Tangent g{x, Matrix()};
  eval(x, &g);
  return g;
}

double KarcherObjective::value_and_gradient(const Point& x, Tangent& grad) const {
  return eval(x, &grad);
}

// ---------------------------------------------------------------------------
// Flat quadratic
// ---------------------------------------------------------------------------

FlatQuadratic::FlatQuadratic(Matrix q) : q_(std::move(q)), flat_(q_.rows()) {
  if (q_.rows() != q_.cols()) throw std::invalid_argument("flat-quadratic: matrix must be square");
  if ((q_ - q_.transpose()).norm() > kInvariantTol * std::max(1.0, q_.norm()))
    throw std::invalid_argument("flat-quadratic: matrix must be symmetric");
  if (sym_min_eigenvalue(q_) <= 0.0)
    throw std::invalid_argument("flat-quadratic: matrix must be positive definite");
}

double FlatQuadratic::value(const Point& x) const {
  require_on(flat_, x, "flat-quadratic value");
  return 0.5 * x.coords.col(0).dot(q_ * x.coords.col(0));
}

Tangent FlatQuadratic::gradient(const Point& x) const {
  require_on(flat_, x, "flat-quadratic gradient");
  return Tangent{x, q_ * x.coords};
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

ConvexityReport geodesic_convexity_check(const Objective& obj, int samples,
                                         const Point& center, double radius, Rng& rng) {
  const Manifold& m = obj.manifold();
  ConvexityReport report;
  report.samples = samples;
  for (int i = 0; i < samples; ++i) {
    const Point x = random_ball_point(m, center, radius, rng);
    const Point y = random_ball_point(m, center, radius, rng);
    const double fx = obj.value(x);
    const double fy = obj.value(y);
    const double rhs = fx + m.inner(x, obj.gradient(x), m.log(x, y));
    const double gap = rhs - fy;  // positive means the inequality failed
    if (gap > 1e-8 * (1.0 + std::abs(fx))) {
      ++report.violations;
      if (gap > report.worst_violation) report.worst_violation = gap;
    }
  }
  return report;
}

SmoothnessEstimate estimate_strong_minimum(const Objective& obj, const Point& xstar,
                                           int samples, double radius, Rng& rng) {
  const Manifold& m = obj.manifold();
  const double fstar = obj.value(xstar);
  SmoothnessEstimate est;
  bool first = true;
  for (int i = 0; i < samples; ++i) {
    const Point x = random_ball_point(m, xstar, radius, rng);
    const double d = m.distance(x, xstar);
    if (d < 1e-12) { --i; continue; }
    const double ratio = 2.0 * (obj.value(x) - fstar) / (d * d);
    if (first || ratio < est.mu) est.mu = ratio;
    if (first || ratio > est.L) est.L = ratio;
    first = false;
  }
  if (est.mu < 0.0) est.mu = 0.0;
  if (est.L < est.mu) est.L = est.mu;
  return est;
}

}  // namespace riemflow
