#pragma once

// Geodesic calculus on the unit sphere and on the SPD manifold with the
// affine-invariant metric, as free functions over Eigen expressions. The
// runtime Manifold interface in manifold.hpp is a thin layer over these.

#include <cmath>
#include <stdexcept>

#include "riemflow/matfun.hpp"

namespace riemflow {

// Inner products x.y <= -1 + kAntipodalTol are treated as antipodal: the
// logarithm is undefined at the injectivity boundary and ill-conditioned
// near it.
inline constexpr double kAntipodalTol = 1e-9;

// ---------------------------------------------------------------------------
// Unit sphere S^{n-1}, round metric. Points are unit vectors, tangents are
// vectors orthogonal to the base point.
// ---------------------------------------------------------------------------

/// Exp_x(v) = cos(|v|) x + sin(|v|) v/|v|. The result is renormalized to
/// counter rounding drift over long integrations.
template <typename DX, typename DV>
typename DX::PlainObject sphere_exp(const Eigen::MatrixBase<DX>& x,
                                    const Eigen::MatrixBase<DV>& v) {
  using Plain = typename DX::PlainObject;
  const double nv = v.norm();
  if (nv == 0.0) return x;
  Plain y = std::cos(nv) * x + (std::sin(nv) / nv) * v;
  y /= y.norm();
  return y;
}

template <typename DX, typename DY>
double sphere_cos_angle(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  double c = x.dot(y);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return c;
}

/// Geodesic distance acos(x.y), computed through atan2 for full relative
/// accuracy at small angles.
template <typename DX, typename DY>
double sphere_distance(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  const double c = sphere_cos_angle(x, y);
  if (c <= -1.0 + kAntipodalTol)
    throw std::domain_error("sphere: points are antipodal, distance chart breaks down");
  const double s = (y - c * x).norm();
  return std::atan2(s, c);
}

/// Log_x(y): tangent at x of length d(x, y) pointing toward y.
template <typename DX, typename DY>
typename DX::PlainObject sphere_log(const Eigen::MatrixBase<DX>& x,
                                    const Eigen::MatrixBase<DY>& y) {
  using Plain = typename DX::PlainObject;
  const double c = sphere_cos_angle(x, y);
  if (c <= -1.0 + kAntipodalTol)
    throw std::domain_error("sphere: logarithm undefined for antipodal points");
  Plain w = y - c * x;
  const double s = w.norm();  // sin of the angle
  if (s < 1e-14) return Plain(w);
  const double theta = std::atan2(s, c);
  return Plain((theta / s) * w);
}

/// Parallel transport of v along the geodesic from x to y: the component
/// along the geodesic direction rotates in the (x, direction) plane, the
/// orthogonal complement is unchanged.
template <typename DX, typename DY, typename DV>
typename DX::PlainObject sphere_transport(const Eigen::MatrixBase<DX>& x,
                                          const Eigen::MatrixBase<DY>& y,
                                          const Eigen::MatrixBase<DV>& v) {
  using Plain = typename DX::PlainObject;
  Plain u = sphere_log(x, y);
  const double theta = u.norm();
  if (theta < 1e-14) return v;
  u /= theta;
  const double a = u.dot(v);
  return Plain(v + a * ((std::cos(theta) - 1.0) * u - std::sin(theta) * x));
}

// ---------------------------------------------------------------------------
// SPD manifold with the affine-invariant metric <U,V>_P = tr(P^-1 U P^-1 V).
// Points are symmetric positive-definite matrices, tangents symmetric.
// ---------------------------------------------------------------------------

/// Exp_P(V) = P^{1/2} Expm(P^{-1/2} V P^{-1/2}) P^{1/2}.
template <typename DP, typename DV>
typename DP::PlainObject spd_exp(const Eigen::MatrixBase<DP>& p,
                                 const Eigen::MatrixBase<DV>& v) {
  using Plain = typename DP::PlainObject;
  Plain ph = sym_sqrt(p);
  Plain pih = sym_inv_sqrt(p);
  Plain inner = symmetrize(pih * v * pih);
  return symmetrize(ph * sym_expm(inner) * ph);
}

/// Log_P(Q) = P^{1/2} Logm(P^{-1/2} Q P^{-1/2}) P^{1/2}.
template <typename DP, typename DQ>
typename DP::PlainObject spd_log(const Eigen::MatrixBase<DP>& p,
                                 const Eigen::MatrixBase<DQ>& q) {
  using Plain = typename DP::PlainObject;
  Plain ph = sym_sqrt(p);
  Plain pih = sym_inv_sqrt(p);
  Plain inner = symmetrize(pih * q * pih);
  return symmetrize(ph * sym_logm(inner) * ph);
}

/// d(P, Q) = |Logm(P^{-1/2} Q P^{-1/2})|_F.
template <typename DP, typename DQ>
double spd_distance(const Eigen::MatrixBase<DP>& p, const Eigen::MatrixBase<DQ>& q) {
  typename DP::PlainObject pih = sym_inv_sqrt(p);
  return sym_logm(symmetrize(pih * q * pih)).norm();
}

/// Affine-invariant inner product tr(P^-1 U P^-1 V).
template <typename DP, typename DU, typename DV>
double spd_inner(const Eigen::MatrixBase<DP>& p, const Eigen::MatrixBase<DU>& u,
                 const Eigen::MatrixBase<DV>& v) {
  Eigen::LDLT<typename DP::PlainObject> ldlt(p);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("spd_inner: factorization of base point failed");
  typename DP::PlainObject pu = ldlt.solve(u);
  typename DP::PlainObject pv = ldlt.solve(v);
  return pu.cwiseProduct(pv.transpose()).sum();
}

/// Parallel transport along the geodesic from P to Pt: V -> E V E^T with
/// E = (Pt P^-1)^{1/2} = P^{1/2} (P^{-1/2} Pt P^{-1/2})^{1/2} P^{-1/2}.
template <typename DP, typename DT, typename DV>
typename DP::PlainObject spd_transport(const Eigen::MatrixBase<DP>& p,
                                       const Eigen::MatrixBase<DT>& pt,
                                       const Eigen::MatrixBase<DV>& v) {
  using Plain = typename DP::PlainObject;
  Plain ph = sym_sqrt(p);
  Plain pih = sym_inv_sqrt(p);
  Plain mid = sym_sqrt(symmetrize(pih * pt * pih));
  Plain e = ph * mid * pih;
  return symmetrize(e * v * e.transpose());
}

}  // namespace riemflow
