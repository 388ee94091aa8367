#pragma once

// Jordan-algebra helpers for the 4-dimensional Lorentz cone
// Q = {(u0, u1) : u0 >= |u1|}, which is the image of the 2x2 Hermitian PSD
// cone under M -> (Tr M, Tr sigma_x M, Tr sigma_y M, Tr sigma_z M).

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace steerlab::detail {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

inline Mat4 reflection() { return Eigen::Vector4d(1, -1, -1, -1).asDiagonal(); }

/// u^T J v
inline double jdot(const Vec4& u, const Vec4& v) { return u(0) * v(0) - u.tail<3>().dot(v.tail<3>()); }

/// u^T J u = (u0 - |u1|)(u0 + |u1|), factored to avoid cancellation.
inline double jdet(const Vec4& u) {
  const double r = u.tail<3>().norm();
  return (u(0) - r) * (u(0) + r);
}

inline bool in_interior(const Vec4& u) { return u(0) > u.tail<3>().norm(); }

/// Lorentz distance of u from the cone boundary: u0 - |u1| (half the smallest
/// eigenvalue of the corresponding 2x2 operator, times two).
inline double cone_margin(const Vec4& u) { return u(0) - u.tail<3>().norm(); }

/// u o v = (u . v, u0 v1 + v0 u1)
inline Vec4 jprod(const Vec4& u, const Vec4& v) {
  Vec4 out;
  out(0) = u.dot(v);
  out.tail<3>() = u(0) * v.tail<3>() + v(0) * u.tail<3>();
  return out;
}

/// Solves u o q = r for q (u in the interior).
inline Vec4 jsolve(const Vec4& u, const Vec4& r) {
  Vec4 q;
  q(0) = (u(0) * r(0) - u.tail<3>().dot(r.tail<3>())) / jdet(u);
  q.tail<3>() = (r.tail<3>() - q(0) * u.tail<3>()) / u(0);
  return q;
}

/// Largest alpha >= 0 with u + alpha d in Q (infinity if unbounded).
inline double max_step(const Vec4& u, const Vec4& d) {
  const double a = jdot(d, d);
  const double b = jdot(u, d);
  const double c = jdet(u);
  const double inf = std::numeric_limits<double>::infinity();
  if (a < 0.0) {
    const double disc = std::sqrt(std::max(0.0, b * b - a * c));
    return (b + disc) / (-a);
  }
  if (b >= 0.0) return inf;
  // a >= 0 with b < 0 means d points out of the cone, so b^2 >= a c holds
  // exactly; rounding can make it slightly negative for collinear u and d.
  const double disc2 = std::max(0.0, b * b - a * c);
  return c / (-b + std::sqrt(disc2));
}

/// Nesterov-Todd scaling W for a primal/dual pair (x, s) in int Q:
/// W x = W^{-1} s = lambda.
struct NtScaling {
  Mat4 w;
  Mat4 winv;
  Vec4 lambda;
};

inline NtScaling nt_scaling(const Vec4& x, const Vec4& s) {
  const Mat4 j = reflection();
  const double xd = jdet(x);
  const double sd = jdet(s);
  const Vec4 xb = x / std::sqrt(xd);
  const Vec4 sb = s / std::sqrt(sd);
  const double gamma = std::sqrt(0.5 * (1.0 + xb.dot(sb)));
  const Vec4 wb = (sb + j * xb) / (2.0 * gamma);
  // wb maps xb to sb; the scaling is its hyperbolic square root.
  const Vec4 v = (wb + Vec4(1, 0, 0, 0)) / std::sqrt(2.0 * (wb(0) + 1.0));
  const double eta = std::pow(sd / xd, 0.25);
  NtScaling out;
  out.w = eta * (2.0 * v * v.transpose() - j);
  const Vec4 jv = j * v;
  out.winv = (2.0 * jv * jv.transpose() - j) / eta;
  out.lambda = out.w * x;
  return out;
}

}  // namespace steerlab::detail
