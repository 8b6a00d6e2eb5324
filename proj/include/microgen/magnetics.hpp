#pragma once

// Field of a uniformly z-magnetized cuboid magnet, from the equivalent
// surface-charge model, and flux through horizontal rectangular loops.
//
// Frame: origin at the magnet centre, +z is the magnetization axis and
// points toward the coil. The magnet occupies |x| <= a, |y| <= b, |z| <= c
// with (a, b, c) the half-dimensions.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "microgen/error.hpp"
#include "microgen/quadrature.hpp"

namespace microgen::magnetics {

/// Offset applied along z when a probe sits exactly on a pole-face plane,
/// where the closed form is singular.
inline constexpr double kFaceOffset = 1e-9;  // m

/// Default relative tolerance of the flux quadrature.
inline constexpr double kFluxRelTol = 1e-8;

struct MagnetSpec {
  double length_x = 0.0;     // m
  double width_y = 0.0;      // m
  double thickness_z = 0.0;  // m
  double remanence = 0.0;    // T, magnetization along +z

  double half_x() const { return 0.5 * length_x; }
  double half_y() const { return 0.5 * width_y; }
  double half_z() const { return 0.5 * thickness_z; }
  double top() const { return half_z(); }
  double volume() const { return length_x * width_y * thickness_z; }

  void validate() const {
    detail::require(std::isfinite(length_x) && std::isfinite(width_y) &&
                        std::isfinite(thickness_z) && std::isfinite(remanence),
                    "magnet: non-finite parameter");
    detail::require(length_x > 0 && width_y > 0 && thickness_z > 0,
                    "magnet: dimensions must be positive");
    detail::require(remanence >= 0, "magnet: remanence must be non-negative");
  }
};

struct FieldPoint {
  double x = 0.0, y = 0.0, z = 0.0;  // m, magnet-centred frame
};

/// Horizontal rectangular loop: centre (x, y), sides along x and y, plane z.
struct RectLoop {
  double center_x = 0.0;
  double center_y = 0.0;
  double side_x = 0.0;
  double side_y = 0.0;
  double z = 0.0;

  static RectLoop square(double side, double z) { return {0.0, 0.0, side, side, z}; }
};

inline bool inside_volume(const MagnetSpec& m, const FieldPoint& p) {
  return std::abs(p.x) < m.half_x() && std::abs(p.y) < m.half_y() &&
         std::abs(p.z) < m.half_z();
}

namespace detail {

// Sum over the eight corners of sign * atan(X Y / (Z R)). Caller guarantees
// Z != 0 for both pole faces.
inline double corner_sum(double a, double b, double c, double x, double y,
                         double z) {
  const std::array<double, 2> xs{x + a, x - a};
  const std::array<double, 2> ys{y + b, y - b};
  const std::array<double, 2> zs{z + c, z - c};  // bottom face, top face
  double s = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double Z = zs[k];
    const double Z2 = Z * Z;
    double face = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double X = xs[i], Y = ys[j];
        const double R = std::sqrt(X * X + Y * Y + Z2);
        const double t = std::atan(X * Y / (Z * R));
        face += ((i + j) % 2 == 0) ? t : -t;
      }
    }
    // Top face carries +sigma, bottom face -sigma.
    s += (k == 1) ? face : -face;
  }
  return s;
}

inline void check_finite(const FieldPoint& p) {
  microgen::detail::require(
      std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z),
      "bz_at: non-finite field point");
}

}  // namespace detail

/// z-component of B at p. Points strictly inside the magnet are rejected;
/// points exactly on a pole-face plane are moved kFaceOffset away from the
/// magnet before evaluation.
inline double bz_at(const MagnetSpec& magnet, const FieldPoint& p) {
  detail::check_finite(p);
  magnet.validate();
  if (inside_volume(magnet, p)) {
    throw DomainError("bz_at: point inside the magnet volume");
  }
  if (magnet.remanence == 0.0) return 0.0;
  const double c = magnet.half_z();
  double z = p.z;
  if (z == c || z == -c) z += std::copysign(kFaceOffset, z);
  return magnet.remanence / (4.0 * std::numbers::pi) *
         detail::corner_sum(magnet.half_x(), magnet.half_y(), c, p.x, p.y, z);
}

namespace detail {

// Integrand of bz_at without the per-call validation; the loop plane has
// already been checked against the magnet.
struct BzKernel {
  double a, b, c, scale;
  double operator()(double x, double y, double z) const {
    return scale * corner_sum(a, b, c, x, y, z);
  }
};

inline BzKernel kernel(const MagnetSpec& m) {
  return {m.half_x(), m.half_y(), m.half_z(),
          m.remanence / (4.0 * std::numbers::pi)};
}

inline double shifted_off_face(double z, double c) {
  return (z == c || z == -c) ? z + std::copysign(kFaceOffset, z) : z;
}

inline void check_loop(const MagnetSpec& magnet, const RectLoop& loop) {
  microgen::detail::require(
      std::isfinite(loop.center_x) && std::isfinite(loop.center_y) &&
          std::isfinite(loop.side_x) && std::isfinite(loop.side_y) &&
          std::isfinite(loop.z),
      "rect loop: non-finite parameter");
  microgen::detail::require(loop.side_x > 0 && loop.side_y > 0,
                            "rect loop: sides must be positive");
  if (std::abs(loop.z) < magnet.half_z()) {
    throw DomainError("rect loop: plane intersects the magnet volume");
  }
}

template <class F>
double integrate_over_loop(const MagnetSpec& magnet, const RectLoop& loop,
                           const F& integrand, double rel_tol, double abs_tol) {
  const std::array<double, 2> xcuts{-magnet.half_x(), magnet.half_x()};
  const std::array<double, 2> ycuts{-magnet.half_y(), magnet.half_y()};
  // Bz is even in x and in y, so a loop centred on an axis only needs the
  // half on the positive side.
  const bool fold_x = loop.center_x == 0.0;
  const bool fold_y = loop.center_y == 0.0;
  const double x_lo = fold_x ? 0.0 : loop.center_x - 0.5 * loop.side_x;
  const double y_lo = fold_y ? 0.0 : loop.center_y - 0.5 * loop.side_y;
  const auto xs = quadrature::breakpoints(x_lo, loop.center_x + 0.5 * loop.side_x, xcuts);
  const auto ys = quadrature::breakpoints(y_lo, loop.center_y + 0.5 * loop.side_y, ycuts);
  const double mult = (fold_x ? 2.0 : 1.0) * (fold_y ? 2.0 : 1.0);
  quadrature::AdaptiveOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = abs_tol / mult;
  return mult * quadrature::integrate_2d<8>(integrand, xs, ys, opt).value;
}

// Floor on the absolute error target: a tiny fraction of the pole flux, so
// cancelling integrands (very large loops) still terminate.
inline double flux_floor(const MagnetSpec& m, double rel_tol) {
  return 1e-6 * rel_tol * m.remanence * m.length_x * m.width_y;
}

}  // namespace detail

/// Flux of Bz through the loop interior, by adaptive Gauss-Legendre
/// quadrature with panel breaks on the magnet edge lines.
inline double flux_through_rect(const MagnetSpec& magnet, const RectLoop& loop,
                                double rel_tol = kFluxRelTol) {
  magnet.validate();
  detail::check_loop(magnet, loop);
  if (magnet.remanence == 0.0) return 0.0;
  const auto k = detail::kernel(magnet);
  const double z = detail::shifted_off_face(loop.z, magnet.half_z());
  return detail::integrate_over_loop(
      magnet, loop, [&](double x, double y) { return k(x, y, z); }, rel_tol,
      detail::flux_floor(magnet, rel_tol));
}

/// Flux at plane height z_to minus flux at loop.z, integrated as a single
/// difference so that small changes keep their relative accuracy.
inline double flux_change(const MagnetSpec& magnet, const RectLoop& loop, double z_to,
                          double rel_tol = kFluxRelTol) {
  magnet.validate();
  detail::check_loop(magnet, loop);
  RectLoop to = loop;
  to.z = z_to;
  detail::check_loop(magnet, to);
  if (magnet.remanence == 0.0 || z_to == loop.z) return 0.0;
  const auto k = detail::kernel(magnet);
  const double c = magnet.half_z();
  const double z0 = detail::shifted_off_face(loop.z, c);
  const double z1 = detail::shifted_off_face(z_to, c);
  return detail::integrate_over_loop(
      magnet, loop, [&](double x, double y) { return k(x, y, z1) - k(x, y, z0); }, rel_tol,
      detail::flux_floor(magnet, rel_tol) * std::abs(z_to - loop.z) / magnet.thickness_z);
}

/// Default finite-difference step for a loop plane `gap` above the magnet.
inline double default_step(double gap) { return std::max(gap / 100.0, 1e-7); }

/// dPhi/dz of the loop flux with respect to the loop plane height, from a
/// central difference with one Richardson step (h and h/2). Negative above
/// the magnet: flux falls as the loop moves away.
inline double flux_gradient(const MagnetSpec& magnet, const RectLoop& loop,
                            double h, double rel_tol = kFluxRelTol) {
  magnet.validate();
  detail::check_loop(magnet, loop);
  microgen::detail::require(std::isfinite(h) && h > 0,
                            "flux_gradient: step must be positive");
  const double c = magnet.half_z();
  if (loop.z - h < c && loop.z + h > -c) {
    throw DomainError("flux_gradient: difference step straddles the magnet");
  }
  if (magnet.remanence == 0.0) return 0.0;
  const auto k = detail::kernel(magnet);
  const double z = loop.z;
  const double zp1 = detail::shifted_off_face(z + h, c);
  const double zm1 = detail::shifted_off_face(z - h, c);
  const double zp2 = z + 0.5 * h, zm2 = z - 0.5 * h;
  // (4 D(h/2) - D(h)) / 3 with D(s) = (Phi(z+s) - Phi(z-s)) / (2 s), taken
  // under one integral.
  auto integrand = [&](double x, double y) {
    const double d_half = (k(x, y, zp2) - k(x, y, zm2)) / h;
    const double d_full = (k(x, y, zp1) - k(x, y, zm1)) / (2.0 * h);
    return (4.0 * d_half - d_full) / 3.0;
  };
  return detail::integrate_over_loop(magnet, loop, integrand, rel_tol,
                                     detail::flux_floor(magnet, rel_tol) / h);
}

}  // namespace microgen::magnetics
