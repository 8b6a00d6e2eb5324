#pragma once

// Planar square spiral coil, approximated as concentric closed square loops
// on the trace centrelines.

#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "microgen/error.hpp"
#include "microgen/magnetics.hpp"

namespace microgen::coil {

inline constexpr double kNickelResistivity = 6.99e-8;  // ohm m, bulk Ni
inline constexpr double kCopperResistivity = 1.68e-8;  // ohm m, bulk Cu

struct CoilSpec {
  int turns = 0;
  double trace_width = 0.0;      // m
  double gap = 0.0;              // m, spacing between adjacent traces
  double trace_thickness = 0.0;  // m
  double inner_side = 0.0;       // m, centreline side of the innermost turn
  double resistivity = kNickelResistivity;  // ohm m
  double plane_height = 0.0;     // m, coil plane above the magnet top face

  double pitch() const { return trace_width + gap; }
  double cross_section() const { return trace_width * trace_thickness; }

  void validate() const {
    detail::require(turns >= 0, "coil: turns must be non-negative");
    detail::require(trace_width > 0 && gap > 0 && trace_thickness > 0 &&
                        inner_side > 0,
                    "coil: trace width, gap, thickness and inner side must be positive");
    detail::require(resistivity > 0, "coil: resistivity must be positive");
    detail::require(std::isfinite(plane_height) && plane_height >= 0,
                    "coil: plane height must be finite and non-negative");
  }
};

struct CoilGeometry {
  std::vector<double> sides;  // m, centreline side of each turn, innermost first
  double pitch = 0.0;
};

inline CoilGeometry turn_sides(const CoilSpec& coil) {
  coil.validate();
  CoilGeometry g;
  g.pitch = coil.pitch();
  g.sides.reserve(static_cast<std::size_t>(coil.turns));
  for (int i = 0; i < coil.turns; ++i) {
    g.sides.push_back(coil.inner_side + 2.0 * i * g.pitch);
  }
  return g;
}

/// Total trace length, corners and lead-ins ignored.
inline double total_length(const CoilSpec& coil) {
  const auto g = turn_sides(coil);
  return 4.0 * std::accumulate(g.sides.begin(), g.sides.end(), 0.0);
}

/// DC resistance rho L / A.
inline double resistance(const CoilSpec& coil) {
  return coil.resistivity * total_length(coil) / coil.cross_section();
}

/// Outer edge of the outermost trace, for footprint checks.
inline double outer_extent(const CoilSpec& coil) {
  if (coil.turns == 0) return 0.0;
  return turn_sides(coil).sides.back() + coil.trace_width;
}

/// Height of the coil plane in the magnet frame when the magnet is displaced
/// by `magnet_z_offset` along +z (toward the coil).
inline double loop_height(const magnetics::MagnetSpec& magnet, const CoilSpec& coil,
                          double magnet_z_offset) {
  return magnet.top() + coil.plane_height - magnet_z_offset;
}

inline double loop_flux(const magnetics::MagnetSpec& magnet, double side, double z,
                        double rel_tol = magnetics::kFluxRelTol) {
  return magnetics::flux_through_rect(magnet, magnetics::RectLoop::square(side, z),
                                      rel_tol);
}

/// Flux linked by all turns, each turn a closed loop at the coil plane.
inline double coil_flux(const magnetics::MagnetSpec& magnet, const CoilSpec& coil,
                        double magnet_z_offset,
                        double rel_tol = magnetics::kFluxRelTol) {
  const auto g = turn_sides(coil);
  const double z = loop_height(magnet, coil, magnet_z_offset);
  double total = 0.0;
  for (double side : g.sides) total += loop_flux(magnet, side, z, rel_tol);
  return total;
}

/// Change in linked flux when the magnet moves from offset 0 to `offset`.
inline double coil_flux_change(const magnetics::MagnetSpec& magnet, const CoilSpec& coil,
                               double offset, double rel_tol = magnetics::kFluxRelTol) {
  const auto g = turn_sides(coil);
  const double z0 = loop_height(magnet, coil, 0.0);
  const double z1 = loop_height(magnet, coil, offset);
  double total = 0.0;
  for (double side : g.sides) {
    total += magnetics::flux_change(magnet, magnetics::RectLoop::square(side, z0), z1, rel_tol);
  }
  return total;
}

/// Default difference step for the coil at this offset: 1/100 of the
/// current coil-to-magnet gap, floored at 0.1 um.
inline double default_step(const magnetics::MagnetSpec& magnet, const CoilSpec& coil,
                           double magnet_z_offset) {
  return magnetics::default_step(loop_height(magnet, coil, magnet_z_offset) -
                                 magnet.top());
}

/// dPhi/d(offset) of a single turn: positive, since moving the magnet toward
/// the coil raises the linked flux.
inline double loop_flux_gradient(const magnetics::MagnetSpec& magnet, double side,
                                 double z, double h) {
  return -magnetics::flux_gradient(magnet, magnetics::RectLoop::square(side, z), h);
}

/// Derivative of the linked flux with respect to the magnet displacement.
inline double coil_flux_gradient(const magnetics::MagnetSpec& magnet,
                                 const CoilSpec& coil, double magnet_z_offset,
                                 std::optional<double> h = std::nullopt) {
  const auto g = turn_sides(coil);
  const double z = loop_height(magnet, coil, magnet_z_offset);
  const double step = h.value_or(default_step(magnet, coil, magnet_z_offset));
  double total = 0.0;
  for (double side : g.sides) total += loop_flux_gradient(magnet, side, z, step);
  return total;
}

}  // namespace microgen::coil
