#pragma once

// Lumped model of the beam-suspended plate carrying the magnet. Each beam is
// fixed-guided over its full length (anchored at the substrate, guided by the
// rigid plate); the plate and magnet translate together in the piston mode.

#include <cmath>
#include <limits>
#include <numbers>

#include "microgen/error.hpp"
#include "microgen/magnetics.hpp"

namespace microgen::suspension {

/// Participating fraction of beam mass for a fixed-guided beam.
inline constexpr double kBeamMassFactor = 13.0 / 35.0;

struct MaterialParams {
  double youngs_modulus = 0.0;     // Pa
  double structure_density = 0.0; // kg/m^3, plate and beams
  double magnet_density = 0.0;     // kg/m^3
  double yield_low = 0.0;          // Pa
  double yield_high = 0.0;         // Pa

  void validate() const {
    detail::require(youngs_modulus > 0 && structure_density > 0 && magnet_density > 0,
                    "material: modulus and densities must be positive");
    detail::require(yield_low > 0 && yield_high >= yield_low,
                    "material: yield range must satisfy 0 < low <= high");
  }
};

struct BeamSpec {
  double length = 0.0;     // m
  double width = 0.0;      // m
  double thickness = 0.0;  // m
  int count = 4;

  double volume() const { return length * width * thickness; }

  void validate() const {
    detail::require(length > 0 && width > 0 && thickness > 0,
                    "beam: dimensions must be positive");
    detail::require(count >= 1, "beam: count must be at least 1");
  }
};

struct PlateSpec {
  double length = 0.0;     // m
  double width = 0.0;      // m
  double thickness = 0.0;  // m

  double area() const { return length * width; }
  double volume() const { return length * width * thickness; }

  void validate() const {
    detail::require(length > 0 && width > 0 && thickness > 0,
                    "plate: dimensions must be positive");
  }
};

struct ModalResult {
  double stiffness_total = 0.0;    // N/m
  double effective_mass = 0.0;     // kg
  double natural_frequency = 0.0;  // Hz
};

/// Out-of-plane stiffness of one fixed-guided beam, 12 E I / L^3.
inline double beam_stiffness(const MaterialParams& mat, const BeamSpec& beam) {
  beam.validate();
  detail::require(mat.youngs_modulus > 0, "material: modulus must be positive");
  const double inertia = beam.width * std::pow(beam.thickness, 3) / 12.0;
  return 12.0 * mat.youngs_modulus * inertia / std::pow(beam.length, 3);
}

inline double total_stiffness(const MaterialParams& mat, const BeamSpec& beam) {
  return beam.count * beam_stiffness(mat, beam);
}

/// Rigid plate plus magnet; with include_beam_mass, 13/35 of the beam mass.
/// A magnet of zero size contributes nothing.
inline double effective_mass(const MaterialParams& mat, const PlateSpec& plate,
                             const magnetics::MagnetSpec& magnet,
                             const BeamSpec& beam, bool include_beam_mass = false) {
  plate.validate();
  beam.validate();
  detail::require(mat.structure_density > 0 && mat.magnet_density > 0,
                  "material: densities must be positive");
  detail::require(magnet.length_x >= 0 && magnet.width_y >= 0 && magnet.thickness_z >= 0,
                  "magnet: dimensions must be non-negative");
  double m = mat.structure_density * plate.volume() +
             mat.magnet_density * magnet.volume();
  if (include_beam_mass) {
    m += kBeamMassFactor * beam.count * mat.structure_density * beam.volume();
  }
  return m;
}

/// f1 = sqrt(k / m) / (2 pi).
inline double natural_frequency(double stiffness, double mass) {
  if (!(stiffness > 0) || !(mass > 0)) {
    throw DomainError("natural_frequency: stiffness and mass must be positive");
  }
  return std::sqrt(stiffness / mass) / (2.0 * std::numbers::pi);
}

inline ModalResult modal(const MaterialParams& mat, const BeamSpec& beam,
                         const PlateSpec& plate, const magnetics::MagnetSpec& magnet,
                         bool include_beam_mass = false) {
  ModalResult r;
  r.stiffness_total = total_stiffness(mat, beam);
  r.effective_mass = effective_mass(mat, plate, magnet, beam, include_beam_mass);
  r.natural_frequency = natural_frequency(r.stiffness_total, r.effective_mass);
  return r;
}

/// Outer-fibre stress at the beam ends for a tip deflection: the end moment
/// of a fixed-guided beam is 6 E I delta / L^2, giving 3 E H delta / L^2.
inline double max_bending_stress(const MaterialParams& mat, const BeamSpec& beam,
                                 double deflection) {
  beam.validate();
  detail::require(deflection >= 0, "max_bending_stress: deflection must be >= 0");
  return 3.0 * mat.youngs_modulus * beam.thickness * deflection /
         (beam.length * beam.length);
}

struct YieldMargin {
  double low = 0.0;   // yield_low / stress
  double high = 0.0;  // yield_high / stress
  bool at_risk() const { return low < 1.0; }
  bool unbounded() const { return std::isinf(low); }
};

/// Zero stress gives an unbounded (infinite) margin.
inline YieldMargin yield_margin(double stress, const MaterialParams& mat) {
  detail::require(stress >= 0, "yield_margin: stress must be >= 0");
  if (stress == 0.0) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
  }
  return {mat.yield_low / stress, mat.yield_high / stress};
}

}  // namespace microgen::suspension
