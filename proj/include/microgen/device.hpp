#pragma once

// A complete microgenerator description and the reductions from it to the
// per-module inputs.

#include <optional>

#include "microgen/coil.hpp"
#include "microgen/magnetics.hpp"
#include "microgen/response.hpp"
#include "microgen/suspension.hpp"

namespace microgen {

inline constexpr double kDefaultDampingRatio = 0.05;
inline constexpr double kDefaultCoilGap = 10e-6;  // m

struct Device {
  suspension::MaterialParams material;
  suspension::BeamSpec beam;
  suspension::PlateSpec plate;
  magnetics::MagnetSpec magnet;
  /// plane_height holds the coil-to-magnet gap.
  coil::CoilSpec coil;
  /// Area the sound pressure acts on; the plate footprint when unset.
  std::optional<double> effective_area;
  response::DriveSpec drive;
  double damping_ratio = kDefaultDampingRatio;
  bool include_beam_mass = false;

  double coil_gap() const { return coil.plane_height; }
};

/// The reference device: suspension, plate and magnet of the analysed
/// design, a 15-turn electroplated-Ni coil whose innermost turn sits over
/// the magnet edges, and a 94 dB drive at 1 kHz.
inline Device paper_nominal() {
  Device d;
  d.material = {2e11, 8910.0, 9000.0, 660e6, 1120e6};
  d.beam = {800e-6, 60e-6, 20e-6, 4};
  d.plate = {2000e-6, 2000e-6, 20e-6};
  d.magnet = {2000e-6, 2000e-6, 500e-6, 1.2};
  d.coil.turns = 15;
  d.coil.trace_width = 20e-6;
  d.coil.gap = 20e-6;
  d.coil.trace_thickness = 10e-6;
  d.coil.inner_side = 2000e-6;
  d.coil.resistivity = coil::kNickelResistivity;
  d.coil.plane_height = kDefaultCoilGap;
  d.drive = {response::DriveKind::spl, 94.0, 1000.0};
  return d;
}

inline suspension::ModalResult modal(const Device& d) {
  return suspension::modal(d.material, d.beam, d.plate, d.magnet, d.include_beam_mass);
}

inline response::OscillatorParams oscillator(const Device& d) {
  const auto m = modal(d);
  return {m.effective_mass, m.stiffness_total, d.damping_ratio};
}

inline double acoustic_area(const Device& d) {
  return d.effective_area.value_or(d.plate.area());
}

/// Pressure amplitude of a pressure or SPL drive.
inline double drive_pressure(const response::DriveSpec& drive) {
  return drive.kind == response::DriveKind::spl ? response::spl_to_pressure(drive.value)
                                                : drive.value;
}

/// Coil flux gradient at the rest position, dPhi/d(offset).
inline double rest_flux_gradient(const Device& d) {
  return coil::coil_flux_gradient(d.magnet, d.coil, 0.0);
}

/// Per-frequency model of the device under `drive`. The load defaults to a
/// matched load; a precomputed flux gradient skips the quadrature.
inline response::HarvesterModel harvester_model(const Device& d,
                                                const response::DriveSpec& drive,
                                                std::optional<double> load_resistance = {},
                                                std::optional<double> flux_gradient = {}) {
  drive.validate();
  response::HarvesterModel m;
  m.osc = oscillator(d);
  if (drive.kind == response::DriveKind::displacement) {
    m.prescribed_displacement = drive.value;
  } else {
    m.force_amplitude = response::acoustic_force(drive_pressure(drive), acoustic_area(d));
  }
  m.flux_gradient = flux_gradient ? *flux_gradient : rest_flux_gradient(d);
  const double rc = coil::resistance(d.coil);
  m.circuit = {rc, load_resistance.value_or(rc)};
  return m;
}

inline response::HarvesterModel harvester_model(const Device& d) {
  return harvester_model(d, d.drive);
}

}  // namespace microgen
