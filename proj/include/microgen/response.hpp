#pragma once

// Driven response of the suspended magnet: steady-state amplitude, induced
// EMF, delivered power, time-domain integration and frequency sweeps.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "microgen/coil.hpp"
#include "microgen/error.hpp"
#include "microgen/magnetics.hpp"
#include "microgen/suspension.hpp"

namespace microgen::response {

inline constexpr double kReferencePressure = 20e-6;  // Pa, 0 dB SPL

enum class DriveKind { pressure, spl, displacement };

inline const char* to_string(DriveKind k) {
  switch (k) {
    case DriveKind::pressure: return "pressure";
    case DriveKind::spl: return "spl";
    case DriveKind::displacement: return "displacement";
  }
  return "unknown";
}

/// Harmonic acoustic forcing. `value` is a pressure amplitude (Pa), a sound
/// pressure level (dB re 20 uPa) or a prescribed displacement amplitude (m).
struct DriveSpec {
  DriveKind kind = DriveKind::spl;
  double value = 0.0;
  double frequency = 0.0;  // Hz

  void validate() const {
    detail::require(std::isfinite(value) && std::isfinite(frequency),
                    "drive: non-finite value");
    detail::require(frequency > 0, "drive: frequency must be positive");
    detail::require(kind == DriveKind::spl || value >= 0,
                    "drive: pressure and displacement must be non-negative");
  }
};

struct OscillatorParams {
  double mass = 0.0;          // kg
  double stiffness = 0.0;     // N/m
  double damping_ratio = 0.0;

  double omega_n() const { return std::sqrt(stiffness / mass); }
  double natural_frequency() const { return omega_n() / (2.0 * std::numbers::pi); }
  double damping_coefficient() const {
    return 2.0 * damping_ratio * std::sqrt(stiffness * mass);
  }
  /// Frequency of the displacement-amplitude peak, f1 sqrt(1 - 2 zeta^2).
  double peak_frequency() const {
    return natural_frequency() *
           std::sqrt(std::max(0.0, 1.0 - 2.0 * damping_ratio * damping_ratio));
  }

  void validate() const {
    detail::require(mass > 0 && stiffness > 0, "oscillator: mass and stiffness must be positive");
    detail::require(damping_ratio >= 0 && damping_ratio < 1,
                    "oscillator: damping ratio must lie in [0, 1)");
  }
};

struct ResponsePoint {
  double frequency = 0.0;      // Hz
  double amplitude = 0.0;      // m
  double velocity_peak = 0.0;  // m/s
  double emf_pp = 0.0;         // V
  double load_power = 0.0;     // W
};

using ResponseCurve = std::vector<ResponsePoint>;

struct LoadCircuit {
  double coil_resistance = 0.0;  // ohm
  double load_resistance = 0.0;  // ohm
};

inline double spl_to_pressure(double spl_db) {
  detail::require(std::isfinite(spl_db), "spl_to_pressure: non-finite level");
  return kReferencePressure * std::pow(10.0, spl_db / 20.0);
}

inline double acoustic_force(double pressure, double area) {
  detail::require(pressure >= 0 && area > 0,
                  "acoustic_force: pressure must be >= 0 and area > 0");
  return pressure * area;
}

/// Force on the plate footprint.
inline double acoustic_force(double pressure, const suspension::PlateSpec& plate) {
  return acoustic_force(pressure, plate.area());
}

/// Steady-state amplitude of m z'' + c z' + k z = F0 sin(2 pi f t). An
/// undamped oscillator driven exactly at resonance returns +infinity.
inline double steady_amplitude(const OscillatorParams& osc, double force_amplitude,
                               double f) {
  osc.validate();
  detail::require(f > 0 && std::isfinite(f), "steady_amplitude: frequency must be positive");
  detail::require(force_amplitude >= 0, "steady_amplitude: force must be >= 0");
  const double r = f / osc.natural_frequency();
  const double a = 1.0 - r * r;
  const double b = 2.0 * osc.damping_ratio * r;
  const double den = std::sqrt(a * a + b * b);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return force_amplitude / osc.stiffness / den;
}

/// Peak-to-peak EMF of the linearised Faraday law, 2 |dPhi/dz| z0 2 pi f.
inline double emf_pp(double flux_gradient, double amplitude, double f) {
  detail::require(amplitude >= 0 && f >= 0, "emf_pp: amplitude and frequency must be >= 0");
  return 2.0 * std::abs(flux_gradient) * amplitude * 2.0 * std::numbers::pi * f;
}

inline double load_power(double emf_rms, const LoadCircuit& circuit) {
  detail::require(circuit.coil_resistance >= 0 && circuit.load_resistance >= 0,
                  "load_power: resistances must be >= 0");
  const double total = circuit.coil_resistance + circuit.load_resistance;
  if (total == 0.0) return 0.0;
  return emf_rms * emf_rms * circuit.load_resistance / (total * total);
}

struct SeriesArray {
  double emf = 0.0;         // V
  double resistance = 0.0;  // ohm
};

/// n identical in-phase units in series.
inline SeriesArray array_series(double unit_emf, double unit_resistance, int n) {
  detail::require(n >= 1, "array_series: unit count must be >= 1");
  return {n * unit_emf, n * unit_resistance};
}

// ---------------------------------------------------------------------------
// Time domain

/// Uniformly sampled force waveform, linearly interpolated; zero outside the
/// sampled window.
struct SampledWaveform {
  double dt = 0.0;
  std::vector<double> samples;

  double operator()(double t) const {
    if (samples.empty() || t < 0) return 0.0;
    const double u = t / dt;
    const double last = static_cast<double>(samples.size() - 1);
    if (u > last) return 0.0;
    if (samples.size() == 1) return samples[0];
    const auto i = std::min(static_cast<std::size_t>(u), samples.size() - 2);
    const double w = u - static_cast<double>(i);
    return (1.0 - w) * samples[i] + w * samples[i + 1];
  }

  static SampledWaveform sinusoid(double amplitude, double f, double dt, double duration) {
    SampledWaveform w;
    w.dt = dt;
    const auto n = static_cast<std::size_t>(std::ceil(duration / dt)) + 2;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      w.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * f * dt * static_cast<double>(i));
    }
    return w;
  }
};

/// Coil flux sampled over magnet offsets in [-half_span, half_span] and
/// interpolated by a cubic B-spline; the EMF uses its derivative. Samples
/// are stored relative to the rest position.
class FluxProfile {
 public:
  static constexpr int kDefaultPoints = 17;

  FluxProfile(const magnetics::MagnetSpec& magnet, const coil::CoilSpec& coil,
              double half_span, int points = kDefaultPoints,
              double rel_tol = magnetics::kFluxRelTol)
      : half_span_(half_span) {
    detail::require(half_span > 0 && points >= 5 && points % 2 == 1,
                    "flux profile: need a positive span and an odd point count >= 5");
    if (half_span >= coil.plane_height) {
      throw DomainError("flux profile: offset span reaches the coil plane");
    }
    const double step = 2.0 * half_span / (points - 1);
    std::vector<double> change(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
      const int j = i - (points - 1) / 2;  // exact zero at the centre
      change[static_cast<std::size_t>(i)] =
          j == 0 ? 0.0 : coil::coil_flux_change(magnet, coil, j * step, rel_tol);
    }
    // Exact end slopes; estimated ones cost accuracy near the span edges.
    spline_.emplace(change.begin(), change.end(), -half_span, step,
                    coil::coil_flux_gradient(magnet, coil, -half_span),
                    coil::coil_flux_gradient(magnet, coil, half_span));
  }

  double half_span() const { return half_span_; }
  bool contains(double offset) const { return std::abs(offset) <= half_span_; }
  /// Phi(offset) - Phi(0).
  double flux_change(double offset) const { return (*spline_)(offset); }
  double gradient(double offset) const { return spline_->prime(offset); }

 private:
  double half_span_;
  std::optional<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
};

struct SimulationOptions {
  double dt = 0.0;        // s
  double duration = 0.0;  // s
  double initial_displacement = 0.0;
  double initial_velocity = 0.0;
  /// Relative energy growth tolerated in an unforced, undamped run before
  /// the step is declared unstable.
  double energy_growth_limit = 1e-3;
};

struct Trace {
  std::vector<double> time;
  std::vector<double> displacement;
  std::vector<double> velocity;
  std::vector<double> emf;  // V, zero without a flux profile

  std::size_t size() const { return time.size(); }
};

inline double mechanical_energy(const OscillatorParams& osc, double z, double v) {
  return 0.5 * osc.stiffness * z * z + 0.5 * osc.mass * v * v;
}

/// Integrate m z'' + c z' + k z = F(t) with classical fourth-order
/// Runge-Kutta. With a flux profile the EMF is dPhi/dz(z) * z'.
template <class Force>
Trace time_simulate(const OscillatorParams& osc, const Force& force,
                    const SimulationOptions& opt, const FluxProfile* profile = nullptr) {
  osc.validate();
  const double f1 = osc.natural_frequency();
  detail::require(opt.duration > 0, "time_simulate: duration must be positive");
  detail::require(opt.dt > 0 && opt.dt < 1.0 / (20.0 * f1),
                  "time_simulate: dt must satisfy 0 < dt < 1/(20 f1)");

  const double m = osc.mass, k = osc.stiffness, c = osc.damping_coefficient();
  auto accel = [&](double t, double z, double v) { return (force(t) - c * v - k * z) / m; };

  const auto steps = static_cast<std::size_t>(std::llround(opt.duration / opt.dt));
  Trace tr;
  tr.time.reserve(steps + 1);
  tr.displacement.reserve(steps + 1);
  tr.velocity.reserve(steps + 1);
  tr.emf.reserve(steps + 1);

  double z = opt.initial_displacement, v = opt.initial_velocity;
  const double e0 = mechanical_energy(osc, z, v);
  bool unforced = true;

  auto record = [&](double t) {
    double emf = 0.0;
    if (profile != nullptr) {
      if (!profile->contains(z)) {
        throw NumericalError("time_simulate: displacement left the flux profile span");
      }
      emf = profile->gradient(z) * v;
    }
    tr.time.push_back(t);
    tr.displacement.push_back(z);
    tr.velocity.push_back(v);
    tr.emf.push_back(emf);
  };

  record(0.0);
  const double h = opt.dt;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * h;
    const double fa = force(t), fb = force(t + 0.5 * h), fc = force(t + h);
    unforced = unforced && fa == 0.0 && fb == 0.0 && fc == 0.0;

    const double k1z = v, k1v = accel(t, z, v);
    const double k2z = v + 0.5 * h * k1v, k2v = accel(t + 0.5 * h, z + 0.5 * h * k1z, k2z);
    const double k3z = v + 0.5 * h * k2v, k3v = accel(t + 0.5 * h, z + 0.5 * h * k2z, k3z);
    const double k4z = v + h * k3v, k4v = accel(t + h, z + h * k3z, k4z);
    z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);

    if (!std::isfinite(z) || !std::isfinite(v)) {
      throw NumericalError("time_simulate: state became non-finite");
    }
    if (unforced && osc.damping_ratio == 0.0 && e0 > 0.0 &&
        mechanical_energy(osc, z, v) > e0 * (1.0 + opt.energy_growth_limit)) {
      throw NumericalError("time_simulate: energy growth without forcing, step unstable");
    }
    record(static_cast<double>(n + 1) * h);
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Frequency domain

/// Everything the per-frequency response needs, already reduced from the
/// device description.
struct HarvesterModel {
  OscillatorParams osc;
  /// Force amplitude (N) for pressure drives; ignored when
  /// prescribed_displacement is set.
  double force_amplitude = 0.0;
  std::optional<double> prescribed_displacement;  // m
  double flux_gradient = 0.0;  // Wb/m
  LoadCircuit circuit;
};

inline ResponsePoint evaluate(const HarvesterModel& model, double f) {
  ResponsePoint p;
  p.frequency = f;
  p.amplitude = model.prescribed_displacement
                    ? *model.prescribed_displacement
                    : steady_amplitude(model.osc, model.force_amplitude, f);
  p.velocity_peak = 2.0 * std::numbers::pi * f * p.amplitude;
  p.emf_pp = emf_pp(model.flux_gradient, p.amplitude, f);
  const double emf_rms = p.emf_pp / (2.0 * std::numbers::sqrt2);
  p.load_power = load_power(emf_rms, model.circuit);
  return p;
}

enum class GridSpacing { linear, log };

inline std::vector<double> frequency_grid(double f_lo, double f_hi, int n,
                                          GridSpacing spacing = GridSpacing::linear) {
  if (!(f_lo < f_hi)) throw DomainError("frequency grid: f_lo must be below f_hi");
  detail::require(f_lo > 0, "frequency grid: frequencies must be positive");
  detail::require(n >= 2, "frequency grid: at least two points");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / (n - 1);
    out[static_cast<std::size_t>(i)] =
        spacing == GridSpacing::linear
            ? f_lo + u * (f_hi - f_lo)
            : std::exp(std::log(f_lo) + u * (std::log(f_hi) - std::log(f_lo)));
  }
  out.back() = f_hi;
  return out;
}

/// Response at each listed frequency, in the listed order.
inline ResponseCurve frequency_sweep(const HarvesterModel& model,
                                     const std::vector<double>& frequencies) {
  ResponseCurve curve;
  curve.reserve(frequencies.size());
  for (double f : frequencies) curve.push_back(evaluate(model, f));
  return curve;
}

inline ResponseCurve frequency_sweep(const HarvesterModel& model, double f_lo, double f_hi,
                                     int n_points, GridSpacing spacing = GridSpacing::linear) {
  return frequency_sweep(model, frequency_grid(f_lo, f_hi, n_points, spacing));
}

}  // namespace microgen::response
