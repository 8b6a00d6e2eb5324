#pragma once

// Command implementations behind the CLI. Each returns a ResultTable; module
// errors propagate as exceptions and exit_code() maps them to process exit
// statuses.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "microgen/design.hpp"
#include "microgen/device.hpp"
#include "microgen/error.hpp"
#include "microgen/result_table.hpp"

namespace microgen::cli {

inline constexpr const char* kCommands[] = {"modal", "flux",     "emf",    "sweep",  "simulate",
                                            "fit",   "optimize", "report", "stress"};

struct CommandOptions {
  std::optional<double> f_lo;
  std::optional<double> f_hi;
  std::optional<int> points;
  bool log_grid = false;
  std::optional<double> target_hz;
  std::vector<std::string> variables;
  std::vector<double> lo;
  std::vector<double> hi;
  std::uint64_t seed = 1;
  int budget = 400;
  int n_series = 1;
  std::optional<double> load_ohms;
  std::optional<double> amplitude;
  std::optional<double> duration;
  std::optional<double> dt;
  double band_lo = 200.0;
  double band_hi = 1500.0;
  double die_side = design::kDefaultDieSide;
  design::MeasuredReference measured = design::paper_measurements();
};

inline int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::domain:
    case ErrorCategory::parse: return 2;
    case ErrorCategory::infeasible: return 3;
    case ErrorCategory::numerical: return 4;
  }
  return 1;
}

namespace detail {

inline double or_nan(const std::optional<double>& v) {
  return v.value_or(std::numeric_limits<double>::quiet_NaN());
}

inline std::vector<design::DesignVariable> design_variables(const CommandOptions& opt) {
  if (opt.variables.empty()) throw DomainError("--variable is required");
  if (opt.lo.size() != opt.variables.size() || opt.hi.size() != opt.variables.size()) {
    throw DomainError("each --variable needs a matching --lo and --hi");
  }
  std::vector<design::DesignVariable> out;
  for (std::size_t i = 0; i < opt.variables.size(); ++i) {
    out.push_back({design::parse_variable(opt.variables[i]), opt.lo[i], opt.hi[i]});
  }
  return out;
}

inline const char* variable_unit(design::Variable v) {
  return design::is_integer(v) ? "count" : "m";
}

}  // namespace detail

inline io::ResultTable modal_table(const Device& d) {
  const auto m = modal(d);
  io::ResultTable t;
  t.add_column("stiffness_total", "N/m");
  t.add_column("effective_mass", "kg");
  t.add_column("natural_frequency", "Hz");
  t.add_row({m.stiffness_total, m.effective_mass, m.natural_frequency});
  return t;
}

/// Linked flux and its gradient over magnet offsets; the default range is
/// half the coil gap either side of rest.
inline io::ResultTable flux_table(const Device& d, const CommandOptions& opt) {
  const double lo = opt.f_lo.value_or(-0.5 * d.coil_gap());
  const double hi = opt.f_hi.value_or(0.5 * d.coil_gap());
  const int n = opt.points.value_or(21);
  if (!(lo < hi) || n < 2) throw DomainError("flux: need lo < hi and at least 2 points");
  io::ResultTable t;
  t.add_column("offset", "m");
  t.add_column("flux", "Wb");
  t.add_column("flux_gradient", "Wb/m");
  for (int i = 0; i < n; ++i) {
    const double s = lo + (hi - lo) * i / (n - 1);
    t.add_row({s, coil::coil_flux(d.magnet, d.coil, s),
               coil::coil_flux_gradient(d.magnet, d.coil, s)});
  }
  return t;
}

inline io::ResultTable emf_table(const Device& d, const CommandOptions& opt) {
  microgen::detail::require(opt.n_series >= 1, "--n-series must be >= 1");
  const auto model = harvester_model(d, d.drive, opt.load_ohms);
  const auto p = response::evaluate(model, d.drive.frequency);
  const auto array = response::array_series(p.emf_pp, model.circuit.coil_resistance, opt.n_series);
  const double array_load = opt.load_ohms.value_or(array.resistance);
  const double array_power = response::load_power(
      array.emf / (2.0 * std::numbers::sqrt2), {array.resistance, array_load});
  io::ResultTable t;
  t.add_column("frequency", "Hz");
  t.add_column("amplitude", "m");
  t.add_column("velocity_peak", "m/s");
  t.add_column("flux_gradient", "Wb/m");
  t.add_column("emf_pp", "V");
  t.add_column("coil_resistance", "ohm");
  t.add_column("load_resistance", "ohm");
  t.add_column("load_power", "W");
  t.add_column("n_series", "count");
  t.add_column("array_emf_pp", "V");
  t.add_column("array_resistance", "ohm");
  t.add_column("array_load_power", "W");
  t.add_row({p.frequency, p.amplitude, p.velocity_peak, model.flux_gradient, p.emf_pp,
             model.circuit.coil_resistance, model.circuit.load_resistance, p.load_power,
             static_cast<double>(opt.n_series), array.emf, array.resistance, array_power});
  return t;
}

inline io::ResultTable sweep_table(const Device& d, const CommandOptions& opt) {
  const auto model = harvester_model(d, d.drive, opt.load_ohms);
  const auto curve = response::frequency_sweep(
      model, opt.f_lo.value_or(100.0), opt.f_hi.value_or(2000.0), opt.points.value_or(191),
      opt.log_grid ? response::GridSpacing::log : response::GridSpacing::linear);
  io::ResultTable t;
  t.add_column("frequency", "Hz");
  t.add_column("amplitude", "m");
  t.add_column("velocity_peak", "m/s");
  t.add_column("emf_pp", "V");
  t.add_column("load_power", "W");
  for (const auto& p : curve) {
    t.add_row({p.frequency, p.amplitude, p.velocity_peak, p.emf_pp, p.load_power});
  }
  return t;
}

/// Sinusoidal drive at the device drive frequency, from rest. A prescribed
/// displacement drive is converted to the force whose steady amplitude it is.
inline io::ResultTable simulate_table(const Device& d, const CommandOptions& opt) {
  const auto osc = oscillator(d);
  const double f = d.drive.frequency;
  double force = 0.0;
  if (d.drive.kind == response::DriveKind::displacement) {
    force = d.drive.value / response::steady_amplitude(osc, 1.0, f);
  } else {
    force = response::acoustic_force(drive_pressure(d.drive), acoustic_area(d));
  }
  const double z_ss = response::steady_amplitude(osc, force, f);
  const double tau = 1.0 / (osc.damping_ratio * osc.omega_n());
  const double duration = opt.duration.value_or(20.0 * tau);
  const double dt = opt.dt.value_or(1.0 / (200.0 * std::max(f, osc.natural_frequency())));
  // Transients from rest stay within twice the steady amplitude.
  const double span = 2.2 * z_ss;
  if (span >= d.coil_gap()) {
    throw DomainError("simulate: expected amplitude reaches the coil plane");
  }
  const response::FluxProfile profile(d.magnet, d.coil, span);
  const auto forcing = response::SampledWaveform::sinusoid(force, f, dt, duration);
  response::SimulationOptions sim;
  sim.dt = dt;
  sim.duration = duration;
  const auto tr = response::time_simulate(osc, forcing, sim, &profile);
  io::ResultTable t;
  t.add_column("time", "s");
  t.add_column("displacement", "m");
  t.add_column("velocity", "m/s");
  t.add_column("emf", "V");
  for (std::size_t i = 0; i < tr.size(); ++i) {
    t.add_row({tr.time[i], tr.displacement[i], tr.velocity[i], tr.emf[i]});
  }
  return t;
}

inline io::ResultTable fit_table(const Device& d, const CommandOptions& opt) {
  if (!opt.target_hz) throw DomainError("fit: --target-hz is required");
  if (opt.variables.size() != 1) throw DomainError("fit: exactly one --variable");
  std::vector<design::DesignVariable> vars;
  if (opt.lo.empty() && opt.hi.empty()) {
    // Default bracket: a factor of four either side of the current value.
    const auto v = design::parse_variable(opt.variables[0]);
    const double x = design::get(d, v);
    vars.push_back({v, design::is_integer(v) ? 1.0 : 0.25 * x, 4.0 * x});
  } else {
    vars = detail::design_variables(opt);
  }
  const double value = design::match_frequency(d, vars[0], *opt.target_hz);
  const double f1 = design::natural_frequency(design::with(d, vars[0].variable, value));
  io::ResultTable t;
  t.add_column("variable", "-");
  t.add_column("value", detail::variable_unit(vars[0].variable));
  t.add_column("natural_frequency", "Hz");
  t.add_column("target", "Hz");
  t.add_row({std::string(design::to_string(vars[0].variable)), value, f1, *opt.target_hz});
  return t;
}

/// Full evaluation log; the row of the returned design is flagged best = 1.
inline io::ResultTable optimize_table(const Device& d, const CommandOptions& opt) {
  const auto vars = detail::design_variables(opt);
  design::SearchOptions search;
  search.band = {opt.band_lo, opt.band_hi};
  search.die_side = opt.die_side;
  search.budget = opt.budget;
  search.seed = opt.seed;
  const auto result = design::maximize_emf(d, vars, d.drive, search);
  io::ResultTable t;
  t.add_column("start", "-");
  for (const auto& v : vars) {
    t.add_column(std::string(design::to_string(v.variable)), detail::variable_unit(v.variable));
  }
  t.add_column("natural_frequency", "Hz");
  t.add_column("amplitude", "m");
  t.add_column("emf_pp", "V");
  t.add_column("yield_margin_low", "-");
  t.add_column("footprint", "m");
  t.add_column("feasible", "-");
  t.add_column("objective", "-");
  t.add_column("best", "-");
  bool marked = false;
  for (const auto& rec : result.log) {
    std::vector<io::Cell> row{static_cast<double>(rec.start)};
    for (double v : rec.values) row.emplace_back(v);
    const bool best = !marked && rec.values == result.values &&
                      rec.metrics.emf_pp == result.metrics.emf_pp && rec.violation.feasible();
    marked = marked || best;
    for (double v : {rec.metrics.f1, rec.metrics.amplitude, rec.metrics.emf_pp,
                     rec.metrics.margin.low, rec.metrics.footprint,
                     rec.violation.feasible() ? 1.0 : 0.0, rec.objective, best ? 1.0 : 0.0}) {
      row.emplace_back(v);
    }
    t.add_row(std::move(row));
  }
  return t;
}

inline io::ResultTable report_table(const Device& d, const CommandOptions& opt) {
  const auto rep = design::consistency_report(d, opt.measured);
  io::ResultTable t;
  t.add_column("quantity", "-");
  t.add_column("unit", "-");
  t.add_column("model_nominal", "per-row");
  t.add_column("model_at_measured_thickness", "per-row");
  t.add_column("measured", "per-row");
  t.add_column("measured_over_model", "-");
  t.add_column("model_over_measured", "-");
  for (const auto& r : rep.rows) {
    t.add_row({r.quantity, r.unit, r.model_nominal, detail::or_nan(r.model_at_measured_thickness),
               detail::or_nan(r.measured), detail::or_nan(r.measured_over_model()),
               detail::or_nan(r.model_over_measured())});
  }
  return t;
}

/// Stress at --amplitude, or by default at the drive's steady amplitude.
inline io::ResultTable stress_table(const Device& d, const CommandOptions& opt) {
  double amplitude = 0.0;
  if (opt.amplitude) {
    amplitude = *opt.amplitude;
  } else if (d.drive.kind == response::DriveKind::displacement) {
    amplitude = d.drive.value;
  } else {
    amplitude = response::evaluate(harvester_model(d, d.drive, std::nullopt, 0.0),
                                   d.drive.frequency).amplitude;
  }
  const double stress = suspension::max_bending_stress(d.material, d.beam, amplitude);
  const auto margin = suspension::yield_margin(stress, d.material);
  io::ResultTable t;
  t.add_column("amplitude", "m");
  t.add_column("stress", "Pa");
  t.add_column("yield_margin_low", "-");
  t.add_column("yield_margin_high", "-");
  t.add_column("yield_risk", "-");
  t.add_row({amplitude, stress, margin.low, margin.high, margin.at_risk() ? 1.0 : 0.0});
  return t;
}

inline io::ResultTable run_command(const std::string& command, const Device& d,
                                   const CommandOptions& opt = {}) {
  if (command == "modal") return modal_table(d);
  if (command == "flux") return flux_table(d, opt);
  if (command == "emf") return emf_table(d, opt);
  if (command == "sweep") return sweep_table(d, opt);
  if (command == "simulate") return simulate_table(d, opt);
  if (command == "fit") return fit_table(d, opt);
  if (command == "optimize") return optimize_table(d, opt);
  if (command == "report") return report_table(d, opt);
  if (command == "stress") return stress_table(d, opt);
  throw DomainError("unknown command '" + command + "'");
}

}  // namespace microgen::cli
