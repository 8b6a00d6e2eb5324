// microgen: command-line front end for the microgenerator model.
//
//   microgen <command> --device <path> [options]
//
// Results go to stdout (or --out) as CSV. Failures print one line
// `error: <category>: <message>` on stderr and exit 2 (parse/validation),
// 3 (infeasible design) or 4 (numerical failure).

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "microgen/commands.hpp"
#include "microgen/device_file.hpp"
#include "microgen/result_table.hpp"

namespace {

int fail(microgen::ErrorCategory category, const std::string& what) {
  std::cerr << "error: " << microgen::to_string(category) << ": " << what << '\n';
  return microgen::cli::exit_code(category);
}

}  // namespace

int main(int argc, char** argv) {
  using microgen::cli::CommandOptions;

  CLI::App app{"Analytic model of an acoustically driven electromagnetic microgenerator"};
  app.require_subcommand(1, 1);

  std::string device_path;
  std::string out_path;
  CommandOptions opt;
  double measured_resonance = 0, measured_thickness = 0, measured_amplitude = 0;
  double measured_emf = 0, measured_resistance = 0;

  for (const char* name : microgen::cli::kCommands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--device", device_path, "device file (INI)")->required();
    sub->add_option("--out", out_path, "write CSV here instead of stdout");
    const std::string cmd = name;
    if (cmd == "flux" || cmd == "sweep") {
      sub->add_option("--f-lo", opt.f_lo, cmd == "flux" ? "lowest offset (m)" : "lowest frequency (Hz)");
      sub->add_option("--f-hi", opt.f_hi, cmd == "flux" ? "highest offset (m)" : "highest frequency (Hz)");
      sub->add_option("--points", opt.points, "grid points");
    }
    if (cmd == "sweep") sub->add_flag("--log", opt.log_grid, "log-spaced frequency grid");
    if (cmd == "emf" || cmd == "sweep") {
      sub->add_option("--load", opt.load_ohms, "load resistance (ohm); default matched");
    }
    if (cmd == "emf") sub->add_option("--n-series", opt.n_series, "units in series");
    if (cmd == "simulate") {
      sub->add_option("--duration", opt.duration, "simulated time (s)");
      sub->add_option("--dt", opt.dt, "time step (s)");
    }
    if (cmd == "fit" || cmd == "optimize") {
      sub->add_option("--variable", opt.variables, "design variable")->required();
      sub->add_option("--lo", opt.lo, "lower bound, native units");
      sub->add_option("--hi", opt.hi, "upper bound, native units");
    }
    if (cmd == "fit") sub->add_option("--target-hz", opt.target_hz, "target f1 (Hz)")->required();
    if (cmd == "optimize") {
      sub->add_option("--seed", opt.seed, "random seed");
      sub->add_option("--budget", opt.budget, "total evaluations across starts");
      sub->add_option("--band-lo", opt.band_lo, "lowest allowed f1 (Hz)");
      sub->add_option("--band-hi", opt.band_hi, "highest allowed f1 (Hz)");
      sub->add_option("--die", opt.die_side, "die edge (m)");
    }
    if (cmd == "report") {
      sub->add_option("--measured-resonance", measured_resonance, "Hz");
      sub->add_option("--measured-thickness", measured_thickness, "m");
      sub->add_option("--measured-amplitude", measured_amplitude, "m");
      sub->add_option("--measured-emf", measured_emf, "peak-to-peak V");
      sub->add_option("--measured-resistance", measured_resistance, "ohm");
    }
    if (cmd == "stress") sub->add_option("--amplitude", opt.amplitude, "tip deflection (m)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(microgen::ErrorCategory::parse, e.what());
  }

  auto override_if_set = [](std::optional<double>& field, double v) {
    if (v > 0) field = v;
  };
  override_if_set(opt.measured.resonance, measured_resonance);
  override_if_set(opt.measured.thickness, measured_thickness);
  override_if_set(opt.measured.amplitude, measured_amplitude);
  override_if_set(opt.measured.emf_pp, measured_emf);
  override_if_set(opt.measured.coil_resistance, measured_resistance);

  try {
    const auto device = microgen::io::parse_device(device_path);
    const auto table =
        microgen::cli::run_command(app.get_subcommands().front()->get_name(), device, opt);
    if (out_path.empty()) {
      microgen::io::write_csv(std::cout, table);
    } else {
      std::ofstream out(out_path);
      if (!out) return fail(microgen::ErrorCategory::parse, "cannot write '" + out_path + "'");
      microgen::io::write_csv(out, table);
    }
  } catch (const microgen::Error& e) {
    return fail(e.category(), e.what());
  } catch (const std::exception& e) {
    return fail(microgen::ErrorCategory::numerical, e.what());
  }
  return 0;
}
