// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "microgen/commands.hpp"
#include "microgen/device_file.hpp"
#include "oracles.hpp"

using namespace microgen;

namespace {

const std::string kDataDir = MICROGEN_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [miss]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome modal_frequency() {
  Outcome o;
  const auto t = cli::run_command("modal", io::parse_device(kDataDir + "/paper_nominal.ini"));
  const double f1 = t.number(0, "natural_frequency");
  o.check(std::abs(f1 - 1007.6) <= 1.0, fmt("f1 = %.2f Hz (1007.6 +- 1)", f1));
  o.check(rel(f1, 1012.0) < 0.025, fmt("%.2f%% from 1012 Hz", 100.0 * rel(f1, 1012.0)));
  return o;
}

Outcome coil_resistance() {
  Outcome o;
  const double r = coil::resistance(io::parse_device(kDataDir + "/paper_nominal.ini").coil);
  o.check(std::abs(r - 53.7) <= 0.5, fmt("R = %.2f ohm (53.7 +- 0.5)", r));
  o.check(rel(r, 58.0) <= 0.15, fmt("%.1f%% from 58 ohm", 100.0 * rel(r, 58.0)));
  return o;
}

Outcome emf_estimate() {
  Outcome o;
  const Device d = io::parse_device(kDataDir + "/paper_emf_estimate.ini");
  const auto t = cli::run_command("emf", d);
  const double emf = t.number(0, "emf_pp");
  const double ratio = emf / 0.58e-3;
  o.check(ratio >= 1.0 / 3.0 && ratio <= 3.0,
          fmt("emf_pp = %.4g mV, %.3g x the 0.58 mV estimate (within x3)", 1e3 * emf, ratio));
  const double g_ref = oracle::coil_gradient(d.magnet, d.coil);
  const double emf_ref = response::emf_pp(g_ref, d.drive.value, d.drive.frequency);
  o.check(rel(emf, emf_ref) <= 1e-3,
          fmt("oracle emf_pp = %.4g mV, rel diff %.2g (<= 1e-3)", 1e3 * emf_ref, rel(emf, emf_ref)));
  return o;
}

Outcome magnetostatics_oracle() {
  Outcome o;
  const auto m = paper_nominal().magnet;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-3e-3, 3e-3);
  double worst = 0.0;
  for (int n = 0; n < 100;) {
    const magnetics::FieldPoint p{u(rng), u(rng), u(rng)};
    const double dx = std::max(std::abs(p.x) - m.half_x(), 0.0);
    const double dy = std::max(std::abs(p.y) - m.half_y(), 0.0);
    const double dz = std::max(std::abs(p.z) - m.half_z(), 0.0);
    if (std::sqrt(dx * dx + dy * dy + dz * dz) < 20e-6) continue;
    ++n;
    const double ref = oracle::bz_surface_charge(m, p.x, p.y, p.z);
    worst = std::max(worst, std::abs(magnetics::bz_at(m, p) - ref) / (std::abs(ref) + 1e-300));
  }
  o.check(worst <= 1e-6, fmt("worst rel err over 100 points %.2g (<= 1e-6)", worst));
  const double z = m.top() + 10e-6;
  const double bz = magnetics::bz_at(m, {0.0, 0.0, z});
  const double axis = oracle::bz_on_axis(m, z);
  o.check(std::abs(bz - 0.245) <= 0.001 && rel(bz, axis) <= 1e-9,
          fmt("on-axis Bz = %.4f T, arctangent formula %.4f T", bz, axis));
  return o;
}

Outcome thickness_what_if() {
  Outcome o;
  const Device d = io::parse_device(kDataDir + "/paper_nominal.ini");
  Device thin = d;
  thin.beam.thickness = 14e-6;
  const double f1 = modal(thin).natural_frequency;
  o.check(rel(f1, 590.0) <= 0.02, fmt("f1(14 um) = %.2f Hz (590 +- 2%%)", f1));
  const auto t = cli::run_command("report", d);
  const double ratio = t.number(0, "model_over_measured");
  o.check(std::abs(ratio - 590.0 / 470.0) <= 0.01,
          fmt("report resonance model/measured = %.4f (~1.26)", ratio));
  return o;
}

Outcome inverse_design() {
  Outcome o;
  const Device d = io::parse_device(kDataDir + "/paper_nominal.ini");
  cli::CommandOptions opt;
  opt.target_hz = 470.0;
  opt.variables = {"beam_thickness"};
  const auto t = cli::run_command("fit", d, opt);
  const double h = t.number(0, "value");
  const double closed_form = d.beam.thickness * std::pow(470.0 / modal(d).natural_frequency, 2.0 / 3.0);
  o.check(std::abs(h - 12.0e-6) <= 0.2e-6 && std::abs(h - closed_form) <= 0.2e-6,
          fmt("H = %.3f um, closed form %.3f um", 1e6 * h, 1e6 * closed_form));
  Device fitted = d;
  fitted.beam.thickness = h;
  const double f = modal(fitted).natural_frequency;
  o.check(std::abs(f - 470.0) <= 0.1, fmt("forward f1 = %.3f Hz (470 +- 0.1)", f));
  return o;
}

Outcome stress_check() {
  Outcome o;
  const Device d = io::parse_device(kDataDir + "/paper_nominal.ini");
  cli::CommandOptions opt;
  opt.amplitude = 50e-6;
  const auto t = cli::run_command("stress", d, opt);
  const double s = t.number(0, "stress");
  o.check(rel(s, 937.5e6) <= 1e-3, fmt("stress = %.2f MPa (937.5 +- 0.1%%)", 1e-6 * s));
  const double lo = t.number(0, "yield_margin_low"), hi = t.number(0, "yield_margin_high");
  o.check(std::abs(lo - 0.704) <= 5e-4 && std::abs(hi - 1.195) <= 5e-4,
          fmt("margins (%.3f, %.3f)", lo, hi));
  return o;
}

double tail_amplitude(const response::Trace& tr, double f, double cycles) {
  const double t_end = tr.time.back();
  double a = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.time[i] >= t_end - cycles / f) a = std::max(a, std::abs(tr.displacement[i]));
  }
  return a;
}

Outcome dynamics_suite() {
  Outcome o;
  const Device d = paper_nominal();
  const auto base = oscillator(d);
  constexpr double kPi = std::numbers::pi;

  double worst = 0.0;
  for (double zeta : {0.01, 0.05, 0.2}) {
    for (double ratio : {0.5, 1.0, 2.0}) {
      auto osc = base;
      osc.damping_ratio = zeta;
      const double f = ratio * osc.natural_frequency();
      response::SimulationOptions opt;
      opt.dt = 1.0 / (200.0 * std::max(f, osc.natural_frequency()));
      opt.duration = 20.0 / (zeta * osc.omega_n()) + 5.0 / f;
      const double force = 1e-5;
      const auto tr = response::time_simulate(
          osc, [&](double t) { return force * std::sin(2.0 * kPi * f * t); }, opt);
      const double expect = response::steady_amplitude(osc, force, f);
      worst = std::max(worst, rel(tail_amplitude(tr, f, 3.0), expect));
    }
  }
  o.check(worst <= 0.01, fmt("RK4 vs steady amplitude worst %.2g (<= 1%%, 9 cases)", worst));

  {
    auto osc = base;
    osc.damping_ratio = 0.0;
    const double f1 = osc.natural_frequency();
    response::SimulationOptions opt;
    opt.dt = 1.0 / (200.0 * f1);
    opt.duration = 50.0 / f1;
    opt.initial_displacement = 1e-6;
    const auto tr = response::time_simulate(osc, [](double) { return 0.0; }, opt);
    const double e0 = response::mechanical_energy(osc, tr.displacement.front(), tr.velocity.front());
    const double e1 = response::mechanical_energy(osc, tr.displacement.back(), tr.velocity.back());
    const double drift = std::abs(e1 - e0) / e0 / 50.0;
    o.check(drift < 1e-6, fmt("energy drift %.2g per cycle (< 1e-6)", drift));
  }

  {
    auto model = harvester_model(d);
    model.osc.damping_ratio = 0.01;
    const double f1 = model.osc.natural_frequency();
    const double step = 0.5;
    const auto curve = response::frequency_sweep(model, f1 - 100.0, f1 + 100.0, 401);
    const auto peak = std::max_element(curve.begin(), curve.end(), [](auto& a, auto& b) {
      return a.amplitude < b.amplitude;
    });
    const double expect = f1 * std::sqrt(1.0 - 2.0 * 0.01 * 0.01);
    o.check(std::abs(peak->frequency - expect) <= step,
            fmt("sweep peak %.2f Hz vs %.2f Hz", peak->frequency, expect));
  }

  {
    const double rc = coil::resistance(d.coil);
    std::vector<double> loads;
    for (int i = 0; i < 1000; ++i) loads.push_back(0.2 * (i + 1) + 0.05);
    std::size_t best = 0;
    for (std::size_t i = 0; i < loads.size(); ++i) {
      if (response::load_power(1e-3, {rc, loads[i]}) > response::load_power(1e-3, {rc, loads[best]})) {
        best = i;
      }
    }
    o.check(std::abs(loads[best] - rc) <= 0.1,
            fmt("power argmax at %.2f ohm, coil %.2f ohm", loads[best], rc));
  }

  {
    const auto unit = cli::run_command("emf", d);
    const double v1 = unit.number(0, "emf_pp");
    bool linear = true;
    for (int n : {1, 2, 4, 16}) {
      cli::CommandOptions opt;
      opt.n_series = n;
      const double vn = cli::run_command("emf", d, opt).number(0, "array_emf_pp");
      linear = linear && std::abs(vn - n * v1) <= 1e-12 * n * v1;
    }
    o.check(linear, "array V(N) = N V(1) for N in {1, 2, 4, 16}");
  }
  return o;
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"modal frequency", 0.1, modal_frequency},
      {"coil resistance", 0.1, coil_resistance},
      {"EMF estimate", 30.0, emf_estimate},
      {"magnetostatics oracle", 60.0, magnetostatics_oracle},
      {"thickness what-if", 60.0, thickness_what_if},
      {"inverse design", 60.0, inverse_design},
      {"stress check", 60.0, stress_check},
      {"dynamics suite", 300.0, dynamics_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("threw: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.check(secs < c.budget_s, fmt("%.3g s (< %g s)", secs, c.budget_s));
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
