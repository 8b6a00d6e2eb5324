#pragma once

// Inverse design: frequency matching by bisection, EMF maximisation by
// bounded multi-start Nelder-Mead, relative sensitivities, and comparison of
// the model against measured reference data.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "microgen/device.hpp"
#include "microgen/error.hpp"

namespace microgen::design {

enum class Variable {
  beam_length,
  beam_width,
  beam_thickness,
  plate_side,
  magnet_thickness,
  coil_turns,
  coil_gap,
};

inline constexpr std::array<std::pair<Variable, std::string_view>, 7> kVariableNames{{
    {Variable::beam_length, "beam_length"},
    {Variable::beam_width, "beam_width"},
    {Variable::beam_thickness, "beam_thickness"},
    {Variable::plate_side, "plate_side"},
    {Variable::magnet_thickness, "magnet_thickness"},
    {Variable::coil_turns, "coil_turns"},
    {Variable::coil_gap, "coil_gap"},
}};

inline std::string_view to_string(Variable v) {
  for (const auto& [var, name] : kVariableNames) {
    if (var == v) return name;
  }
  return "unknown";
}

inline Variable parse_variable(std::string_view name) {
  for (const auto& [var, n] : kVariableNames) {
    if (n == name) return var;
  }
  throw DomainError("unknown design variable '" + std::string(name) + "'");
}

inline bool is_integer(Variable v) { return v == Variable::coil_turns; }

inline double get(const Device& d, Variable v) {
  switch (v) {
    case Variable::beam_length: return d.beam.length;
    case Variable::beam_width: return d.beam.width;
    case Variable::beam_thickness: return d.beam.thickness;
    case Variable::plate_side: return d.plate.length;
    case Variable::magnet_thickness: return d.magnet.thickness_z;
    case Variable::coil_turns: return d.coil.turns;
    case Variable::coil_gap: return d.coil.plane_height;
  }
  return 0.0;
}

/// Copy of `d` with the variable set. Plate side sets both plate dimensions;
/// coil turns are rounded to the nearest integer.
inline Device with(Device d, Variable v, double value) {
  switch (v) {
    case Variable::beam_length: d.beam.length = value; break;
    case Variable::beam_width: d.beam.width = value; break;
    case Variable::beam_thickness: d.beam.thickness = value; break;
    case Variable::plate_side: d.plate.length = d.plate.width = value; break;
    case Variable::magnet_thickness: d.magnet.thickness_z = value; break;
    case Variable::coil_turns: d.coil.turns = static_cast<int>(std::lround(value)); break;
    case Variable::coil_gap: d.coil.plane_height = value; break;
  }
  return d;
}

struct DesignVariable {
  Variable variable = Variable::beam_thickness;
  double lo = 0.0;
  double hi = 0.0;

  void validate(bool allow_singleton) const {
    microgen::detail::require(lo > 0 && hi > 0 && std::isfinite(lo) && std::isfinite(hi),
                    "design variable bounds must be positive");
    microgen::detail::require(allow_singleton ? lo <= hi : lo < hi,
                    "design variable bounds must satisfy lo < hi");
  }
};

struct TargetBand {
  double f_lo = 200.0;   // Hz
  double f_hi = 1500.0;  // Hz

  void validate() const {
    microgen::detail::require(f_lo > 0 && f_lo < f_hi, "target band must satisfy 0 < f_lo < f_hi");
  }
};

inline double natural_frequency(const Device& d) { return modal(d).natural_frequency; }

// ---------------------------------------------------------------------------

/// Value of `var` within its bounds at which f1 equals `target` to within
/// `tol` Hz, by bisection.
inline double match_frequency(const Device& base, const DesignVariable& var, double target,
                              double tol = 0.1) {
  var.validate(false);
  microgen::detail::require(target > 0 && tol > 0, "match_frequency: target and tol must be positive");
  auto f_of = [&](double x) { return natural_frequency(with(base, var.variable, x)); };

  const double f_lo = f_of(var.lo), f_hi = f_of(var.hi);
  if (target < std::min(f_lo, f_hi) - tol || target > std::max(f_lo, f_hi) + tol) {
    std::ostringstream msg;
    msg << "match_frequency: target " << target << " Hz not bracketed by "
        << to_string(var.variable) << " bounds; f1(" << var.lo << ") = " << f_lo
        << " Hz, f1(" << var.hi << ") = " << f_hi << " Hz";
    throw InfeasibleError(msg.str());
  }

  constexpr int kProbes = 16;
  const double dir = f_hi > f_lo ? 1.0 : -1.0;
  double prev = f_lo;
  for (int i = 1; i <= kProbes; ++i) {
    const double f = f_of(var.lo + (var.hi - var.lo) * i / kProbes);
    if (!(dir * (f - prev) > 0)) {
      throw DomainError("match_frequency: f1 is not strictly monotone in " +
                        std::string(to_string(var.variable)) + " over the bounds");
    }
    prev = f;
  }

  if (std::abs(f_lo - target) <= tol) return var.lo;
  if (std::abs(f_hi - target) <= tol) return var.hi;
  double a = var.lo, b = var.hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    const double f = f_of(mid);
    if (std::abs(f - target) <= tol) return mid;
    if (dir * (f - target) < 0) a = mid; else b = mid;
  }
  throw NumericalError("match_frequency: bisection did not reach tolerance");
}

// ---------------------------------------------------------------------------

/// Default die edge for the footprint constraint.
inline constexpr double kDefaultDieSide = 3e-3;  // m

/// Planar footprint edge: the largest of plate, magnet and outer coil edge.
/// Beams are not counted; their anchor routing is not dimensioned.
inline double footprint(const Device& d) {
  return std::max({d.plate.length, d.plate.width, d.magnet.length_x, d.magnet.width_y,
                   coil::outer_extent(d.coil)});
}

struct DesignMetrics {
  double stiffness = 0.0;      // N/m
  double mass = 0.0;           // kg
  double f1 = 0.0;             // Hz
  double amplitude = 0.0;      // m, at f1 under the drive
  double flux_gradient = 0.0;  // Wb/m
  double emf_pp = 0.0;         // V, at f1
  double stress = 0.0;         // Pa, at the amplitude
  suspension::YieldMargin margin;
  double footprint = 0.0;      // m
};

/// Evaluates designs at their own resonance under a fixed drive (the drive
/// frequency is ignored). Coil flux gradients are memoised per turn loop,
/// so designs that only change the suspension reuse the quadrature.
class DesignEvaluator {
 public:
  explicit DesignEvaluator(response::DriveSpec drive) : drive_(drive) {}

  double flux_gradient(const Device& d) {
    const auto geo = coil::turn_sides(d.coil);
    const double z = coil::loop_height(d.magnet, d.coil, 0.0);
    const double h = coil::default_step(d.magnet, d.coil, 0.0);
    double total = 0.0;
    for (double side : geo.sides) {
      const Key key{d.magnet.length_x, d.magnet.width_y, d.magnet.thickness_z,
                    d.magnet.remanence, z, side, h};
      {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) {
          total += it->second;
          continue;
        }
      }
      const double g = coil::loop_flux_gradient(d.magnet, side, z, h);
      std::lock_guard lock(mutex_);
      cache_.emplace(key, g);
      total += g;
    }
    return total;
  }

  DesignMetrics operator()(const Device& d) {
    DesignMetrics m;
    const auto modal_result = modal(d);
    m.stiffness = modal_result.stiffness_total;
    m.mass = modal_result.effective_mass;
    m.f1 = modal_result.natural_frequency;
    auto drive = drive_;
    drive.frequency = m.f1;
    const auto model = harvester_model(d, drive, std::nullopt, flux_gradient(d));
    const auto p = response::evaluate(model, m.f1);
    m.amplitude = p.amplitude;
    m.flux_gradient = model.flux_gradient;
    m.emf_pp = p.emf_pp;
    m.stress = suspension::max_bending_stress(d.material, d.beam, m.amplitude);
    m.margin = suspension::yield_margin(m.stress, d.material);
    m.footprint = footprint(d);
    return m;
  }

  const response::DriveSpec& drive() const { return drive_; }

 private:
  using Key = std::array<double, 7>;
  response::DriveSpec drive_;
  std::mutex mutex_;
  std::map<Key, double> cache_;
};

struct PenaltyWeights {
  double band = 10.0;
  double yield = 10.0;
  double footprint = 10.0;
};

struct SearchOptions {
  TargetBand band;
  double die_side = kDefaultDieSide;
  PenaltyWeights weights;
  int budget = 400;  // total objective evaluations across all starts
  std::uint64_t seed = 1;
  /// When set, the objective is -|f1 - target| / target instead of EMF.
  std::optional<double> frequency_target;
};

struct Violations {
  double band = 0.0;
  double yield = 0.0;
  double footprint = 0.0;
  bool feasible() const { return band == 0.0 && yield == 0.0 && footprint == 0.0; }
};

inline Violations violations(const DesignMetrics& m, const SearchOptions& opt) {
  Violations v;
  v.band = std::max(0.0, opt.band.f_lo - m.f1) / opt.band.f_lo +
           std::max(0.0, m.f1 - opt.band.f_hi) / opt.band.f_hi;
  v.yield = std::max(0.0, 1.0 - m.margin.low);
  v.footprint = std::max(0.0, m.footprint - opt.die_side) / opt.die_side;
  return v;
}

struct EvaluationRecord {
  int start = 0;
  std::vector<double> values;  // native units, one per variable
  DesignMetrics metrics;
  Violations violation;
  double objective = 0.0;  // penalised, maximised
};

struct OptimizationResult {
  /// Best feasible evaluation found; heuristic, not a certified optimum.
  Device best;
  std::vector<double> values;
  DesignMetrics metrics;
  std::vector<EvaluationRecord> log;
};

namespace detail {

struct NelderMead {
  // Minimises f over the unit box; points are clipped to [0, 1].
  template <class F>
  static void run(const F& f, std::vector<double> x0, std::vector<double> step, int budget) {
    const std::size_t n = x0.size();
    auto clip = [](std::vector<double> x) {
      for (double& v : x) v = std::clamp(v, 0.0, 1.0);
      return x;
    };
    int used = 0;
    auto eval = [&](const std::vector<double>& x) {
      ++used;
      return f(x);
    };
    std::vector<std::vector<double>> simplex{clip(x0)};
    for (std::size_t i = 0; i < n; ++i) {
      auto x = x0;
      x[i] += (x0[i] + step[i] <= 1.0) ? step[i] : -step[i];
      simplex.push_back(clip(x));
    }
    std::vector<double> fx;
    for (const auto& x : simplex) {
      if (used >= budget) return;
      fx.push_back(eval(x));
    }
    std::vector<std::size_t> order(n + 1);
    while (used < budget) {
      for (std::size_t i = 0; i <= n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fx[a] < fx[b]; });
      const auto best = order.front(), worst = order.back(), second = order[n - 1];
      double size = 0.0;
      for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          size = std::max(size, std::abs(simplex[i][j] - simplex[best][j]));
        }
      }
      if (size < 1e-7 && std::abs(fx[worst] - fx[best]) <= 1e-12 * (1.0 + std::abs(fx[best]))) {
        return;
      }
      std::vector<double> centroid(n, 0.0);
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == worst) continue;
        for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;
      }
      auto along = [&](double t) {
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j) {
          x[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
        }
        return clip(x);
      };
      const auto xr = along(-1.0);
      const double fr = eval(xr);
      if (fr < fx[best]) {
        if (used >= budget) { simplex[worst] = xr; fx[worst] = fr; return; }
        const auto xe = along(-2.0);
        const double fe = eval(xe);
        if (fe < fr) { simplex[worst] = xe; fx[worst] = fe; }
        else { simplex[worst] = xr; fx[worst] = fr; }
      } else if (fr < fx[second]) {
        simplex[worst] = xr;
        fx[worst] = fr;
      } else {
        if (used >= budget) return;
        const bool outside = fr < fx[worst];
        const auto xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < (outside ? fr : fx[worst])) {
          simplex[worst] = xc;
          fx[worst] = fc;
        } else {
          for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            if (used >= budget) return;
            for (std::size_t j = 0; j < n; ++j) {
              simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            }
            fx[i] = eval(simplex[i]);
          }
        }
      }
    }
  }
};

}  // namespace detail

/// Maximise the resonant peak-to-peak EMF over the listed variables, with
/// additive penalties for leaving the band, yielding, and exceeding the die.
/// Starts from every point of a 3-per-dimension grid; starts run
/// concurrently and the log is merged in start order. Throws
/// InfeasibleError if no evaluated design satisfies every constraint.
inline OptimizationResult maximize_emf(const Device& base,
                                       const std::vector<DesignVariable>& variables,
                                       const response::DriveSpec& drive,
                                       const SearchOptions& opt = {}) {
  microgen::detail::require(!variables.empty(), "maximize_emf: at least one variable required");
  microgen::detail::require(opt.budget >= 1, "maximize_emf: evaluation budget must be positive");
  opt.band.validate();
  for (const auto& v : variables) v.validate(true);

  DesignEvaluator evaluate(drive);
  const double emf_scale = [&] {
    const double e = evaluate(base).emf_pp;
    return e > 0 ? e : 1.0;
  }();

  std::vector<std::size_t> free;  // variables with lo < hi
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].lo < variables[i].hi) free.push_back(i);
  }

  auto decode = [&](const std::vector<double>& u) {
    std::vector<double> values(variables.size());
    for (std::size_t i = 0; i < variables.size(); ++i) values[i] = variables[i].lo;
    for (std::size_t k = 0; k < free.size(); ++k) {
      const auto& v = variables[free[k]];
      values[free[k]] = v.lo + u[k] * (v.hi - v.lo);
    }
    return values;
  };
  auto build = [&](const std::vector<double>& values) {
    Device d = base;
    for (std::size_t i = 0; i < variables.size(); ++i) {
      d = with(d, variables[i].variable, values[i]);
    }
    return d;
  };
  auto score = [&](int start, const std::vector<double>& values) {
    EvaluationRecord rec;
    rec.start = start;
    rec.values = values;
    for (std::size_t i = 0; i < variables.size(); ++i) {
      if (is_integer(variables[i].variable)) rec.values[i] = std::round(values[i]);
    }
    rec.metrics = evaluate(build(values));
    rec.violation = violations(rec.metrics, opt);
    const double fit = opt.frequency_target
                           ? -std::abs(rec.metrics.f1 - *opt.frequency_target) / *opt.frequency_target
                           : rec.metrics.emf_pp / emf_scale;
    rec.objective = fit - opt.weights.band * rec.violation.band -
                    opt.weights.yield * rec.violation.yield -
                    opt.weights.footprint * rec.violation.footprint;
    return rec;
  };

  std::vector<std::vector<EvaluationRecord>> logs;
  if (free.empty()) {
    logs.push_back({score(0, decode({}))});
  } else {
    constexpr std::array<double, 3> kLevels{1.0 / 6.0, 0.5, 5.0 / 6.0};
    std::size_t n_starts = 1;
    for (std::size_t k = 0; k < free.size(); ++k) n_starts *= kLevels.size();
    const int per_start = std::max(1, opt.budget / static_cast<int>(n_starts));

    std::vector<std::future<std::vector<EvaluationRecord>>> futures;
    for (std::size_t s = 0; s < n_starts; ++s) {
      futures.push_back(std::async(std::launch::async, [&, s] {
        std::vector<double> x0(free.size()), step(free.size());
        std::mt19937_64 rng(opt.seed + 0x9E3779B97F4A7C15ULL * (s + 1));
        std::uniform_real_distribution<double> jitter(0.10, 0.20);
        std::size_t code = s;
        for (std::size_t k = 0; k < free.size(); ++k) {
          x0[k] = kLevels[code % kLevels.size()];
          code /= kLevels.size();
          step[k] = jitter(rng);
        }
        std::vector<EvaluationRecord> log;
        detail::NelderMead::run(
            [&](const std::vector<double>& u) {
              log.push_back(score(static_cast<int>(s), decode(u)));
              return -log.back().objective;
            },
            x0, step, per_start);
        return log;
      }));
    }
    for (auto& f : futures) logs.push_back(f.get());
  }

  OptimizationResult result;
  const EvaluationRecord* best = nullptr;
  for (const auto& log : logs) {
    for (const auto& rec : log) {
      result.log.push_back(rec);
    }
  }
  for (const auto& rec : result.log) {
    if (!rec.violation.feasible()) continue;
    if (best == nullptr || rec.objective > best->objective) best = &rec;
  }
  if (best == nullptr) {
    throw InfeasibleError("maximize_emf: no evaluated design satisfies the constraints (" +
                          std::to_string(result.log.size()) + " evaluations)");
  }
  result.values = best->values;
  result.best = build(best->values);
  result.metrics = best->metrics;
  return result;
}

// ---------------------------------------------------------------------------

struct Sensitivity {
  double frequency = 0.0;  // (p / f1) df1/dp
  double emf = 0.0;        // (p / V) dV/dp
};

/// Relative sensitivities of f1 and of the resonant EMF under `drive`, by
/// central differences with relative step `rel_step`. Coil turns step by one
/// turn instead.
inline Sensitivity sensitivity(const Device& d, Variable parameter,
                               const response::DriveSpec& drive, double rel_step = 1e-3) {
  microgen::detail::require(rel_step > 0 && rel_step < 0.5, "sensitivity: rel_step must be in (0, 0.5)");
  DesignEvaluator evaluate(drive);
  const double p = get(d, parameter);
  const double step = is_integer(parameter) ? 1.0 : p * rel_step;
  microgen::detail::require(p - step > 0, "sensitivity: parameter too small for the step");
  const auto mid = evaluate(d);
  const auto up = evaluate(with(d, parameter, p + step));
  const auto down = evaluate(with(d, parameter, p - step));
  Sensitivity s;
  s.frequency = p / mid.f1 * (up.f1 - down.f1) / (2.0 * step);
  s.emf = mid.emf_pp > 0 ? p / mid.emf_pp * (up.emf_pp - down.emf_pp) / (2.0 * step) : 0.0;
  return s;
}

inline Sensitivity sensitivity(const Device& d, Variable parameter, double rel_step = 1e-3) {
  return sensitivity(d, parameter, d.drive, rel_step);
}

// ---------------------------------------------------------------------------

struct MeasuredReference {
  std::optional<double> resonance;        // Hz
  std::optional<double> thickness;        // m, beam thickness
  std::optional<double> amplitude;        // m
  std::optional<double> emf_pp;           // V
  std::optional<double> coil_resistance;  // ohm
};

/// Reference measurements of the fabricated device.
inline MeasuredReference paper_measurements() {
  return {470.0, 14e-6, 2.8e-6, 0.24e-3, 58.0};
}

struct ReportRow {
  std::string quantity;
  std::string unit;
  double model_nominal = 0.0;
  std::optional<double> model_at_measured_thickness;
  std::optional<double> measured;

  /// Model value the ratios compare against: the measured-thickness case
  /// when there is one, else the nominal design.
  double model() const { return model_at_measured_thickness.value_or(model_nominal); }

  std::optional<double> measured_over_model() const {
    if (!measured || model() == 0.0) return std::nullopt;
    return *measured / model();
  }
  std::optional<double> model_over_measured() const {
    if (!measured || *measured == 0.0) return std::nullopt;
    return model() / *measured;
  }
};

struct ConsistencyReport {
  std::vector<ReportRow> rows;
};

/// Model versus measurement, per quantity, at the nominal design and at the
/// measured beam thickness (mass unchanged). Amplitude and EMF are
/// evaluated at each design's own resonance under the device drive. The
/// model is never adjusted.
inline ConsistencyReport consistency_report(const Device& d, const MeasuredReference& meas) {
  DesignEvaluator evaluate(d.drive);
  const auto nominal = evaluate(d);
  std::optional<DesignMetrics> thin;
  std::optional<Device> thin_device;
  if (meas.thickness) {
    Device t = d;
    t.beam.thickness = *meas.thickness;
    thin = evaluate(t);
    thin_device = t;
  }
  auto thin_value = [&](auto getter) -> std::optional<double> {
    if (!thin) return std::nullopt;
    return getter(*thin);
  };
  const double r_nominal = coil::resistance(d.coil);

  ConsistencyReport rep;
  rep.rows.push_back({"resonance", "Hz", nominal.f1,
                      thin_value([](const DesignMetrics& m) { return m.f1; }), meas.resonance});
  rep.rows.push_back({"thickness", "m", d.beam.thickness,
                      thin_device ? std::optional<double>(thin_device->beam.thickness)
                                  : std::nullopt,
                      meas.thickness});
  rep.rows.push_back({"amplitude", "m", nominal.amplitude,
                      thin_value([](const DesignMetrics& m) { return m.amplitude; }),
                      meas.amplitude});
  rep.rows.push_back({"emf_pp", "V", nominal.emf_pp,
                      thin_value([](const DesignMetrics& m) { return m.emf_pp; }), meas.emf_pp});
  // Resistance does not depend on the suspension thickness.
  rep.rows.push_back({"coil_resistance", "ohm", r_nominal, r_nominal, meas.coil_resistance});
  return rep;
}

}  // namespace microgen::design
