#pragma once

// Flat INI device files. Sections [material] [beam] [plate] [magnet] [coil]
// [assembly] [drive]; one `key = value` per line, SI units, `#` or `;`
// comments. Unknown sections or keys, duplicates, and non-positive values
// are rejected with the offending line number.

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "microgen/device.hpp"
#include "microgen/error.hpp"

namespace microgen::io {

namespace detail {

struct Entry {
  std::string text;
  int line = 0;
};

struct KeySpec {
  std::string_view section;
  std::string_view key;
  bool required;
};

// Keys of the format. [drive] additionally needs exactly one of spl,
// pressure or displacement.
inline constexpr KeySpec kSchema[] = {
    {"material", "youngs_modulus", true}, {"material", "structure_density", true},
    {"material", "magnet_density", true}, {"material", "yield_low", true},
    {"material", "yield_high", true},     {"beam", "length", true},
    {"beam", "width", true},              {"beam", "thickness", true},
    {"beam", "count", true},              {"plate", "length", true},
    {"plate", "width", true},             {"plate", "thickness", true},
    {"magnet", "length", true},           {"magnet", "width", true},
    {"magnet", "thickness", true},        {"magnet", "remanence", true},
    {"coil", "turns", true},              {"coil", "trace_width", true},
    {"coil", "gap", true},                {"coil", "trace_thickness", true},
    {"coil", "inner_side", true},         {"coil", "resistivity", false},
    {"assembly", "coil_gap", false},      {"assembly", "effective_area", false},
    {"drive", "damping_ratio", false},    {"drive", "spl", false},
    {"drive", "pressure", false},         {"drive", "displacement", false},
    {"drive", "frequency", true},
};

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool known_section(std::string_view s) {
  for (const auto& k : kSchema) {
    if (k.section == s) return true;
  }
  return false;
}

inline bool known_key(std::string_view section, std::string_view key) {
  for (const auto& k : kSchema) {
    if (k.section == section && k.key == key) return true;
  }
  return false;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  double real(const std::string& key) const {
    const auto& e = at(key);
    double v = 0.0;
    const char* first = e.text.data();
    const char* last = first + e.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw ParseError("line " + std::to_string(e.line) + ": key '" + key +
                           "' is not a number: '" + e.text + "'",
                       e.line, key);
    }
    if (!(v > 0)) {
      throw ParseError("line " + std::to_string(e.line) + ": key '" + key +
                           "' must be positive, got " + e.text,
                       e.line, key);
    }
    return v;
  }

  int count(const std::string& key) const {
    const auto& e = at(key);
    int v = 0;
    const char* first = e.text.data();
    const char* last = first + e.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || v <= 0) {
      throw ParseError("line " + std::to_string(e.line) + ": key '" + key +
                           "' must be a positive integer, got '" + e.text + "'",
                       e.line, key);
    }
    return v;
  }

  int line(const std::string& key) const { return at(key).line; }

 private:
  const Entry& at(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw ParseError("missing required key '" + key + "'", 0, key);
    }
    return it->second;
  }

  std::map<std::string, Entry> entries_;
};

}  // namespace detail

/// Parse device-file text; `origin` names the source in messages.
inline Device parse_device_text(std::string_view text, const std::string& origin = "<device>") {
  std::map<std::string, detail::Entry> entries;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& msg, const std::string& key = {}) {
    throw ParseError(origin + ": line " + std::to_string(line_no) + ": " + msg, line_no, key);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) {
      line = line.substr(0, c);
    }
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header");
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (!detail::known_section(section)) fail("unknown section [" + section + "]", section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected key = value");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (section.empty()) fail("key '" + key + "' outside any section", key);
    const std::string full = section + "." + key;
    if (!detail::known_key(section, key)) fail("unknown key '" + full + "'", full);
    if (value.empty()) fail("empty value for key '" + full + "'", full);
    if (!entries.emplace(full, detail::Entry{value, line_no}).second) {
      fail("duplicate key '" + full + "'", full);
    }
  }

  for (const auto& k : detail::kSchema) {
    const std::string full = std::string(k.section) + "." + std::string(k.key);
    if (k.required && entries.count(full) == 0) {
      throw ParseError(origin + ": missing required key '" + full + "'", 0, full);
    }
  }

  const detail::Reader r(std::move(entries));
  Device d;
  d.material.youngs_modulus = r.real("material.youngs_modulus");
  d.material.structure_density = r.real("material.structure_density");
  d.material.magnet_density = r.real("material.magnet_density");
  d.material.yield_low = r.real("material.yield_low");
  d.material.yield_high = r.real("material.yield_high");
  if (d.material.yield_high < d.material.yield_low) {
    throw ParseError(origin + ": line " + std::to_string(r.line("material.yield_high")) +
                         ": key 'material.yield_high' is below yield_low",
                     r.line("material.yield_high"), "material.yield_high");
  }
  d.beam.length = r.real("beam.length");
  d.beam.width = r.real("beam.width");
  d.beam.thickness = r.real("beam.thickness");
  d.beam.count = r.count("beam.count");
  d.plate.length = r.real("plate.length");
  d.plate.width = r.real("plate.width");
  d.plate.thickness = r.real("plate.thickness");
  d.magnet.length_x = r.real("magnet.length");
  d.magnet.width_y = r.real("magnet.width");
  d.magnet.thickness_z = r.real("magnet.thickness");
  d.magnet.remanence = r.real("magnet.remanence");
  d.coil.turns = r.count("coil.turns");
  d.coil.trace_width = r.real("coil.trace_width");
  d.coil.gap = r.real("coil.gap");
  d.coil.trace_thickness = r.real("coil.trace_thickness");
  d.coil.inner_side = r.real("coil.inner_side");
  d.coil.resistivity = r.has("coil.resistivity") ? r.real("coil.resistivity")
                                                 : coil::kNickelResistivity;
  d.coil.plane_height = r.has("assembly.coil_gap") ? r.real("assembly.coil_gap")
                                                   : kDefaultCoilGap;
  if (r.has("assembly.effective_area")) d.effective_area = r.real("assembly.effective_area");

  d.damping_ratio = r.has("drive.damping_ratio") ? r.real("drive.damping_ratio")
                                                 : kDefaultDampingRatio;
  if (d.damping_ratio >= 1.0) {
    const int ln = r.line("drive.damping_ratio");
    throw ParseError(origin + ": line " + std::to_string(ln) +
                         ": key 'drive.damping_ratio' must be below 1",
                     ln, "drive.damping_ratio");
  }
  int kinds = 0;
  for (auto [key, kind] : {std::pair{"drive.spl", response::DriveKind::spl},
                           std::pair{"drive.pressure", response::DriveKind::pressure},
                           std::pair{"drive.displacement", response::DriveKind::displacement}}) {
    if (r.has(key)) {
      ++kinds;
      d.drive.kind = kind;
      d.drive.value = r.real(key);
    }
  }
  if (kinds != 1) {
    throw ParseError(origin + ": [drive] needs exactly one of spl, pressure, displacement", 0,
                     "drive");
  }
  d.drive.frequency = r.real("drive.frequency");
  return d;
}

inline Device parse_device(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open device file '" + path + "'", 0, {});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_device_text(text.str(), path);
}

/// Shortest text that reads back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

/// Device-file text for `d`; parse_device_text() reads it back exactly.
inline std::string serialize_device(const Device& d) {
  std::ostringstream out;
  auto kv = [&](const char* k, double v) { out << k << " = " << format_number(v) << '\n'; };
  auto ki = [&](const char* k, int v) { out << k << " = " << v << '\n'; };
  out << "[material]\n";
  kv("youngs_modulus", d.material.youngs_modulus);
  kv("structure_density", d.material.structure_density);
  kv("magnet_density", d.material.magnet_density);
  kv("yield_low", d.material.yield_low);
  kv("yield_high", d.material.yield_high);
  out << "\n[beam]\n";
  kv("length", d.beam.length);
  kv("width", d.beam.width);
  kv("thickness", d.beam.thickness);
  ki("count", d.beam.count);
  out << "\n[plate]\n";
  kv("length", d.plate.length);
  kv("width", d.plate.width);
  kv("thickness", d.plate.thickness);
  out << "\n[magnet]\n";
  kv("length", d.magnet.length_x);
  kv("width", d.magnet.width_y);
  kv("thickness", d.magnet.thickness_z);
  kv("remanence", d.magnet.remanence);
  out << "\n[coil]\n";
  ki("turns", d.coil.turns);
  kv("trace_width", d.coil.trace_width);
  kv("gap", d.coil.gap);
  kv("trace_thickness", d.coil.trace_thickness);
  kv("inner_side", d.coil.inner_side);
  kv("resistivity", d.coil.resistivity);
  out << "\n[assembly]\n";
  kv("coil_gap", d.coil.plane_height);
  if (d.effective_area) kv("effective_area", *d.effective_area);
  out << "\n[drive]\n";
  kv("damping_ratio", d.damping_ratio);
  kv(response::to_string(d.drive.kind), d.drive.value);
  kv("frequency", d.drive.frequency);
  return out.str();
}

}  // namespace microgen::io
