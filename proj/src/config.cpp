#include "cvswap/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "cvswap/errors.hpp"

namespace cvswap {

namespace {

constexpr std::string_view kNone = "none";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view key) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError("key '" + std::string(key) + "': '" + std::string(text) + "' is not a finite number");
  }
  return value;
}

template <class Int>
Int parse_int(std::string_view text, std::string_view key) {
  Int value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + std::string(key) + "': '" + std::string(text) + "' is not an integer");
  }
  return value;
}

std::optional<double> parse_optional(std::string_view text, std::string_view key) {
  if (text == kNone) return std::nullopt;
  return parse_double(text, key);
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string(kNone);
}

struct Entry {
  std::string key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

// Members reachable through a pointer, for the table below.
Entry number(std::string key, double NodeParams::*member) {
  return {key, [member, key](ExperimentConfig& c, std::string_view v) { c.node.*member = parse_double(v, key); },
          [member](const ExperimentConfig& c) { return format_number(c.node.*member); }};
}

// `field` is a generic lambda so one accessor serves const and mutable use.
template <class Field>
Entry optional_number(std::string key, Field field) {
  return {key, [field, key](ExperimentConfig& c, std::string_view v) { field(c) = parse_optional(v, key); },
          [field](const ExperimentConfig& c) { return format_optional(field(c)); }};
}

Entry config_number(std::string key, double ExperimentConfig::*member) {
  return {key, [member, key](ExperimentConfig& c, std::string_view v) { c.*member = parse_double(v, key); },
          [member](const ExperimentConfig& c) { return format_number(c.*member); }};
}

void add_grid(std::vector<Entry>& table, const std::string& prefix, Grid ExperimentConfig::*grid) {
  table.push_back({prefix + "_min",
                   [grid, prefix](ExperimentConfig& c, std::string_view v) { (c.*grid).min = parse_double(v, prefix + "_min"); },
                   [grid](const ExperimentConfig& c) { return format_number((c.*grid).min); }});
  table.push_back({prefix + "_max",
                   [grid, prefix](ExperimentConfig& c, std::string_view v) { (c.*grid).max = parse_double(v, prefix + "_max"); },
                   [grid](const ExperimentConfig& c) { return format_number((c.*grid).max); }});
  table.push_back({prefix + "_points",
                   [grid, prefix](ExperimentConfig& c, std::string_view v) {
                     (c.*grid).points = parse_int<int>(v, prefix + "_points");
                   },
                   [grid](const ExperimentConfig& c) { return std::to_string((c.*grid).points); }});
}

void add_overrides(std::vector<Entry>& table, const std::string& prefix, NodeOverrides ExperimentConfig::*node) {
  table.push_back(optional_number(prefix + "mirror_coupling_rad_s",
                                  [node](auto& c) -> auto& { return (c.*node).mirror_coupling; }));
  table.push_back(optional_number(prefix + "bec_coupling_rad_s",
                                  [node](auto& c) -> auto& { return (c.*node).bec_coupling; }));
  table.push_back(optional_number(prefix + "bec_collision_over_recoil", [node](auto& c) -> auto& {
    return (c.*node).bec_collision_over_recoil;
  }));
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    t.push_back({"experiment",
                 [](ExperimentConfig& c, std::string_view v) {
                   const auto kind = parse_kind(v);
                   if (!kind) throw ConfigError("unknown experiment '" + std::string(v) + "'");
                   c.kind = *kind;
                 },
                 [](const ExperimentConfig& c) { return std::string(to_string(c.kind)); }});
    t.push_back(number("pump_power_W", &NodeParams::pump_power));
    t.push_back(number("cavity_length_m", &NodeParams::cavity_length));
    t.push_back(number("wavelength_m", &NodeParams::wavelength));
    t.push_back(number("finesse", &NodeParams::finesse));
    t.push_back(number("mirror_mass_kg", &NodeParams::mirror_mass));
    t.push_back(number("mirror_freq_rad_s", &NodeParams::mirror_freq));
    t.push_back(number("mirror_quality", &NodeParams::mirror_quality));
    t.push_back(optional_number("mirror_damping_rad_s",
                                [](auto& c) -> auto& { return c.node.mirror_damping; }));
    t.push_back(number("mirror_temp_K", &NodeParams::mirror_temp));
    t.push_back(number("bec_recoil_rad_s", &NodeParams::bec_recoil));
    t.push_back(optional_number("bec_collision_over_recoil",
                                [](auto& c) -> auto& { return c.bec_collision_over_recoil; }));
    t.push_back(number("bec_collision_rad_s", &NodeParams::bec_collision));
    t.push_back(number("bec_damping_over_kappa", &NodeParams::bec_damping_over_kappa));
    t.push_back(optional_number("bec_damping_rad_s",
                                [](auto& c) -> auto& { return c.node.bec_damping; }));
    t.push_back(number("bec_temp_K", &NodeParams::bec_temp));
    // Exactly one of the two detuning keys is active; the snapshot writes it.
    // While parsing, the detuning variant holds Delta / omega_m.
    t.push_back({"detuning_over_wm",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.node.detuning = EffectiveDetuning{parse_double(v, "detuning_over_wm")};
                 },
                 [](const ExperimentConfig& c) -> std::string {
                   if (const auto* e = std::get_if<EffectiveDetuning>(&c.node.detuning)) {
                     return format_number(e->value / c.node.mirror_freq);
                   }
                   return {};
                 }});
    t.push_back({"bare_detuning_over_wm",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.node.detuning = BareDetuning{parse_double(v, "bare_detuning_over_wm")};
                 },
                 [](const ExperimentConfig& c) -> std::string {
                   if (const auto* b = std::get_if<BareDetuning>(&c.node.detuning)) {
                     return format_number(b->value / c.node.mirror_freq);
                   }
                   return {};
                 }});
    t.push_back(optional_number("mirror_coupling_rad_s",
                                [](auto& c) -> auto& { return c.node.couplings.mirror; }));
    t.push_back(optional_number("bec_coupling_rad_s",
                                [](auto& c) -> auto& { return c.node.couplings.bec; }));
    t.push_back(optional_number("atom_number",
                                [](auto& c) -> auto& { return c.node.microscopic.atom_number; }));
    t.push_back(optional_number("lattice_depth_per_photon_rad_s", [](auto& c) -> auto& {
      return c.node.microscopic.lattice_depth_per_photon;
    }));
    t.push_back(optional_number("vacuum_rabi_rad_s",
                                [](auto& c) -> auto& { return c.node.microscopic.vacuum_rabi; }));
    t.push_back(optional_number("atomic_detuning_rad_s", [](auto& c) -> auto& {
      return c.node.microscopic.atomic_detuning;
    }));
    t.push_back(optional_number("potential_waist_m", [](auto& c) -> auto& {
      return c.node.microscopic.potential_waist;
    }));
    t.push_back(optional_number("s_wave_length_m",
                                [](auto& c) -> auto& { return c.node.microscopic.s_wave_length; }));
    add_overrides(t, "node_a.", &ExperimentConfig::node_a);
    add_overrides(t, "node_b.", &ExperimentConfig::node_b);
    add_grid(t, "omega", &ExperimentConfig::omega);
    add_grid(t, "epsilon", &ExperimentConfig::epsilon);
    add_grid(t, "spectrum", &ExperimentConfig::spectrum);
    t.push_back(config_number("epsilon", &ExperimentConfig::filter_epsilon));
    t.push_back(config_number("transmissivity", &ExperimentConfig::transmissivity));
    t.push_back(config_number("collision_compare_over_recoil", &ExperimentConfig::collision_compare_over_recoil));
    t.push_back(config_number("tolerance", &ExperimentConfig::tolerance));
    t.push_back({"seed", [](ExperimentConfig& c, std::string_view v) { c.seed = parse_int<std::uint64_t>(v, "seed"); },
                 [](const ExperimentConfig& c) { return std::to_string(c.seed); }});
    t.push_back({"workers", [](ExperimentConfig& c, std::string_view v) { c.workers = parse_int<int>(v, "workers"); },
                 [](const ExperimentConfig& c) { return std::to_string(c.workers); }});
    return t;
  }();
  return table;
}

const std::set<std::string, std::less<>>& mode_labels() {
  static const std::set<std::string, std::less<>> labels{"m_A", "b_A", "m_B", "b_B"};
  return labels;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::stability: return "stability";
    case ExperimentKind::spectrum: return "spectrum";
    case ExperimentKind::node_entanglement: return "node-entanglement";
    case ExperimentKind::bandwidth_sweep: return "bandwidth-sweep";
    case ExperimentKind::swap_map: return "swap-map";
    case ExperimentKind::collision_compare: return "collision-compare";
  }
  return "unknown";
}

const std::vector<ExperimentKind>& all_kinds() {
  static const std::vector<ExperimentKind> kinds{
      ExperimentKind::stability,       ExperimentKind::spectrum, ExperimentKind::node_entanglement,
      ExperimentKind::bandwidth_sweep, ExperimentKind::swap_map, ExperimentKind::collision_compare};
  return kinds;
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (auto kind : all_kinds()) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::vector<double> Grid::values() const {
  if (points < 1) throw ConfigError("sweep grid is empty");
  if (points == 1) return {min};
  if (!(max > min)) throw ConfigError("sweep grid needs max > min");
  if (logarithmic && !(min > 0.0)) throw ConfigError("logarithmic grid needs a positive minimum");
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    out[i] = logarithmic ? min * std::pow(max / min, f) : min + f * (max - min);
  }
  out.back() = max;
  return out;
}

ModePair ModePair::parse(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw ConfigError("pair '" + std::string(text) + "' must be 'label,label'");
  ModePair p{std::string(trim(text.substr(0, comma))), std::string(trim(text.substr(comma + 1)))};
  for (const auto& label : {p.first, p.second}) {
    if (!mode_labels().count(label)) {
      throw ConfigError("pair label '" + label + "' is not one of m_A, b_A, m_B, b_B");
    }
  }
  if (p.first == p.second) throw ConfigError("pair '" + std::string(text) + "' repeats a label");
  return p;
}

NodeParams ExperimentConfig::node_params(char which) const {
  NodeParams p = node;
  if (bec_collision_over_recoil) p.bec_collision = *bec_collision_over_recoil * p.bec_recoil;
  const NodeOverrides& o = which == 'B' ? node_b : node_a;
  if (o.mirror_coupling) p.couplings.mirror = o.mirror_coupling;
  if (o.bec_coupling) p.couplings.bec = o.bec_coupling;
  if (o.bec_collision_over_recoil) p.bec_collision = *o.bec_collision_over_recoil * p.bec_recoil;
  return p;
}

bool ExperimentConfig::two_nodes() const {
  return kind == ExperimentKind::bandwidth_sweep || kind == ExperimentKind::swap_map ||
         kind == ExperimentKind::collision_compare;
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  c.spectrum = Grid{-1.5, 1.5, 301, false};
  c.epsilon = Grid{1.0, 50.0, 41, true};
  auto pairs = [](std::initializer_list<const char*> list) {
    std::vector<ModePair> out;
    for (const char* p : list) out.push_back(ModePair::parse(p));
    return out;
  };
  switch (kind) {
    case ExperimentKind::stability:
    case ExperimentKind::spectrum:
      c.omega = Grid{-1.5, 0.5, 101, false};
      break;
    case ExperimentKind::node_entanglement:
      c.omega = Grid{-1.5, 0.5, 101, false};
      break;
    case ExperimentKind::bandwidth_sweep:
      c.omega = Grid{-1.4, -0.2, 40, false};
      c.pairs = pairs({"b_A,b_B", "m_A,m_B", "m_A,b_B", "m_A,b_A", "m_B,b_B"});
      break;
    case ExperimentKind::swap_map:
      c.omega = Grid{-1.4, -0.2, 40, false};
      c.pairs = pairs({"b_A,b_B", "m_A,m_B", "m_A,b_B"});
      break;
    case ExperimentKind::collision_compare:
      c.omega = Grid{-1.4, -0.2, 61, false};
      c.pairs = pairs({"b_A,b_B", "m_A,m_B", "b_A,m_B"});
      break;
  }
  return c;
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  ExperimentConfig c = std::move(base);
  c.epsilon.logarithmic = true;
  // Work in units of omega_m so the key order does not matter.
  const double base_freq = c.node.mirror_freq;
  if (base_freq > 0.0) std::visit([base_freq](auto& d) { d.value /= base_freq; }, c.node.detuning);
  std::set<std::string, std::less<>> seen;
  bool pairs_reset = false;
  std::string line;
  int number_line = 0;
  while (std::getline(in, line)) {
    ++number_line;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty() || view == "[config]") continue;
    if (view == "[record]") break;
    const auto where = "line " + std::to_string(number_line) + ": ";
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const auto key = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));
    if (value.empty()) throw ConfigError(where + "key '" + std::string(key) + "' has no value");

    if (key == "pair") {
      if (!pairs_reset) c.pairs.clear();
      pairs_reset = true;
      try {
        c.pairs.push_back(ModePair::parse(value));
      } catch (const ConfigError& e) {
        throw ConfigError(where + e.what());
      }
      continue;
    }
    const auto& table = entries();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Entry& e) { return e.key == key; });
    if (it == table.end()) throw ConfigError(where + "unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) throw ConfigError(where + "duplicate key '" + std::string(key) + "'");
    try {
      it->set(c, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  if (seen.count("detuning_over_wm") && seen.count("bare_detuning_over_wm")) {
    throw ConfigError("set only one of detuning_over_wm and bare_detuning_over_wm");
  }
  if (!(c.node.mirror_freq > 0.0)) throw ConfigError("mirror_freq_rad_s must be positive");
  std::visit([&c](auto& d) { d.value *= c.node.mirror_freq; }, c.node.detuning);
  if (seen.count("bec_collision_over_recoil") && seen.count("bec_collision_rad_s")) {
    throw ConfigError("set only one of bec_collision_over_recoil and bec_collision_rad_s");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in, std::move(base));
}

void validate(const ExperimentConfig& c) {
  if (!(c.tolerance > 0.0 && c.tolerance <= 1e-3)) throw ConfigError("tolerance must lie in (0, 1e-3]");
  if (c.workers < 1) throw ConfigError("workers must be at least 1");
  if (!(c.filter_epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(c.transmissivity > 0.0 && c.transmissivity < 1.0)) throw ConfigError("transmissivity must lie in (0, 1)");
  if (!(c.collision_compare_over_recoil >= 0.0)) throw ConfigError("collision_compare_over_recoil must be >= 0");
  if (c.node.mirror_freq <= 0.0) throw ConfigError("mirror_freq_rad_s must be positive");

  switch (c.kind) {
    case ExperimentKind::stability:
      break;
    case ExperimentKind::spectrum:
      c.spectrum.values();
      break;
    case ExperimentKind::node_entanglement:
    case ExperimentKind::swap_map:
      c.omega.values();
      break;
    case ExperimentKind::collision_compare:
      c.omega.values();
      c.spectrum.values();
      break;
    case ExperimentKind::bandwidth_sweep:
      c.epsilon.values();
      break;
  }
  if (c.two_nodes() && c.pairs.empty()) throw ConfigError("swap experiments need at least one pair");
  derive_params(c.node_params('A'));
  if (c.two_nodes()) derive_params(c.node_params('B'));
}

std::string snapshot(const ExperimentConfig& c) {
  std::ostringstream out;
  for (const auto& entry : entries()) {
    const std::string value = entry.get(c);
    if (value.empty()) continue;  // inactive detuning variant
    if (entry.key == "bec_collision_rad_s" && c.bec_collision_over_recoil) continue;
    if (entry.key == "bec_collision_over_recoil" && !c.bec_collision_over_recoil) continue;
    out << entry.key << " = " << value << '\n';
  }
  for (const auto& p : c.pairs) out << "pair = " << p.key() << '\n';
  return out.str();
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw NumericError("number formatting failed");
  return std::string(buffer, ptr);
}

}  // namespace cvswap
