#pragma once

// Experiment configuration: a line-oriented "key = value" text format.
//
//   # comment
//   experiment = swap-map
//   pump_power_W = 0.05
//   node_b.bec_coupling_rad_s = 0
//   pair = m_A,b_B          (repeatable)
//
// Unknown keys, duplicate keys (except `pair`) and malformed values are
// rejected with ConfigError. A line "[record]" ends the configuration, so a
// run's metadata file can be fed back in as a config. Frequencies on sweep
// axes are in units of omega_m.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvswap/node_model.hpp"

namespace cvswap {

enum class ExperimentKind { stability, spectrum, node_entanglement, bandwidth_sweep, swap_map, collision_compare };

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(std::string_view name);
const std::vector<ExperimentKind>& all_kinds();

struct Grid {
  double min = 0.0;
  double max = 0.0;
  int points = 0;
  bool logarithmic = false;

  /// Throws ConfigError if empty, non-monotone or (log) non-positive.
  std::vector<double> values() const;
};

struct ModePair {
  std::string first;
  std::string second;
  std::string key() const { return first + "," + second; }
  /// Parses "m_A,b_B"; ConfigError on unknown or repeated labels.
  static ModePair parse(std::string_view text);
};

/// Per-node departures from the shared node parameters.
struct NodeOverrides {
  std::optional<double> mirror_coupling;  // rad/s
  std::optional<double> bec_coupling;     // rad/s
  std::optional<double> bec_collision_over_recoil;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::stability;
  NodeParams node = NodeParams::reference();
  std::optional<double> bec_collision_over_recoil;  // overrides node.bec_collision
  NodeOverrides node_a;
  NodeOverrides node_b;

  Grid omega;         // filter centers, omega_m units
  Grid epsilon;       // inverse bandwidths (bandwidth-sweep)
  Grid spectrum;      // output spectrum frequencies, omega_m units
  double filter_epsilon = 10.0;
  double transmissivity = 0.5;
  double collision_compare_over_recoil = 0.5;
  std::vector<ModePair> pairs;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  int workers = 1;

  NodeParams node_params(char which) const;  // 'A' or 'B'
  bool two_nodes() const;
};

/// Defaults (grids, pairs) for each experiment kind.
ExperimentConfig default_config(ExperimentKind kind);

/// Applies the key/value lines of `in` on top of `base`.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base);
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base);

/// Whole-config checks: grids, pairs, tolerance, workers, node validity.
void validate(const ExperimentConfig& c);

/// Canonical text form; parse_config(snapshot(c)) reproduces c.
std::string snapshot(const ExperimentConfig& c);

/// Shortest round-trip decimal text, independent of the locale.
std::string format_number(double value);

}  // namespace cvswap
