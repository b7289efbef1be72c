#pragma once

// Figure-level experiments: sweeps over filter center, bandwidth and
// (Omega_1, Omega_2) maps, plus the run record that the CLI emits.

#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvswap/config.hpp"
#include "cvswap/node_model.hpp"

namespace cvswap {

const char* version();

enum ExitCode : int { kExitOk = 0, kExitIo = 1, kExitConfig = 2, kExitInstability = 3, kExitNumeric = 4 };

struct SweepOptions {
  double tolerance = 1e-6;
  int workers = 1;
  double transmissivity = 0.5;
};

/// Bookkeeping over every CM a sweep produced.
struct CmAudit {
  int checked = 0;
  int unphysical = 0;
  int nonconverged = 0;
  double max_rel_error = 0.0;  // quadrature error estimate / max|V|
  double min_symplectic = std::numeric_limits<double>::infinity();
  void merge(const CmAudit& other);
};

/// Several named series over one axis. flags[i] is "ok" or a ';'-joined
/// list of problems at point i (nonconverged, unphysical, degenerate).
struct Curve {
  std::vector<double> x;
  std::vector<std::string> names;
  std::vector<std::vector<double>> series;
  std::vector<std::string> flags;
  CmAudit audit;

  const std::vector<double>& at(std::string_view name) const;
};

struct SwapMap {
  std::vector<double> omega1;  // omega_m units
  std::vector<double> omega2;
  std::vector<std::string> names;            // pair keys
  std::vector<std::vector<double>> values;   // [pair][i * omega2.size() + j]
  std::vector<std::string> flags;            // [i * omega2.size() + j]
  CmAudit audit;

  double at(std::size_t pair, std::size_t i, std::size_t j) const { return values[pair][i * omega2.size() + j]; }
};

/// E_N of (mirror, output), (bec, output) and (mirror, bec) for one node
/// against the filter center (omega_m units) at fixed epsilon.
Curve node_entanglement_sweep(const NodeParams& node, const std::vector<double>& omega_over_wm, double epsilon,
                              const SweepOptions& opt);

/// Filter centers (rad/s) the two nodes use for a pair: each mode's Stokes
/// sideband (-omega_m or -omega_B of its node). For a pair inside one node,
/// that node follows the first mode and the other node the second.
std::pair<double, double> sideband_centers(const ModePair& pair, const DerivedParams& a, const DerivedParams& b);

/// Remote E_N per pair against epsilon, each pair at its sideband centers.
Curve bandwidth_sweep(const NodeParams& a, const NodeParams& b, const std::vector<double>& epsilons,
                      const std::vector<ModePair>& pairs, const SweepOptions& opt);

/// Remote E_N per pair against Omega_1 (omega_m units); node B's filter sits
/// at the sideband of the pair's second mode.
Curve remote_sweep(const NodeParams& a, const NodeParams& b, const std::vector<double>& omega1_over_wm,
                   double epsilon, const std::vector<ModePair>& pairs, const SweepOptions& opt);

SwapMap swap_map(const NodeParams& a, const NodeParams& b, const std::vector<double>& omega1_over_wm,
                 const std::vector<double>& omega2_over_wm, double epsilon, const std::vector<ModePair>& pairs,
                 const SweepOptions& opt);

/// Indices of strict interior local maxima.
std::vector<std::size_t> local_maxima(const std::vector<double>& values);
/// Index of the first maximum; NaNs are skipped.
std::size_t argmax(const std::vector<double>& values);

struct RunTable {
  std::string file;
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct RunRecord {
  ExperimentConfig config;
  std::string version;
  double wall_seconds = 0.0;
  std::vector<std::pair<std::string, DerivedParams>> derived;
  std::vector<std::pair<std::string, SteadyState>> steady;
  std::vector<std::pair<std::string, StabilityReport>> stability;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<RunTable> tables;
  CmAudit audit;
  int flagged_points = 0;
  int exit_code = kExitOk;
  std::string failure;
};

/// Validates the config (ConfigError), builds the nodes, checks stability
/// and runs the experiment. An unstable node ends the run with exit code 3
/// and only the stability table; flagged points give exit code 4 with all
/// data retained.
RunRecord run(const ExperimentConfig& config);

/// Writes every table as CSV plus run.meta into `dir`. Files are staged and
/// moved into place only once all were written; IoError otherwise, with no
/// partial files left. Returns the written paths.
std::vector<std::filesystem::path> emit(const RunRecord& record, const std::filesystem::path& dir);

/// The metadata text emit() writes: "[config]" snapshot, then "[record]".
std::string metadata_text(const RunRecord& record);

}  // namespace cvswap
