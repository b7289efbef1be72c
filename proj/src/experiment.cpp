#include "cvswap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "cvswap/errors.hpp"
#include "cvswap/gaussian.hpp"
#include "cvswap/spectral.hpp"
#include "cvswap/swap.hpp"

namespace cvswap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first
// exception (by index) is rethrown after all threads have joined.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = static_cast<std::size_t>(std::max(1, workers));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(count, n); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void add_flag(std::string& flags, std::string_view flag) {
  if (flags == "ok") flags.clear();
  if (flags.find(flag) != std::string::npos) return;
  if (!flags.empty()) flags += ';';
  flags += flag;
}

struct NodeCm {
  CovarianceMatrix cm = CovarianceMatrix::vacuum({"mirror", "bec", "output"});
  double rel_error = 0.0;
  bool converged = true;
  bool physical = true;
  double min_symplectic = 0.5;
};

NodeCm compute_node_cm(const LinearModel& m, double center, double tau, double tol) {
  QuadratureSpec q;
  q.rel_tol = tol;
  const FilteredCm f = integrate_filtered_cm(m, FilterSpec{center, tau}, q);
  NodeCm out;
  out.cm = f.cm;
  out.rel_error = f.error_estimate / std::max(f.cm.matrix().cwiseAbs().maxCoeff(), 1e-300);
  out.converged = f.converged && f.imag_residue <= 1e-8;
  const auto report = validate_cm(f.cm, kLooseTolerance);
  out.physical = report.physical;
  out.min_symplectic = report.min_symplectic_eigenvalue;
  return out;
}

void audit_node(CmAudit& audit, std::string& flags, const NodeCm& n) {
  ++audit.checked;
  audit.max_rel_error = std::max(audit.max_rel_error, n.rel_error);
  audit.min_symplectic = std::min(audit.min_symplectic, n.min_symplectic);
  if (!n.converged) {
    ++audit.nonconverged;
    add_flag(flags, "nonconverged");
  }
  if (!n.physical) {
    ++audit.unphysical;
    add_flag(flags, "unphysical");
  }
}

// Conditioned CM for one pair of node CMs; E_N per requested pair, NaN and a
// flag if the measurement is degenerate.
std::vector<double> swap_negativities(const NodeCm& a, const NodeCm& b, const std::vector<ModePair>& pairs,
                                      double transmissivity, CmAudit& audit, std::string& flags) {
  audit_node(audit, flags, a);
  audit_node(audit, flags, b);
  std::vector<double> out(pairs.size(), kNaN);
  try {
    const SwapResult r = bell_condition(assemble_two_node_blocks(a.cm, b.cm, transmissivity));
    const auto report = validate_cm(r.conditioned, kLooseTolerance);
    ++audit.checked;
    audit.min_symplectic = std::min(audit.min_symplectic, report.min_symplectic_eigenvalue);
    if (!report.physical) {
      ++audit.unphysical;
      add_flag(flags, "unphysical");
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      out[k] = remote_log_negativity(r, pairs[k].first, pairs[k].second);
    }
  } catch (const MeasurementDegeneracyError&) {
    add_flag(flags, "degenerate");
  }
  return out;
}

// Memoized filtered node CMs keyed by (node, center, tau), computed in parallel.
class NodeCmCache {
 public:
  NodeCmCache(std::vector<LinearModel> nodes, double tol) : nodes_(std::move(nodes)), tol_(tol) {}

  void request(int node, double center, double tau) { wanted_.emplace(Key{node, center, tau}, NodeCm{}); }

  void compute(int workers) {
    std::vector<std::map<Key, NodeCm>::iterator> todo;
    for (auto it = wanted_.begin(); it != wanted_.end(); ++it) todo.push_back(it);
    parallel_for(todo.size(), workers, [&](std::size_t i) {
      const Key& k = todo[i]->first;
      todo[i]->second = compute_node_cm(nodes_[std::get<0>(k)], std::get<1>(k), std::get<2>(k), tol_);
    });
  }

  const NodeCm& get(int node, double center, double tau) const { return wanted_.at(Key{node, center, tau}); }
  const LinearModel& model(int node) const { return nodes_[node]; }

 private:
  using Key = std::tuple<int, double, double>;
  std::vector<LinearModel> nodes_;
  double tol_;
  std::map<Key, NodeCm> wanted_;
};

std::string pair_column(const ModePair& p) { return "EN_" + p.first + "_" + p.second; }

std::vector<std::string> pair_keys(const std::vector<ModePair>& pairs) {
  std::vector<std::string> out;
  for (const auto& p : pairs) out.push_back(p.key());
  return out;
}

LinearModel stable_node(const NodeParams& p) {
  LinearModel m = build_node(p);
  const auto report = check_stability(m);
  if (!report.stable) throw StabilityError("node parameters are unstable", report.max_real_part);
  return m;
}

}  // namespace

const char* version() { return CVSWAP_VERSION; }

void CmAudit::merge(const CmAudit& other) {
  checked += other.checked;
  unphysical += other.unphysical;
  nonconverged += other.nonconverged;
  max_rel_error = std::max(max_rel_error, other.max_rel_error);
  min_symplectic = std::min(min_symplectic, other.min_symplectic);
}

const std::vector<double>& Curve::at(std::string_view name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw StructuralError("no series named '" + std::string(name) + "'");
  return series[it - names.begin()];
}

std::vector<std::size_t> local_maxima(const std::vector<double>& values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) out.push_back(i);
  }
  return out;
}

std::size_t argmax(const std::vector<double>& values) {
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > best_value) {
      best_value = values[i];
      best = i;
    }
  }
  return best;
}

Curve node_entanglement_sweep(const NodeParams& node, const std::vector<double>& omega_over_wm, double epsilon,
                              const SweepOptions& opt) {
  const LinearModel m = stable_node(node);
  const double wm = m.derived.omega_m;
  const double tau = epsilon / wm;
  std::vector<NodeCm> cms(omega_over_wm.size());
  parallel_for(cms.size(), opt.workers,
               [&](std::size_t i) { cms[i] = compute_node_cm(m, omega_over_wm[i] * wm, tau, opt.tolerance); });

  Curve c;
  c.x = omega_over_wm;
  c.names = {"mirror,output", "bec,output", "mirror,bec"};
  c.series.assign(3, {});
  for (const auto& n : cms) {
    std::string flags = "ok";
    audit_node(c.audit, flags, n);
    c.series[0].push_back(log_negativity(n.cm, Bipartition{{0}, {2}}));
    c.series[1].push_back(log_negativity(n.cm, Bipartition{{1}, {2}}));
    c.series[2].push_back(log_negativity(n.cm, Bipartition{{0}, {1}}));
    c.flags.push_back(flags);
  }
  return c;
}

std::pair<double, double> sideband_centers(const ModePair& pair, const DerivedParams& a, const DerivedParams& b) {
  auto sideband = [](const std::string& label, const DerivedParams& d) {
    return label.front() == 'm' ? -d.omega_m : -d.omega_B;
  };
  const bool first_on_a = pair.first.back() == 'A';
  const bool second_on_a = pair.second.back() == 'A';
  if (first_on_a != second_on_a) {
    const std::string& on_a = first_on_a ? pair.first : pair.second;
    const std::string& on_b = first_on_a ? pair.second : pair.first;
    return {sideband(on_a, a), sideband(on_b, b)};
  }
  if (first_on_a) return {sideband(pair.first, a), sideband(pair.second, b)};
  return {sideband(pair.second, a), sideband(pair.first, b)};
}

Curve bandwidth_sweep(const NodeParams& a, const NodeParams& b, const std::vector<double>& epsilons,
                      const std::vector<ModePair>& pairs, const SweepOptions& opt) {
  NodeCmCache cache({stable_node(a), stable_node(b)}, opt.tolerance);
  const double wm = cache.model(0).derived.omega_m;
  for (double eps : epsilons) {
    for (const auto& p : pairs) {
      const auto [ca, cb] = sideband_centers(p, cache.model(0).derived, cache.model(1).derived);
      cache.request(0, ca, eps / wm);
      cache.request(1, cb, eps / wm);
    }
  }
  cache.compute(opt.workers);

  Curve c;
  c.x = epsilons;
  c.names = pair_keys(pairs);
  c.series.assign(pairs.size(), {});
  for (double eps : epsilons) {
    std::string flags = "ok";
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [ca, cb] = sideband_centers(pairs[k], cache.model(0).derived, cache.model(1).derived);
      const auto en = swap_negativities(cache.get(0, ca, eps / wm), cache.get(1, cb, eps / wm), {pairs[k]},
                                        opt.transmissivity, c.audit, flags);
      c.series[k].push_back(en.front());
    }
    c.flags.push_back(flags);
  }
  return c;
}

Curve remote_sweep(const NodeParams& a, const NodeParams& b, const std::vector<double>& omega1_over_wm,
                   double epsilon, const std::vector<ModePair>& pairs, const SweepOptions& opt) {
  NodeCmCache cache({stable_node(a), stable_node(b)}, opt.tolerance);
  const double wm = cache.model(0).derived.omega_m;
  const double tau = epsilon / wm;
  std::vector<double> centers_b;
  for (const auto& p : pairs) {
    centers_b.push_back(sideband_centers(p, cache.model(0).derived, cache.model(1).derived).second);
    cache.request(1, centers_b.back(), tau);
  }
  for (double o : omega1_over_wm) cache.request(0, o * wm, tau);
  cache.compute(opt.workers);

  Curve c;
  c.x = omega1_over_wm;
  c.names = pair_keys(pairs);
  c.series.assign(pairs.size(), {});
  for (double o : omega1_over_wm) {
    std::string flags = "ok";
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto en = swap_negativities(cache.get(0, o * wm, tau), cache.get(1, centers_b[k], tau), {pairs[k]},
                                        opt.transmissivity, c.audit, flags);
      c.series[k].push_back(en.front());
    }
    c.flags.push_back(flags);
  }
  return c;
}

SwapMap swap_map(const NodeParams& a, const NodeParams& b, const std::vector<double>& omega1_over_wm,
                 const std::vector<double>& omega2_over_wm, double epsilon, const std::vector<ModePair>& pairs,
                 const SweepOptions& opt) {
  NodeCmCache cache({stable_node(a), stable_node(b)}, opt.tolerance);
  const double wm = cache.model(0).derived.omega_m;
  const double tau = epsilon / wm;
  for (double o : omega1_over_wm) cache.request(0, o * wm, tau);
  for (double o : omega2_over_wm) cache.request(1, o * wm, tau);
  cache.compute(opt.workers);

  SwapMap map;
  map.omega1 = omega1_over_wm;
  map.omega2 = omega2_over_wm;
  map.names = pair_keys(pairs);
  map.values.assign(pairs.size(), std::vector<double>(omega1_over_wm.size() * omega2_over_wm.size(), kNaN));
  map.flags.assign(omega1_over_wm.size() * omega2_over_wm.size(), "ok");
  std::vector<CmAudit> audits(omega1_over_wm.size());
  parallel_for(omega1_over_wm.size(), opt.workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < omega2_over_wm.size(); ++j) {
      const std::size_t idx = i * omega2_over_wm.size() + j;
      const auto en = swap_negativities(cache.get(0, omega1_over_wm[i] * wm, tau),
                                        cache.get(1, omega2_over_wm[j] * wm, tau), pairs, opt.transmissivity,
                                        audits[i], map.flags[idx]);
      for (std::size_t k = 0; k < pairs.size(); ++k) map.values[k][idx] = en[k];
    }
  });
  for (const auto& a_i : audits) map.audit.merge(a_i);
  return map;
}

// ---------------------------------------------------------------------------
// Run assembly

namespace {

RunTable stability_table(const RunRecord& r) {
  RunTable t{"stability.csv",
             {"drift-matrix eigenvalues per node, in units of omega_m",
              "columns: node, real part / omega_m, imaginary part / omega_m, flag"},
             {"node", "re_over_wm", "im_over_wm", "flag"},
             {}};
  for (std::size_t n = 0; n < r.stability.size(); ++n) {
    const double wm = r.derived[n].second.omega_m;
    for (const auto& ev : r.stability[n].second.eigenvalues) {
      t.rows.push_back({r.stability[n].first, format_number(ev.real() / wm), format_number(ev.imag() / wm),
                        ev.real() < 0.0 ? "ok" : "unstable"});
    }
  }
  return t;
}

std::string join_locations(const std::vector<double>& x, const std::vector<std::size_t>& idx) {
  std::string out;
  for (auto i : idx) {
    if (!out.empty()) out += ' ';
    out += format_number(x[i]);
  }
  return out.empty() ? "none" : out;
}

void curve_table(RunRecord& r, const Curve& c, std::string file, std::string axis, std::vector<std::string> comments,
                 const std::vector<std::string>& columns) {
  RunTable t{std::move(file), std::move(comments), {axis}, {}};
  t.columns.insert(t.columns.end(), columns.begin(), columns.end());
  t.columns.push_back("flag");
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    std::vector<std::string> row{format_number(c.x[i])};
    for (const auto& s : c.series) row.push_back(format_number(s[i]));
    row.push_back(c.flags[i]);
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(t));
}

int count_flagged(const std::vector<std::string>& flags) {
  return static_cast<int>(std::count_if(flags.begin(), flags.end(), [](const std::string& f) { return f != "ok"; }));
}

void summarize_curve(RunRecord& r, const Curve& c, const std::string& prefix) {
  for (std::size_t k = 0; k < c.names.size(); ++k) {
    const auto best = argmax(c.series[k]);
    r.summary.emplace_back(prefix + c.names[k] + ".argmax", format_number(c.x[best]));
    r.summary.emplace_back(prefix + c.names[k] + ".max", format_number(c.series[k][best]));
  }
}

void run_spectrum(RunRecord& r, const LinearModel& m) {
  const auto& c = r.config;
  const double wm = m.derived.omega_m;
  std::vector<double> grid;
  for (double x : c.spectrum.values()) grid.push_back(x * wm);
  const OutputSpectrum s = output_spectrum(m, grid);
  RunTable t{"spectrum.csv",
             {"normalized output power spectrum S(w) / max S",
              "columns: frequency / omega_m, normalized spectrum, flag"},
             {"omega_over_wm", "S_normalized", "flag"},
             {}};
  std::vector<double> x;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    x.push_back(grid[i] / wm);
    t.rows.push_back({format_number(x.back()), format_number(s.values[i]), "ok"});
  }
  r.tables.push_back(std::move(t));
  r.summary.emplace_back("spectrum.peak_power", format_number(s.peak_power));
  r.summary.emplace_back("spectrum.local_maxima_over_wm", join_locations(x, local_maxima(s.values)));
}

void run_collision(RunRecord& r, const SweepOptions& opt) {
  const auto& c = r.config;
  const double ratio = c.collision_compare_over_recoil;
  auto with_collision = [&](char which, double over_recoil) {
    NodeParams p = c.node_params(which);
    p.bec_collision = over_recoil * p.bec_recoil;
    return p;
  };
  const auto omega = c.omega.values();
  const Curve ref = remote_sweep(with_collision('A', 0.0), with_collision('B', 0.0), omega, c.filter_epsilon,
                                 c.pairs, opt);
  const Curve col = remote_sweep(with_collision('A', ratio), with_collision('B', ratio), omega, c.filter_epsilon,
                                 c.pairs, opt);

  Curve both;
  both.x = omega;
  std::vector<std::string> columns;
  for (std::size_t k = 0; k < c.pairs.size(); ++k) {
    both.names.push_back(c.pairs[k].key() + "@ref");
    both.series.push_back(ref.series[k]);
    columns.push_back(pair_column(c.pairs[k]) + "_ref");
    both.names.push_back(c.pairs[k].key() + "@collision");
    both.series.push_back(col.series[k]);
    columns.push_back(pair_column(c.pairs[k]) + "_collision");
  }
  for (std::size_t i = 0; i < omega.size(); ++i) {
    std::string flags = ref.flags[i];
    if (col.flags[i] != "ok") {
      for (std::size_t start = 0; start < col.flags[i].size();) {
        const auto end = std::min(col.flags[i].find(';', start), col.flags[i].size());
        add_flag(flags, col.flags[i].substr(start, end - start));
        start = end + 1;
      }
    }
    both.flags.push_back(flags);
  }
  both.audit = ref.audit;
  both.audit.merge(col.audit);
  curve_table(r, both, "collision_compare.csv", "omega1_over_wm",
              {"remote E_N versus Omega_1 / omega_m at omega_sw = 0 (ref) and omega_sw = " + format_number(ratio) +
                   " omega_R (collision)",
               "Omega_2 sits at the Stokes sideband of the pair's node-B mode; epsilon = " +
                   format_number(c.filter_epsilon)},
              columns);
  summarize_curve(r, both, "collision.");
  r.audit.merge(both.audit);
  r.flagged_points += count_flagged(both.flags);

  // Output spectra of node A for both collision strengths on a common scale.
  const LinearModel m0 = build_node(with_collision('A', 0.0));
  const LinearModel m1 = build_node(with_collision('A', ratio));
  const double wm = m0.derived.omega_m;
  std::vector<double> grid;
  for (double x : c.spectrum.values()) grid.push_back(x * wm);
  const OutputSpectrum s0 = output_spectrum(m0, grid);
  const OutputSpectrum s1 = output_spectrum(m1, grid, s0.peak_power);
  RunTable t{"collision_spectrum.csv",
             {"output spectra at omega_sw = 0 (ref) and with collisions, both divided by the ref maximum",
              "columns: frequency / omega_m, ref spectrum, collision spectrum, flag"},
             {"omega_over_wm", "S_ref", "S_collision", "flag"},
             {}};
  std::vector<double> x;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    x.push_back(grid[i] / wm);
    t.rows.push_back({format_number(x.back()), format_number(s0.values[i]), format_number(s1.values[i]), "ok"});
  }
  r.tables.push_back(std::move(t));
  r.summary.emplace_back("collision_spectrum.ref_maxima_over_wm", join_locations(x, local_maxima(s0.values)));
  r.summary.emplace_back("collision_spectrum.collision_maxima_over_wm", join_locations(x, local_maxima(s1.values)));
}

}  // namespace

RunRecord run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);
  RunRecord r;
  r.config = config;
  r.version = version();

  std::vector<std::pair<std::string, NodeParams>> nodes{{"node_A", config.node_params('A')}};
  const bool b_differs = config.node_b.mirror_coupling || config.node_b.bec_coupling ||
                         config.node_b.bec_collision_over_recoil;
  if (config.two_nodes() || b_differs) nodes.emplace_back("node_B", config.node_params('B'));
  if (config.kind == ExperimentKind::collision_compare) {
    for (char which : {'A', 'B'}) {
      NodeParams p = config.node_params(which);
      p.bec_collision = config.collision_compare_over_recoil * p.bec_recoil;
      nodes.emplace_back(std::string("node_") + which + "_collision", p);
    }
  }
  std::vector<LinearModel> models;
  bool stable = true;
  for (const auto& [name, p] : nodes) {
    models.push_back(build_node(p));
    r.derived.emplace_back(name, models.back().derived);
    r.steady.emplace_back(name, models.back().steady);
    r.stability.emplace_back(name, check_stability(models.back()));
    stable = stable && r.stability.back().second.stable;
  }

  auto finish = [&] {
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  };
  if (!stable || config.kind == ExperimentKind::stability) {
    r.tables.push_back(stability_table(r));
    if (!stable) {
      r.exit_code = kExitInstability;
      r.failure = "unstable drift matrix; no stationary state";
    }
    return finish();
  }

  const SweepOptions opt{config.tolerance, config.workers, config.transmissivity};
  switch (config.kind) {
    case ExperimentKind::stability:
      break;
    case ExperimentKind::spectrum:
      run_spectrum(r, models.front());
      break;
    case ExperimentKind::node_entanglement: {
      const Curve c = node_entanglement_sweep(nodes.front().second, config.omega.values(), config.filter_epsilon, opt);
      curve_table(r, c, "node_entanglement.csv", "omega_over_wm",
                  {"E_N between node modes and the filtered output versus filter center Omega / omega_m",
                   "epsilon = " + format_number(config.filter_epsilon)},
                  {"EN_mirror_output", "EN_bec_output", "EN_mirror_bec"});
      summarize_curve(r, c, "node.");
      r.audit.merge(c.audit);
      r.flagged_points += count_flagged(c.flags);
      break;
    }
    case ExperimentKind::bandwidth_sweep: {
      const Curve c = bandwidth_sweep(nodes[0].second, nodes[1].second, config.epsilon.values(), config.pairs, opt);
      std::vector<std::string> columns;
      for (const auto& p : config.pairs) columns.push_back(pair_column(p));
      curve_table(r, c, "bandwidth_sweep.csv", "epsilon",
                  {"remote E_N after the Bell measurement versus epsilon = omega_m tau",
                   "each node's filter sits at the Stokes sideband of its mode in the pair"},
                  columns);
      summarize_curve(r, c, "bandwidth.");
      r.audit.merge(c.audit);
      r.flagged_points += count_flagged(c.flags);
      break;
    }
    case ExperimentKind::swap_map: {
      const auto grid = config.omega.values();
      const SwapMap m = swap_map(nodes[0].second, nodes[1].second, grid, grid, config.filter_epsilon, config.pairs, opt);
      RunTable t{"swap_map.csv",
                 {"remote E_N after the Bell measurement over (Omega_1, Omega_2) / omega_m",
                  "epsilon = " + format_number(config.filter_epsilon) +
                      ", transmissivity = " + format_number(config.transmissivity)},
                 {"omega1_over_wm", "omega2_over_wm"},
                 {}};
      for (const auto& p : config.pairs) t.columns.push_back(pair_column(p));
      t.columns.push_back("flag");
      for (std::size_t i = 0; i < m.omega1.size(); ++i) {
        for (std::size_t j = 0; j < m.omega2.size(); ++j) {
          std::vector<std::string> row{format_number(m.omega1[i]), format_number(m.omega2[j])};
          for (std::size_t k = 0; k < m.names.size(); ++k) row.push_back(format_number(m.at(k, i, j)));
          row.push_back(m.flags[i * m.omega2.size() + j]);
          t.rows.push_back(std::move(row));
        }
      }
      r.tables.push_back(std::move(t));
      for (std::size_t k = 0; k < m.names.size(); ++k) {
        const auto best = argmax(m.values[k]);
        r.summary.emplace_back("map." + m.names[k] + ".argmax",
                               format_number(m.omega1[best / m.omega2.size()]) + " " +
                                   format_number(m.omega2[best % m.omega2.size()]));
        r.summary.emplace_back("map." + m.names[k] + ".max", format_number(m.values[k][best]));
      }
      r.audit.merge(m.audit);
      r.flagged_points += count_flagged(m.flags);
      break;
    }
    case ExperimentKind::collision_compare:
      run_collision(r, opt);
      break;
  }
  if (r.flagged_points > 0) {
    r.exit_code = kExitNumeric;
    r.failure = std::to_string(r.flagged_points) + " flagged points (see flag column)";
  }
  return finish();
}

}  // namespace cvswap
