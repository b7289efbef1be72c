// Command-line front end: one subcommand per experiment kind plus `check`,
// a quick run of the library's oracle cross-checks.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cvswap/errors.hpp"
#include "cvswap/experiment.hpp"
#include "cvswap/lyapunov.hpp"
#include "cvswap/random_state.hpp"
#include "cvswap/spectral.hpp"
#include "cvswap/swap.hpp"

namespace {

using namespace cvswap;

struct RunFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<int> workers;
  std::vector<std::string> pairs;
};

int run_experiment(ExperimentKind kind, const RunFlags& flags) {
  ExperimentConfig config = default_config(kind);
  if (!flags.config.empty()) {
    config = load_config(flags.config, config);
    if (config.kind != kind) {
      throw ConfigError("config file describes experiment '" + std::string(to_string(config.kind)) +
                        "', not '" + std::string(to_string(kind)) + "'");
    }
  }
  if (flags.seed) config.seed = *flags.seed;
  if (flags.tolerance) config.tolerance = *flags.tolerance;
  if (flags.workers) config.workers = *flags.workers;
  if (!flags.pairs.empty()) {
    config.pairs.clear();
    for (const auto& p : flags.pairs) config.pairs.push_back(ModePair::parse(p));
  }

  const RunRecord record = run(config);
  const std::string out = flags.out.empty() ? "cvswap-out/" + std::string(to_string(kind)) : flags.out;
  const auto files = emit(record, out);
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
  for (const auto& [key, value] : record.summary) std::cout << key << " = " << value << '\n';
  if (record.exit_code != kExitOk) std::cerr << "cvswap: " << record.failure << '\n';
  return record.exit_code;
}

// Small-sample versions of the test-suite oracles, seeded from --seed.
int run_checks(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  bool ok = true;
  auto report = [&](const std::string& name, bool pass, double measured) {
    std::cout << (pass ? "PASS " : "FAIL ") << name << " (" << format_number(measured) << ")\n";
    ok = ok && pass;
  };

  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const auto v = random_gaussian_state({"a", "b"}, rng);
    const Bipartition part{{0}, {1}};
    worst = std::max(worst, std::abs(log_negativity(v, part) - log_negativity_spectral(v, part)));
  }
  report("closed-form vs spectral negativity", worst < 1e-9, worst);

  worst = 0.0;
  std::uniform_real_distribution<double> transmissivity(0.1, 0.9);
  for (int i = 0; i < instances; ++i) {
    const auto blocks = SwapBlocks::from_full(random_gaussian_state(SwapBlocks::all_labels(), rng), transmissivity(rng));
    const Matrix8d closed = bell_condition(blocks).conditioned.matrix();
    const Matrix8d oracle = general_dyne_oracle(blocks).matrix();
    worst = std::max(worst, (closed - oracle).cwiseAbs().maxCoeff() / oracle.cwiseAbs().maxCoeff());
  }
  report("Bell conditioning vs general-dyne oracle", worst < 1e-9, worst);

  const auto blocks = SwapBlocks::from_full(random_gaussian_state(SwapBlocks::all_labels(), rng), 0.5);
  const auto mc = mc_homodyne_oracle(blocks, 200000, rng());
  const Matrix8d exact = bell_condition(blocks).conditioned.matrix();
  const double sigmas = ((mc.estimate.matrix() - exact).array() / mc.standard_error.array()).abs().maxCoeff();
  report("Monte-Carlo homodyne within 5 sigma", sigmas < 5.0, sigmas);

  const LinearModel m = build_node(NodeParams::reference());
  const auto lyap = lyapunov_cm(m).matrix();
  const auto quad = unfiltered_quadrature_cm(m).cm.matrix();
  const double rel = (quad - lyap).cwiseAbs().maxCoeff() / lyap.cwiseAbs().maxCoeff();
  report("frequency integral vs Lyapunov (reference node)", rel < 1e-6, rel);
  return ok ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cvswap: entanglement in hybrid optomechanical cavities and its swapping"};
  app.set_version_flag("--version", std::string(cvswap::version()));
  app.require_subcommand(1);

  const std::map<ExperimentKind, std::string> descriptions{
      {ExperimentKind::stability, "drift-matrix eigenvalues of the configured node(s)"},
      {ExperimentKind::spectrum, "normalized cavity output spectrum"},
      {ExperimentKind::node_entanglement, "E_N of mirror/BEC with the filtered output vs filter center"},
      {ExperimentKind::bandwidth_sweep, "remote E_N after swapping vs filter inverse bandwidth"},
      {ExperimentKind::swap_map, "remote E_N after swapping over the (Omega_1, Omega_2) plane"},
      {ExperimentKind::collision_compare, "remote E_N and spectra with and without atomic collisions"},
  };
  std::map<ExperimentKind, RunFlags> flags;
  std::map<ExperimentKind, CLI::App*> subs;
  for (auto kind : all_kinds()) {
    auto& f = flags[kind];
    auto* sub = app.add_subcommand(std::string(to_string(kind)), descriptions.at(kind));
    sub->add_option("--config", f.config, "key = value config file (a run.meta works too)")->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "output directory (default cvswap-out/<experiment>)");
    sub->add_option("--seed", f.seed, "seed recorded with the run");
    sub->add_option("--tolerance", f.tolerance, "relative quadrature tolerance, in (0, 1e-3]");
    sub->add_option("--workers", f.workers, "worker threads for sweep points");
    sub->add_option("--pair", f.pairs, "mode pair such as m_A,b_B (repeatable)")->take_all();
    subs[kind] = sub;
  }
  std::uint64_t check_seed = 1;
  int check_instances = 50;
  auto* check = app.add_subcommand("check", "quick oracle cross-checks of the library");
  check->add_option("--seed", check_seed, "random seed");
  check->add_option("--instances", check_instances, "random instances per check")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_checks(check_seed, check_instances);
    for (const auto& [kind, sub] : subs) {
      if (sub->parsed()) return run_experiment(kind, flags[kind]);
    }
  } catch (const ConfigError& e) {
    std::cerr << "cvswap: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const StructuralError& e) {
    std::cerr << "cvswap: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const StabilityError& e) {
    std::cerr << "cvswap: unstable parameters: " << e.what() << " (max Re lambda = " << e.max_real_part() << ")\n";
    return kExitInstability;
  } catch (const NumericError& e) {
    std::cerr << "cvswap: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const IoError& e) {
    std::cerr << "cvswap: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "cvswap: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}
