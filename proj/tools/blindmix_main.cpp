// blindmix: blind demixing simulation driver.
//
// Subcommands: demo | convergence | phase-transition | noise-sweep |
// cond-sweep | selftest. Experiment output goes to --out as CSV or JSON
// trace rows plus a ".summary" sibling file.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blindmix/experiments.hpp"
#include "blindmix/records.hpp"

namespace {

using blindmix::ExperimentConfig;
using blindmix::ExperimentKind;

struct CliOptions {
  ExperimentConfig cfg;
  std::string encoder = "gaussian";
  std::string signal = "gaussian";
  std::string format = "csv";
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--N", opt.cfg.N, "signal length per user");
  cmd->add_option("--K", opt.cfg.K, "channel taps per user");
  cmd->add_option("--L", opt.cfg.L, "number of measurements");
  cmd->add_option("--s", opt.cfg.s, "number of users (phase-transition: sweep upper bound)");
  cmd->add_option("--encoder", opt.encoder, "encoding matrices")
      ->check(CLI::IsMember({"gaussian", "hadamard"}));
  cmd->add_option("--signal", opt.signal, "ground-truth signal model")
      ->check(CLI::IsMember({"gaussian", "qam16"}));
  cmd->add_option("--solver", opt.cfg.solver, "solver: rgd | rtr | fiht | all");
  cmd->add_option("--trials", opt.cfg.trials, "trials per sweep point");
  cmd->add_option("--seed", opt.cfg.base_seed, "base seed for the counter-based RNG split");
  cmd->add_option("--sigma", opt.cfg.sigmas, "relative noise level(s)")->delimiter(',');
  cmd->add_option("--kappa", opt.cfg.kappas, "condition numbers for cond-sweep")->delimiter(',');
  cmd->add_option("--alpha", opt.cfg.alpha, "RGD step size (default 1/s)");
  cmd->add_option("--max-iters", opt.cfg.max_iters, "iteration cap");
  cmd->add_option("--grad-tol", opt.cfg.grad_tol, "gradient-norm stopping tolerance");
  cmd->add_option("--out", opt.cfg.out, "output path for records");
  cmd->add_option("--format", opt.format, "record format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--traces", opt.cfg.keep_traces, "keep per-iteration traces in sweep records");
  cmd->set_config("--config", "", "flat key=value config file with the same keys as the flags");
}

int finish_experiment(const CliOptions& opt, const std::vector<blindmix::ExperimentRecord>& records) {
  for (const auto& rec : records) {
    std::cout << rec.config.experiment << " " << rec.config.solver << " s=" << rec.config.s
              << " sigma=" << rec.config.sigma << " kappa=" << rec.config.kappa
              << ": success_rate=" << blindmix::success_rate(rec)
              << " mean_err=" << blindmix::mean_err(rec);
    if (!rec.trials.empty()) std::cout << " iters[0]=" << rec.trials.front().iterations;
    std::cout << "\n";
  }
  std::string out = opt.cfg.out;
  if (out.empty()) out = "blindmix_" + records.front().config.experiment + "." + opt.format;
  blindmix::write_records(records, out, blindmix::record_format_from_string(opt.format));
  std::cout << "records written to " << out << " (+ " << blindmix::summary_path(out) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind demixing of rank-one lifted signals: solvers and experiments"};
  app.require_subcommand(1);

  CliOptions opt;
  auto* demo = app.add_subcommand("demo", "end-to-end OFDM transmit/recover demonstration");
  auto* convergence = app.add_subcommand("convergence", "per-iteration solver comparison");
  auto* phase = app.add_subcommand("phase-transition", "success probability vs number of users");
  auto* noise = app.add_subcommand("noise-sweep", "reconstruction error vs noise level");
  auto* cond = app.add_subcommand("cond-sweep", "trust-region behavior vs condition number");
  auto* selftest = app.add_subcommand("selftest", "run the invariant/oracle suite");
  for (CLI::App* cmd : {demo, convergence, phase, noise, cond, selftest})
    add_common_options(cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad arguments exit with 2, --help with 0
  }

  try {
    if (selftest->parsed()) {
      return blindmix::selftest(std::cout) ? 0 : 1;
    }

    opt.cfg.encoder = blindmix::encoder_kind_from_string(opt.encoder);
    opt.cfg.signal = blindmix::signal_kind_from_string(opt.signal);
    opt.cfg.format = blindmix::record_format_from_string(opt.format);

    if (demo->parsed()) {
      opt.cfg.kind = ExperimentKind::Demo;
      if (demo->count("--signal") == 0) opt.cfg.signal = blindmix::SignalKind::Qam16;
      if (demo->count("--N") == 0) opt.cfg.N = 16;
      if (demo->count("--K") == 0) opt.cfg.K = 8;
      if (demo->count("--L") == 0) opt.cfg.L = 256;
      if (demo->count("--s") == 0) opt.cfg.s = 2;
      const auto result = blindmix::run_demo(opt.cfg, &std::cout);
      return result.recovered ? 0 : 1;
    }
    if (convergence->parsed()) {
      opt.cfg.kind = ExperimentKind::Convergence;
      if (convergence->count("--solver") == 0) opt.cfg.solver = "all";
      return finish_experiment(opt, blindmix::run_convergence(opt.cfg));
    }
    if (phase->parsed()) {
      opt.cfg.kind = ExperimentKind::PhaseTransition;
      if (phase->count("--s") == 0) opt.cfg.s = 12;
      if (phase->count("--L") == 0) opt.cfg.L = 1000;
      return finish_experiment(opt, blindmix::run_phase_transition(opt.cfg));
    }
    if (noise->parsed()) {
      opt.cfg.kind = ExperimentKind::NoiseSweep;
      if (noise->count("--sigma") == 0) opt.cfg.sigmas = {1e-3, 1e-2, 1e-1};
      if (noise->count("--L") == 0) opt.cfg.L = 1500;
      if (noise->count("--s") == 0) opt.cfg.s = 2;
      return finish_experiment(opt, blindmix::run_noise_sweep(opt.cfg));
    }
    if (cond->parsed()) {
      opt.cfg.kind = ExperimentKind::CondSweep;
      opt.cfg.s = 2;
      return finish_experiment(opt, blindmix::run_cond_sweep(opt.cfg));
    }
  } catch (const blindmix::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
