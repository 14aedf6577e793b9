#include "blindmix/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <random>
#include <thread>

#include "blindmix/manifold.hpp"
#include "blindmix/metrics.hpp"
#include "blindmix/rng.hpp"

namespace blindmix {

namespace {

using Clock = std::chrono::steady_clock;

bool known_solver(const std::string& name) {
  return name == "rgd" || name == "rtr" || name == "fiht" || name == "all";
}

std::vector<std::string> solver_list(const std::string& name) {
  if (name == "all") return {"rgd", "rtr", "fiht"};
  return {name};
}

RecordConfig make_record_config(const ExperimentConfig& cfg, const std::string& solver, int s,
                                double sigma, double kappa) {
  return {to_string(cfg.kind), to_string(cfg.encoder), solver, cfg.N, cfg.K, cfg.L, s,
          sigma,              kappa};
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Demo: return "demo";
    case ExperimentKind::Convergence: return "convergence";
    case ExperimentKind::PhaseTransition: return "phase_transition";
    case ExperimentKind::NoiseSweep: return "noise_sweep";
    case ExperimentKind::CondSweep: return "cond_sweep";
    case ExperimentKind::Selftest: return "selftest";
  }
  return "unknown";
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.N < 1 || cfg.K < 1 || cfg.L < 2 || cfg.s < 1)
    throw ConfigError("dimensions must be positive");
  if (cfg.L <= cfg.N || cfg.L <= cfg.K)
    throw ConfigError("L must exceed both N and K");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  if (!known_solver(cfg.solver)) throw ConfigError("unknown solver: " + cfg.solver);
  if (cfg.encoder == EncoderKind::Hadamard && !hadamard_size_supported(cfg.L))
    throw ConfigError("unsupported Hadamard size L=" + std::to_string(cfg.L) +
                      " (needs 2^a or 12*2^a)");
  for (double sig : cfg.sigmas)
    if (sig < 0.0) throw ConfigError("sigma must be >= 0");
  if (cfg.kind == ExperimentKind::CondSweep) {
    for (double kappa : cfg.kappas)
      if (kappa <= 0.0) throw ConfigError("kappa must be > 0");
  }
  if (cfg.max_iters < 1) throw ConfigError("max-iters must be >= 1");
  if (cfg.grad_tol < 0.0) throw ConfigError("grad-tol must be >= 0");
}

GroundTruth make_ground_truth(int N, int K, int s, SignalKind kind, std::uint64_t base_seed,
                              std::uint64_t trial) {
  GroundTruth truth(s);
  for (int k = 0; k < s; ++k) {
    if (kind == SignalKind::Gaussian) {
      truth[k].x = rng::complex_gaussian_vector(
          N, rng::derive_seed(base_seed, trial, k, rng::Role::Signal));
    } else {
      std::mt19937_64 gen(rng::derive_seed(base_seed, trial, k, rng::Role::Message));
      std::uniform_int_distribution<int> sym(0, 15);
      QamMessage msg;
      msg.symbols.resize(N);
      for (int n = 0; n < N; ++n) msg.symbols[n] = sym(gen);
      truth[k].x = ofdm_modulate(qam16_modulate(msg));
    }
    truth[k].h = rng::complex_gaussian_vector(
        K, rng::derive_seed(base_seed, trial, k, rng::Role::Channel));
  }
  return truth;
}

TrialRecord run_solver_trial(const MeasurementEnsemble& ensemble, const ObservationVector& obs,
                             const ProductPoint& init, const std::string& solver,
                             const ExperimentConfig& config, int trial, std::uint64_t seed) {
  TrialRecord record;
  record.seed = seed;
  record.trial = trial;
  const GroundTruth* truth = obs.ground_truth ? &*obs.ground_truth : nullptr;
  const auto start = Clock::now();
  try {
    if (solver == "rgd") {
      RgdConfig rgd{config.alpha, config.max_iters, config.grad_tol};
      CostContext context(ensemble, obs.y);
      SolveResult res = rgd_run(context, init, rgd, truth);
      record.iterations = res.iterations;
      if (config.keep_traces) record.trace = std::move(res.trace);
      record.err = truth ? relative_error(res.point, *truth, ensemble.N(), ensemble.K())
                         : std::numeric_limits<double>::quiet_NaN();
    } else if (solver == "rtr") {
      TrustRegionConfig rtr;
      rtr.max_iters = config.max_iters;
      rtr.grad_tol = config.grad_tol;
      CostContext context(ensemble, obs.y);
      SolveResult res = rtr_run(context, init, rtr, truth);
      record.iterations = res.iterations;
      if (config.keep_traces) record.trace = std::move(res.trace);
      record.err = truth ? relative_error(res.point, *truth, ensemble.N(), ensemble.K())
                         : std::numeric_limits<double>::quiet_NaN();
    } else if (solver == "fiht") {
      FihtResult res = fiht_run(ensemble, obs.y, config.max_iters,
                                std::max(config.grad_tol, 1e-12), truth, nullptr);
      record.iterations = res.iterations;
      if (config.keep_traces) record.trace = std::move(res.trace);
      record.err = truth ? relative_error(res.estimates, lifted_matrices(*truth))
                         : std::numeric_limits<double>::quiet_NaN();
    } else {
      throw ConfigError("unknown solver: " + solver);
    }
  } catch (const std::exception&) {
    record.err = std::numeric_limits<double>::infinity();
  }
  record.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  record.success = is_success(record.err);
  return record;
}

std::vector<ExperimentRecord> run_convergence(const ExperimentConfig& config) {
  validate_config(config);
  ExperimentConfig cfg = config;
  cfg.keep_traces = true;
  const std::uint64_t trial_seed = rng::derive_seed(cfg.base_seed, 0);
  const GroundTruth truth = make_ground_truth(cfg.N, cfg.K, cfg.s, cfg.signal, cfg.base_seed, 0);
  const MeasurementEnsemble ensemble(cfg.encoder, cfg.L, cfg.N, cfg.K, cfg.s,
                                     rng::derive_seed(cfg.base_seed, 0, 0, rng::Role::Encoder));
  const double sigma = cfg.sigmas.empty() ? 0.0 : cfg.sigmas.front();
  const ObservationVector obs = synthesize_observation(
      ensemble, truth, sigma, rng::derive_seed(cfg.base_seed, 0, 0, rng::Role::Noise));
  const ProductPoint init = spectral_init(ensemble, obs.y);

  const auto solvers = solver_list(cfg.solver);
  std::vector<ExperimentRecord> records(solvers.size());
  parallel_for(static_cast<int>(solvers.size()), [&](int i) {
    records[i].config = make_record_config(cfg, solvers[i], cfg.s, sigma, 1.0);
    records[i].trials = {run_solver_trial(ensemble, obs, init, solvers[i], cfg, 0, trial_seed)};
  });
  return records;
}

namespace {

// Shared sweep skeleton: one record per sweep value, config.trials trials
// each, every trial with its own ensemble, truth and observation.
std::vector<ExperimentRecord> run_sweep(
    const ExperimentConfig& cfg, const std::vector<double>& sweep,
    const std::function<RecordConfig(double)>& record_config,
    const std::function<TrialRecord(double, int)>& trial_body) {
  std::vector<ExperimentRecord> records(sweep.size());
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    records[i].config = record_config(sweep[i]);
    records[i].trials.resize(cfg.trials);
  }
  const int total = static_cast<int>(sweep.size()) * cfg.trials;
  parallel_for(total, [&](int idx) {
    const int i = idx / cfg.trials;
    const int t = idx % cfg.trials;
    try {
      records[i].trials[t] = trial_body(sweep[i], t);
    } catch (const std::exception&) {
      // Setup failures (e.g. degenerate spectral init) count as failed trials.
      TrialRecord failed;
      failed.seed = rng::derive_seed(cfg.base_seed, t);
      failed.trial = t;
      failed.err = std::numeric_limits<double>::infinity();
      failed.success = false;
      records[i].trials[t] = failed;
    }
  });
  return records;
}

}  // namespace

std::vector<ExperimentRecord> run_phase_transition(const ExperimentConfig& config) {
  validate_config(config);
  const ExperimentConfig& cfg = config;
  std::vector<double> sweep;
  for (int s = 1; s <= cfg.s; ++s) sweep.push_back(s);

  const std::string solver = cfg.solver == "all" ? "rtr" : cfg.solver;
  return run_sweep(
      cfg, sweep,
      [&](double s) { return make_record_config(cfg, solver, static_cast<int>(s), 0.0, 1.0); },
      [&](double s_value, int trial) {
        const int s = static_cast<int>(s_value);
        const std::uint64_t seed = rng::derive_seed(cfg.base_seed, trial);
        const GroundTruth truth =
            make_ground_truth(cfg.N, cfg.K, s, cfg.signal, cfg.base_seed, trial);
        const MeasurementEnsemble ensemble(
            cfg.encoder, cfg.L, cfg.N, cfg.K, s,
            rng::derive_seed(cfg.base_seed, trial, 0, rng::Role::Encoder));
        const ObservationVector obs = synthesize_observation(
            ensemble, truth, 0.0, rng::derive_seed(cfg.base_seed, trial, 0, rng::Role::Noise));
        return run_solver_trial(ensemble, obs, spectral_init(ensemble, obs.y), solver, cfg, trial,
                                seed);
      });
}

std::vector<ExperimentRecord> run_noise_sweep(const ExperimentConfig& config) {
  validate_config(config);
  const ExperimentConfig& cfg = config;
  const std::string solver = cfg.solver == "all" ? "rtr" : cfg.solver;
  return run_sweep(
      cfg, cfg.sigmas,
      [&](double sigma) { return make_record_config(cfg, solver, cfg.s, sigma, 1.0); },
      [&](double sigma, int trial) {
        const std::uint64_t seed = rng::derive_seed(cfg.base_seed, trial);
        const GroundTruth truth =
            make_ground_truth(cfg.N, cfg.K, cfg.s, cfg.signal, cfg.base_seed, trial);
        const MeasurementEnsemble ensemble(
            cfg.encoder, cfg.L, cfg.N, cfg.K, cfg.s,
            rng::derive_seed(cfg.base_seed, trial, 0, rng::Role::Encoder));
        const ObservationVector obs = synthesize_observation(
            ensemble, truth, sigma, rng::derive_seed(cfg.base_seed, trial, 0, rng::Role::Noise));
        return run_solver_trial(ensemble, obs, spectral_init(ensemble, obs.y), solver, cfg, trial,
                                seed);
      });
}

std::vector<ExperimentRecord> run_cond_sweep(const ExperimentConfig& config) {
  validate_config(config);
  ExperimentConfig cfg = config;
  cfg.s = 2;
  cfg.keep_traces = true;
  const std::string solver = cfg.solver == "all" ? "rtr" : cfg.solver;
  return run_sweep(
      cfg, cfg.kappas,
      [&](double kappa) { return make_record_config(cfg, solver, cfg.s, 0.0, kappa); },
      [&](double kappa, int trial) {
        const std::uint64_t seed = rng::derive_seed(cfg.base_seed, trial);
        GroundTruth truth = make_ground_truth(cfg.N, cfg.K, cfg.s, cfg.signal, cfg.base_seed, trial);
        // ||X_1||_F = 1 and ||X_2||_F = kappa, scaling the signal factor.
        truth[0].x /= truth[0].x.norm() * truth[0].h.norm();
        truth[1].x *= kappa / (truth[1].x.norm() * truth[1].h.norm());
        const MeasurementEnsemble ensemble(
            cfg.encoder, cfg.L, cfg.N, cfg.K, cfg.s,
            rng::derive_seed(cfg.base_seed, trial, 0, rng::Role::Encoder));
        const ObservationVector obs = synthesize_observation(
            ensemble, truth, 0.0, rng::derive_seed(cfg.base_seed, trial, 0, rng::Role::Noise));
        return run_solver_trial(ensemble, obs, spectral_init(ensemble, obs.y), solver, cfg, trial,
                                seed);
      });
}

DemoResult run_demo(const ExperimentConfig& config, std::ostream* log) {
  validate_config(config);
  const ExperimentConfig& cfg = config;
  const int s = cfg.s, N = cfg.N, K = cfg.K, L = cfg.L;

  // Transmitted messages and the physical time-domain chain.
  const bool qam = cfg.signal == SignalKind::Qam16;
  DemoResult result;
  std::vector<SourceSignal> signals(s);
  std::vector<ChannelImpulse> channels;
  GroundTruth truth(s);
  std::mt19937_64 msg_gen(rng::derive_seed(cfg.base_seed, 0, 0, rng::Role::Message));
  std::uniform_int_distribution<int> sym(0, 15);
  for (int k = 0; k < s; ++k) {
    if (qam) {
      QamMessage msg;
      msg.symbols.resize(N);
      for (int n = 0; n < N; ++n) msg.symbols[n] = sym(msg_gen);
      result.sent.push_back(msg);
      signals[k] = {ofdm_modulate(qam16_modulate(msg)), SignalKind::Qam16};
    } else {
      signals[k] = {rng::complex_gaussian_vector(
                        N, rng::derive_seed(cfg.base_seed, 0, k, rng::Role::Signal)),
                    SignalKind::Gaussian};
    }
    truth[k].x = signals[k].x;
    truth[k].h = rng::complex_gaussian_vector(
        K, rng::derive_seed(cfg.base_seed, 0, k, rng::Role::Channel));
    channels.push_back(ChannelImpulse::from_taps(truth[k].h, L));
  }

  const MeasurementEnsemble ensemble(cfg.encoder, L, N, K, s,
                                     rng::derive_seed(cfg.base_seed, 0, 0, rng::Role::Encoder));
  const CVec z = receive_time_domain(ensemble, signals, channels, CVec::Zero(L));
  ObservationVector obs;
  obs.y = fourier_observation(z);
  obs.sigma = 0.0;
  obs.ground_truth = truth;

  CostContext context(ensemble, obs.y);
  TrustRegionConfig rtr;
  rtr.max_iters = cfg.max_iters;
  rtr.grad_tol = cfg.grad_tol;
  const SolveResult res = rtr_run(context, spectral_init(ensemble, obs.y), rtr, &truth);
  result.err = relative_error(res.point, truth, N, K);

  if (!qam) {
    result.recovered = is_success(result.err);
    if (log != nullptr)
      *log << "demo: " << s << " users, N=" << N << " K=" << K << " L=" << L
           << ", gaussian signals, err(X)=" << result.err << "\n";
    return result;
  }

  // Scale/phase alignment against the transmitted reference, then decode.
  result.recovered = true;
  for (int k = 0; k < s; ++k) {
    const CVec x_hat = res.point.factors[k].head(N);
    const Complex psi = x_hat.dot(truth[k].x) / x_hat.squaredNorm();
    result.decoded.push_back(qam16_demodulate(psi * x_hat));
    if (result.decoded[k].symbols != result.sent[k].symbols) result.recovered = false;
  }

  if (log != nullptr) {
    *log << "demo: " << s << " users, N=" << N << " K=" << K << " L=" << L
         << ", err(X)=" << result.err << "\n";
    for (int k = 0; k < s; ++k) {
      *log << "  user " << k << " sent:    ";
      for (int v : result.sent[k].symbols) *log << v << ' ';
      *log << "\n  user " << k << " decoded: ";
      for (int v : result.decoded[k].symbols) *log << v << ' ';
      *log << (result.decoded[k].symbols == result.sent[k].symbols ? " (match)" : " (MISMATCH)")
           << "\n";
    }
  }
  return result;
}

double success_rate(const ExperimentRecord& record) {
  if (record.trials.empty()) return 0.0;
  int ok = 0;
  for (const auto& t : record.trials) ok += t.success ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(record.trials.size());
}

double mean_err(const ExperimentRecord& record) {
  if (record.trials.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& t : record.trials) sum += t.err;
  return sum / static_cast<double>(record.trials.size());
}

int thread_cap() {
  if (const char* env = std::getenv("BLINDMIX_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, const std::function<void(int)>& body) {
  const int workers = std::min(thread_cap(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace blindmix
