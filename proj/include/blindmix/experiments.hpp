#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "blindmix/records.hpp"
#include "blindmix/signal_chain.hpp"
#include "blindmix/solvers.hpp"

namespace blindmix {

enum class ExperimentKind { Demo, Convergence, PhaseTransition, NoiseSweep, CondSweep, Selftest };

std::string to_string(ExperimentKind kind);

/// Raised for invalid experiment configurations (CLI exit code 2).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Convergence;
  int N = 50, K = 50, L = 1250, s = 5;  // for phase transitions, s is the sweep upper bound
  EncoderKind encoder = EncoderKind::Gaussian;
  SignalKind signal = SignalKind::Gaussian;
  std::string solver = "rtr";  // rgd | rtr | fiht | all
  int trials = 10;
  std::vector<double> sigmas = {0.0};
  std::vector<double> kappas = {1.0, 10.0, 20.0};
  std::uint64_t base_seed = 1;
  double alpha = 0.0;  // RGD step size; <= 0 selects 1/s
  int max_iters = 500;
  double grad_tol = 1e-8;
  bool keep_traces = false;
  std::string out;
  RecordFormat format = RecordFormat::Csv;
};

/// Throws ConfigError on inconsistent settings (dimensions, encoder sizes,
/// unknown solver names).
void validate_config(const ExperimentConfig& config);

GroundTruth make_ground_truth(int N, int K, int s, SignalKind kind, std::uint64_t base_seed,
                              std::uint64_t trial);

/// One solver run on a prepared instance; solver errors are captured in the
/// record (success = false, err = inf) rather than propagated.
TrialRecord run_solver_trial(const MeasurementEnsemble& ensemble, const ObservationVector& obs,
                             const ProductPoint& init, const std::string& solver,
                             const ExperimentConfig& config, int trial, std::uint64_t seed);

/// RGD, RTR and FIHT from the shared spectral initialization on one seeded
/// instance, with per-iteration traces.
std::vector<ExperimentRecord> run_convergence(const ExperimentConfig& config);

/// For each number of users s in [1, config.s]: config.trials seeded trials,
/// success = err <= 1e-3.
std::vector<ExperimentRecord> run_phase_transition(const ExperimentConfig& config);

/// For each sigma in config.sigmas: config.trials trials with the Fourier
/// domain noise model e = sigma * ||y|| * w/||w||.
std::vector<ExperimentRecord> run_noise_sweep(const ExperimentConfig& config);

/// s = 2 with ||X1||_F = 1 and ||X2||_F = kappa for each kappa in
/// config.kappas.
std::vector<ExperimentRecord> run_cond_sweep(const ExperimentConfig& config);

struct DemoResult {
  bool recovered = false;
  double err = 0.0;
  std::vector<QamMessage> sent;
  std::vector<QamMessage> decoded;
};

/// End-to-end chain: QAM messages -> OFDM -> encode -> channels -> time
/// domain frame -> Fourier observation -> solver -> aligned demodulation.
DemoResult run_demo(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Condensed invariant/oracle suite; prints one line per check.
bool selftest(std::ostream& log);

/// Success probability of one experiment record.
double success_rate(const ExperimentRecord& record);
double mean_err(const ExperimentRecord& record);

/// Trial-level parallelism capped by the BLINDMIX_THREADS environment
/// variable (default: hardware concurrency).
int thread_cap();
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace blindmix
