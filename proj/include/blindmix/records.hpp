#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blindmix/solvers.hpp"

namespace blindmix {

enum class RecordFormat { Csv, Json };

RecordFormat record_format_from_string(const std::string& name);
std::string to_string(RecordFormat fmt);

/// Echoed experiment configuration, one per record.
struct RecordConfig {
  std::string experiment;
  std::string encoder;
  std::string solver;
  int N = 0, K = 0, L = 0, s = 0;
  double sigma = 0.0;
  double kappa = 1.0;

  bool operator==(const RecordConfig&) const = default;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  int trial = 0;
  bool success = false;
  double err = 0.0;
  int iterations = 0;
  double time_ms = 0.0;
  IterateTrace trace;  // optional; empty when traces are not kept

  bool operator==(const TrialRecord& o) const;
};

struct ExperimentRecord {
  RecordConfig config;
  std::vector<TrialRecord> trials;

  bool operator==(const ExperimentRecord&) const = default;
};

/// Success rule shared by all experiments: err(X) <= 1e-3.
inline constexpr double kSuccessThreshold = 1e-3;
inline bool is_success(double err) { return err <= kSuccessThreshold; }

/// Writes trace rows to `path` and per-trial summaries to a sibling file
/// with ".summary" inserted before the extension. Output is deterministic
/// given the records; doubles are printed with 17 significant digits so
/// parsing them back is exact.
void write_records(const std::vector<ExperimentRecord>& records, const std::string& path,
                   RecordFormat format);

std::vector<ExperimentRecord> read_records(const std::string& path, RecordFormat format);

std::string summary_path(const std::string& path);

}  // namespace blindmix
