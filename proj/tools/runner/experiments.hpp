#pragma once

#include <map>
#include <string>
#include <vector>

#include "config.hpp"
#include "dbq/analysis.hpp"

namespace dbq::runner {

/// One stored norm series and the fit row that goes with it. Every series
/// has exactly one fit row, in the same order, so plots can be rebuilt from
/// series.csv and rates.csv alone.
struct SeriesRecord {
  DecaySeries series;
  bool fitted = false;
  RateFit fit;
  double theory_slope = 0.0;
  bool has_theory = false;
  /// "pass", "fail" or "skipped".
  std::string verdict = "skipped";
  std::string reason;
};

struct Verdict {
  /// Acceptance criterion identifier, e.g. "AC4".
  std::string criterion;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::LinearRates;
  std::vector<SeriesRecord> series;
  std::vector<BoundCertificate> certificates;
  std::map<std::string, double> metrics;
  std::vector<Verdict> verdicts;
  double seconds = 0.0;
  /// "ok", "blow_up" or "error".
  std::string status = "ok";
  std::string error;
  double blow_up_time = 0.0;

  bool passed() const;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<ExperimentResult> results;
  double seconds = 0.0;

  bool passed() const;
  bool blew_up() const;
};

ExperimentResult run_experiment(const ExperimentConfig& config, ExperimentKind kind);

/// Runs every configured experiment, up to `threads` at a time.
RunReport run_all(const ExperimentConfig& config, int threads = 1);

/// Text table of experiment ids and what each one checks.
std::string list_experiments();

/// Process exit status: 0 all verdicts pass, 1 some verdict failed,
/// 3 a run left the small-data regime.
int exit_code(const RunReport& report);

}  // namespace dbq::runner
