#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dbq/nonlinear_solver.hpp"

namespace dbq::runner {

enum class ExperimentKind {
  LinearRates,
  NonlinearRates,
  ProfileGap,
  NlVsLinearGap,
  LemmaCertify,
  OracleCrosscheck,
};

std::string_view to_string(ExperimentKind k);
/// Throws std::invalid_argument for unknown names.
ExperimentKind parse_experiment(std::string_view name);
const std::vector<ExperimentKind>& all_experiments();

struct ModelConfig {
  double alpha = -1.0;
  double beta = 1.0;
  Power f_kind = Power::Quadratic;
  Power g_kind = Power::Quadratic;
  SourceConvention convention = SourceConvention::Duhamel;
};

struct DiscretizationConfig {
  int n = 1;
  /// 0 picks the smallest box allowed by the wave-escape rule.
  double L = 0.0;
  int N = 256;
  double dt = 0.05;
  double T = 200.0;
  double output_every = 1.0;
};

enum class DataKind { Gaussian, RadialL2, CustomFile };

struct DataConfig {
  DataKind kind = DataKind::Gaussian;
  double amplitude = 1.0;
  double width = 1.0;
  /// Exponent gap of the L2-type profile r^{-(n - eps)/2}.
  double eps = 0.2;
  /// Whitespace-separated samples of u0 (and optionally u1) for custom-file.
  std::string u0_file;
  std::string u1_file;
};

enum class EvalMode { Radial, Box };

struct AnalysisConfig {
  std::vector<int> k_list{0, 1, 2};
  double fit_lo = 100.0;
  double fit_hi = 1e4;
  int samples = 41;
  EvalMode mode = EvalMode::Radial;
  double slope_tol = 0.05;
  double c_floor = 0.1;
  double cap = 1e3;
  double r0 = 0.5;
  double reference_tol = 1e-10;
  double agreement_tol = 1e-6;
  double gap_slope_max = 0.05;
};

struct ExperimentConfig {
  std::vector<ExperimentKind> experiments{ExperimentKind::LinearRates};
  ModelConfig model;
  DiscretizationConfig discretization;
  DataConfig data;
  AnalysisConfig analysis;
  std::uint64_t seed = 0;

  ModelParams params() const { return {model.alpha, model.beta}; }
  NonlinearitySpec nonlinearity() const {
    return {model.f_kind, model.g_kind, model.beta, model.convention};
  }
};

/// Invalid configuration. `field` is the dotted key path; `line` is 1-based
/// or 0 when the error is not tied to a position in the text.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, int line, const std::string& message);
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

/// Parses the JSON config text. Unknown keys, wrong types and out-of-range
/// values raise ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

/// Box side actually used for box-mode runs (resolves L = 0).
double resolved_box_length(const ExperimentConfig& config);

}  // namespace dbq::runner
