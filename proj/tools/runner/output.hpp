#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "experiments.hpp"

namespace dbq::runner {

/// report.json contents (config echo, fits, certificates, verdicts, timings).
std::string report_json(const RunReport& report);

/// series.csv: experiment_id,t,k,norm_kind,value with values in %.17g.
std::string series_csv(const ExperimentResult& result);
/// rates.csv: k,slope,stderr,theory_slope,verdict, one row per series.
std::string rates_csv(const ExperimentResult& result);

/// Writes report.json at the root of `dir`. Each experiment's CSV files and
/// plots go to `dir` itself for a single experiment, else to dir/<id>/.
void write_outputs(const RunReport& report, const std::filesystem::path& dir);

/// One plotted series read back from series.csv.
struct PlotSeries {
  std::string experiment_id;
  int k = 0;
  std::string norm_kind;
  std::vector<double> t;
  std::vector<double> value;
  bool has_theory = false;
  double theory_slope = 0.0;
};

/// Log-log SVG of value against t (t > 0 only) with the theory slope drawn
/// as a dashed guide line through the middle sample.
std::string svg_plot(const PlotSeries& s);
std::string svg_file_name(const PlotSeries& s);

/// Parses series.csv; throws std::runtime_error on a malformed file.
std::vector<PlotSeries> read_series_csv(const std::filesystem::path& path);

/// Regenerates the SVGs next to `series_csv`, taking guide slopes from a
/// rates.csv in the same directory when its row count matches. Returns the
/// written paths.
std::vector<std::filesystem::path> replot(const std::filesystem::path& series_csv);

}  // namespace dbq::runner
