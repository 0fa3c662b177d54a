// dbq: runs decay-rate experiments from a JSON config and writes
// report.json, CSV tables and SVG plots.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "runner/config.hpp"
#include "runner/experiments.hpp"
#include "runner/output.hpp"

namespace fs = std::filesystem;
using namespace dbq::runner;

namespace {

fs::path default_output_dir() {
  if (const char* env = std::getenv("DBQ_OUTPUT_DIR"); env && *env) return env;
  return "dbq_out";
}

int cmd_run(const std::string& config_path, const std::string& out_dir, int threads) {
  ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 2;
  }
  RunReport report;
  try {
    report = run_all(config, threads);
  } catch (const ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 2;
  }
  const fs::path dir = out_dir.empty() ? default_output_dir() : fs::path(out_dir);
  write_outputs(report, dir);

  for (const ExperimentResult& r : report.results) {
    std::printf("%s: %s (%.2f s)\n", std::string(to_string(r.kind)).c_str(),
                r.status == "ok" ? (r.passed() ? "pass" : "FAIL") : r.status.c_str(), r.seconds);
    if (!r.error.empty()) std::printf("  %s\n", r.error.c_str());
    for (const Verdict& v : r.verdicts) {
      std::printf("  [%s] %s %s: %s\n", v.passed ? "pass" : "FAIL", v.criterion.c_str(), v.name.c_str(),
                  v.detail.c_str());
    }
  }
  std::printf("results written to %s\n", dir.string().c_str());
  const int code = exit_code(report);
  if (code == 3) {
    for (const ExperimentResult& r : report.results) {
      if (r.status == "blow_up") {
        std::fprintf(stderr, "%s: %s at t = %g\n", std::string(to_string(r.kind)).c_str(), r.error.c_str(),
                     r.blow_up_time);
      }
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decay-rate experiments for a damped Boussinesq-type equation"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 1;
  CLI::App* run = app.add_subcommand("run", "Run the experiments named in a config file");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--out", out_dir, "Output directory (default: $DBQ_OUTPUT_DIR or ./dbq_out)");
  run->add_option("--threads", threads, "Experiments run concurrently")->check(CLI::PositiveNumber);

  app.add_subcommand("list", "List experiment ids");

  std::string csv_path;
  CLI::App* rp = app.add_subcommand("replot", "Regenerate SVG plots from a series.csv");
  rp->add_option("series_csv", csv_path, "series.csv written by run")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, threads);
    if (rp->parsed()) {
      for (const fs::path& p : replot(csv_path)) std::printf("%s\n", p.string().c_str());
      return 0;
    }
    std::fputs(list_experiments().c_str(), stdout);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "dbq: " << e.what() << "\n";
    return 1;
  }
}
