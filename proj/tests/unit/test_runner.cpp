#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dbq/initial_data.hpp"
#include "runner/config.hpp"
#include "runner/experiments.hpp"
#include "runner/output.hpp"

using namespace dbq;
using namespace dbq::runner;
using nlohmann::json;

namespace {

ExperimentConfig radial_linear() {
  return parse_config(R"({
    "experiment": "linear_rates",
    "model": {"alpha": -1.0, "f_kind": "none", "g_kind": "none"},
    "discretization": {"n": 1},
    "data": {"kind": "gaussian", "amplitude": 1.0, "width": 1.0},
    "analysis": {"k_list": [0, 1, 2], "fit_window": [100, 10000], "samples": 21, "mode": "radial"}
  })");
}

}  // namespace

TEST_CASE("config round-trips through serialize_config") {
  const ExperimentConfig a = radial_linear();
  const ExperimentConfig b = parse_config(serialize_config(a));
  CHECK(serialize_config(a) == serialize_config(b));
  REQUIRE(b.experiments.size() == 1);
  CHECK(b.experiments[0] == ExperimentKind::LinearRates);
  CHECK(b.analysis.samples == 21);
  CHECK(b.model.f_kind == Power::None);
}

TEST_CASE("unknown keys report field and line") {
  try {
    parse_config("{\n  \"experiment\": \"linear_rates\",\n  \"model\": {\n    \"alpah\": -2\n  }\n}");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "model.alpah");
    CHECK(e.line() == 4);
  }
}

TEST_CASE("out-of-range and malformed configs are rejected") {
  CHECK_THROWS_AS(parse_config(R"({"model": {"alpha": -0.5}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "nope"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"data": {"amplitude": -1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"alpha": "x"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"model\": "), ConfigError);
  CHECK_NOTHROW(parse_config(R"({"data": {"amplitude": 0}})"));
}

TEST_CASE("shipped configs parse") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(DBQ_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path().string()));
    ++count;
  }
  CHECK(count >= 1);
}

TEST_CASE("auto box length covers the wave front") {
  ExperimentConfig c = radial_linear();
  c.discretization.T = 50.0;
  c.data.width = 2.0;
  const double L = resolved_box_length(c);
  CHECK(L >= 2.0 * (gaussian_support_radius(2.0) + 1.2 * 50.0));
  c.discretization.L = 40.0;
  CHECK(resolved_box_length(c) == 40.0);
}

TEST_CASE("list names every experiment") {
  const std::string text = list_experiments();
  for (ExperimentKind k : all_experiments()) CHECK(text.find(std::string(to_string(k))) != std::string::npos);
  CHECK(text.find("oracle_crosscheck → solver consistency") != std::string::npos);
}

TEST_CASE("radial linear rates match the predicted slopes") {
  const ExperimentResult r = run_experiment(radial_linear(), ExperimentKind::LinearRates);
  CHECK(r.status == "ok");
  REQUIRE(r.series.size() == 3);
  const double theory[] = {-0.25, -0.75, -1.25};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.series[i].has_theory);
    CHECK(r.series[i].theory_slope == doctest::Approx(theory[i]));
    CHECK(r.series[i].verdict == "pass");
  }
  CHECK(r.passed());
}

TEST_CASE("zero data yields skipped series") {
  ExperimentConfig c = radial_linear();
  c.data.amplitude = 0.0;
  const ExperimentResult r = run_experiment(c, ExperimentKind::LinearRates);
  REQUIRE(!r.series.empty());
  for (const SeriesRecord& s : r.series) {
    CHECK(s.verdict == "skipped");
    CHECK(s.reason == "zero series");
  }
}

TEST_CASE("csv output has fixed headers and is deterministic") {
  const ExperimentConfig c = radial_linear();
  const ExperimentResult a = run_experiment(c, ExperimentKind::LinearRates);
  const ExperimentResult b = run_experiment(c, ExperimentKind::LinearRates);
  const std::string sa = series_csv(a);
  CHECK(sa.rfind("experiment_id,t,k,norm_kind,value\n", 0) == 0);
  CHECK(sa == series_csv(b));
  const std::string ra = rates_csv(a);
  CHECK(ra.rfind("k,slope,stderr,theory_slope,verdict\n", 0) == 0);
  CHECK(ra == rates_csv(b));
  // Header plus one row per series.
  std::size_t lines = 0;
  for (char ch : ra) lines += ch == '\n';
  CHECK(lines == a.series.size() + 1);
}

TEST_CASE("report json carries config, verdicts and exit status") {
  RunReport report = run_all(radial_linear(), 1);
  const json j = json::parse(report_json(report));
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("config").at("analysis").at("samples") == 21);
  REQUIRE(j.at("experiments").size() == 1);
  const json& e = j.at("experiments")[0];
  CHECK(e.at("id") == "linear_rates");
  CHECK(e.at("series").size() == 3);
  CHECK(e.at("verdicts").size() >= 1);
  CHECK(j.at("passed") == true);
  CHECK(exit_code(report) == 0);

  report.results[0].verdicts[0].passed = false;
  CHECK(exit_code(report) == 1);
  report.results[0].status = "blow_up";
  CHECK(exit_code(report) == 3);
}

TEST_CASE("lemma_certify certifies both energy bounds") {
  ExperimentConfig c = radial_linear();
  c.experiments = {ExperimentKind::LemmaCertify};
  const ExperimentResult r = run_experiment(c, ExperimentKind::LemmaCertify);
  CHECK(r.status == "ok");
  int energy = 0;
  for (const BoundCertificate& cert : r.certificates) {
    if (cert.kind == BoundKind::GEnergy || cert.kind == BoundKind::HEnergy) {
      ++energy;
      CHECK(cert.passed);
      CHECK(cert.fitted_c >= 0.1);
    }
  }
  CHECK(energy == 2);
  CHECK(r.passed());
}
