#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dbq/initial_data.hpp"

namespace dbq::runner {

using nlohmann::json;

namespace {

constexpr const char* kExperimentNames[] = {"linear_rates",     "nonlinear_rates", "profile_gap",
                                            "nl_vs_linear_gap", "lemma_certify",   "oracle_crosscheck"};

// 1-based line of the first occurrence of "key" in the text, 0 if absent.
int line_of(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const std::size_t pos = text.find(quoted);
  if (pos == std::string_view::npos) return 0;
  int line = 1;
  for (std::size_t i = 0; i < pos; ++i) line += text[i] == '\n';
  return line;
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    const std::size_t dot = field.rfind('.');
    const std::string leaf = dot == std::string::npos ? field : field.substr(dot + 1);
    throw ConfigError(field, line_of(text_, leaf), msg);
  }

  void reject_unknown(const json& obj, const std::string& path, std::set<std::string> known) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
      if (!known.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
    }
  }

  double number(const json& obj, const std::string& path, const char* key, double fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path + "." + key, "must be finite");
    return x;
  }

  int integer(const json& obj, const std::string& path, const char* key, int fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
  }

  std::string string(const json& obj, const std::string& path, const char* key, std::string fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
  }

  template <class Parse>
  auto choice(const json& obj, const std::string& path, const char* key, decltype(std::declval<Parse>()("")) fallback,
              Parse parse) const {
    if (!obj.contains(key)) return fallback;
    const std::string s = string(obj, path, key, "");
    try {
      return parse(s);
    } catch (const std::invalid_argument&) {
      fail(path + "." + key, "unknown value \"" + s + "\"");
    }
  }

 private:
  std::string_view text_;
};

DataKind parse_data_kind(std::string_view s) {
  if (s == "gaussian") return DataKind::Gaussian;
  if (s == "radial_L2") return DataKind::RadialL2;
  if (s == "custom-file") return DataKind::CustomFile;
  throw std::invalid_argument("unknown data kind");
}

std::string_view to_string(DataKind k) {
  switch (k) {
    case DataKind::Gaussian: return "gaussian";
    case DataKind::RadialL2: return "radial_L2";
    case DataKind::CustomFile: return "custom-file";
  }
  return "gaussian";
}

EvalMode parse_mode(std::string_view s) {
  if (s == "radial") return EvalMode::Radial;
  if (s == "box") return EvalMode::Box;
  throw std::invalid_argument("unknown mode");
}

std::string_view to_string(EvalMode m) { return m == EvalMode::Radial ? "radial" : "box"; }

bool needs_box(ExperimentKind k) {
  return k == ExperimentKind::NonlinearRates || k == ExperimentKind::NlVsLinearGap ||
         k == ExperimentKind::OracleCrosscheck;
}

bool is_multiple(double span, double unit) {
  const double q = span / unit;
  return q >= 1.0 - 1e-9 && std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, q);
}

void validate(const ExperimentConfig& c, const Reader& r) {
  if (!(c.model.alpha <= -1.0)) r.fail("model.alpha", "must be <= -1");
  if (!(c.model.beta > 0.0)) r.fail("model.beta", "must be positive");

  const DiscretizationConfig& d = c.discretization;
  if (d.n < 1 || d.n > 3) r.fail("discretization.n", "must be 1, 2 or 3");
  if (d.N < 8 || d.N % 2 != 0) r.fail("discretization.N", "must be even and at least 8");
  if (d.L < 0.0) r.fail("discretization.L", "must be positive (or 0 for the automatic size)");
  if (!(d.dt > 0.0)) r.fail("discretization.dt", "must be positive");
  if (!(d.T > 0.0)) r.fail("discretization.T", "must be positive");
  if (!(d.output_every > 0.0) || !is_multiple(d.output_every, d.dt)) {
    r.fail("discretization.output_every", "must be a positive whole multiple of dt");
  }
  if (!is_multiple(d.T, d.output_every)) r.fail("discretization.T", "must be a whole multiple of output_every");

  if (!(c.data.amplitude >= 0.0)) r.fail("data.amplitude", "must be nonnegative");
  if (!(c.data.width > 0.0)) r.fail("data.width", "must be positive");
  if (!(c.data.eps > 0.0 && c.data.eps < 1.0)) r.fail("data.eps", "must lie in (0, 1)");
  if (c.data.kind == DataKind::CustomFile && c.data.u0_file.empty()) {
    r.fail("data.u0_file", "required for custom-file data");
  }
  if (c.data.kind == DataKind::CustomFile && d.L == 0.0) {
    r.fail("discretization.L", "custom-file data need an explicit box side");
  }

  const AnalysisConfig& a = c.analysis;
  if (a.k_list.empty()) r.fail("analysis.k_list", "must not be empty");
  for (int k : a.k_list) {
    if (k < 0 || k > 4) r.fail("analysis.k_list", "entries must lie in [0, 4]");
  }
  if (!(a.fit_lo >= 0.0 && a.fit_hi > a.fit_lo)) r.fail("analysis.fit_window", "needs 0 <= lo < hi");
  if (a.samples < 6) r.fail("analysis.samples", "need at least 6 samples for a rate fit");
  if (!(a.slope_tol > 0.0)) r.fail("analysis.slope_tol", "must be positive");
  if (!(a.cap > 0.0)) r.fail("analysis.cap", "must be positive");
  if (!(a.r0 > 0.0)) r.fail("analysis.r0", "must be positive");
  if (!(a.reference_tol > 0.0)) r.fail("analysis.reference_tol", "must be positive");
  if (!(a.agreement_tol > 0.0)) r.fail("analysis.agreement_tol", "must be positive");

  if (c.experiments.empty()) r.fail("experiment", "must name at least one experiment");
  bool box = a.mode == EvalMode::Box;
  for (ExperimentKind k : c.experiments) box = box || needs_box(k);
  if (c.data.kind == DataKind::CustomFile && a.mode == EvalMode::Radial) {
    for (ExperimentKind k : c.experiments) {
      if (!needs_box(k) && k != ExperimentKind::LemmaCertify) {
        r.fail("analysis.mode", "custom-file data need box mode");
      }
    }
  }
  if (box && c.data.kind == DataKind::RadialL2) {
    r.fail("data.kind", "radial_L2 data only exist in radial mode");
  }
  // The wave-escape rule matters only where decay rates are measured in the box.
  bool rate_box = false;
  for (ExperimentKind k : c.experiments) {
    rate_box = rate_box || k == ExperimentKind::NonlinearRates || k == ExperimentKind::NlVsLinearGap ||
               (a.mode == EvalMode::Box && (k == ExperimentKind::LinearRates || k == ExperimentKind::ProfileGap));
  }
  if (rate_box && d.L > 0.0 && c.data.kind == DataKind::Gaussian) {
    const double need = min_box_length(gaussian_support_radius(c.data.width), d.T);
    if (d.L < need) {
      std::ostringstream msg;
      msg << "box side " << d.L << " is below the wave-escape minimum " << need << " for T = " << d.T;
      r.fail("discretization.L", msg.str());
    }
  }
}

}  // namespace

std::string_view to_string(ExperimentKind k) { return kExperimentNames[static_cast<int>(k)]; }

ExperimentKind parse_experiment(std::string_view name) {
  for (int i = 0; i < 6; ++i) {
    if (name == kExperimentNames[i]) return static_cast<ExperimentKind>(i);
  }
  throw std::invalid_argument("unknown experiment: " + std::string(name));
}

const std::vector<ExperimentKind>& all_experiments() {
  static const std::vector<ExperimentKind> all = {
      ExperimentKind::LinearRates,   ExperimentKind::NonlinearRates, ExperimentKind::ProfileGap,
      ExperimentKind::NlVsLinearGap, ExperimentKind::LemmaCertify,   ExperimentKind::OracleCrosscheck};
  return all;
}

ConfigError::ConfigError(std::string field, int line, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? std::string() : field + ": ") + message),
      field_(std::move(field)),
      line_(line) {}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) line += text[i] == '\n';
    throw ConfigError("", line, std::string("malformed JSON: ") + e.what());
  }
  const Reader r(text);
  r.reject_unknown(root, "", {"experiment", "model", "discretization", "data", "analysis", "seed"});

  ExperimentConfig c;
  if (root.contains("experiment")) {
    const json& e = root.at("experiment");
    std::vector<std::string> names;
    if (e.is_string()) {
      names.push_back(e.get<std::string>());
    } else if (e.is_array() && std::all_of(e.begin(), e.end(), [](const json& x) { return x.is_string(); })) {
      for (const json& x : e) names.push_back(x.get<std::string>());
    } else {
      r.fail("experiment", "expected a name or a list of names");
    }
    c.experiments.clear();
    for (const std::string& name : names) {
      try {
        c.experiments.push_back(parse_experiment(name));
      } catch (const std::invalid_argument&) {
        r.fail("experiment", "unknown experiment \"" + name + "\"");
      }
    }
  }

  if (root.contains("model")) {
    const json& m = root.at("model");
    r.reject_unknown(m, "model", {"alpha", "beta", "f_kind", "g_kind", "convention"});
    c.model.alpha = r.number(m, "model", "alpha", c.model.alpha);
    c.model.beta = r.number(m, "model", "beta", c.model.beta);
    c.model.f_kind = r.choice(m, "model", "f_kind", c.model.f_kind, parse_power);
    c.model.g_kind = r.choice(m, "model", "g_kind", c.model.g_kind, parse_power);
    c.model.convention = r.choice(m, "model", "convention", c.model.convention, parse_convention);
  }

  if (root.contains("discretization")) {
    const json& d = root.at("discretization");
    r.reject_unknown(d, "discretization", {"n", "L", "N", "dt", "T", "output_every"});
    auto& o = c.discretization;
    o.n = r.integer(d, "discretization", "n", o.n);
    o.L = r.number(d, "discretization", "L", o.L);
    o.N = r.integer(d, "discretization", "N", o.N);
    o.dt = r.number(d, "discretization", "dt", o.dt);
    o.T = r.number(d, "discretization", "T", o.T);
    o.output_every = r.number(d, "discretization", "output_every", o.output_every);
  }

  if (root.contains("data")) {
    const json& d = root.at("data");
    r.reject_unknown(d, "data", {"kind", "amplitude", "width", "eps", "u0_file", "u1_file"});
    auto& o = c.data;
    o.kind = r.choice(d, "data", "kind", o.kind, parse_data_kind);
    o.amplitude = r.number(d, "data", "amplitude", o.amplitude);
    o.width = r.number(d, "data", "width", o.width);
    o.eps = r.number(d, "data", "eps", o.eps);
    o.u0_file = r.string(d, "data", "u0_file", o.u0_file);
    o.u1_file = r.string(d, "data", "u1_file", o.u1_file);
  }

  if (root.contains("analysis")) {
    const json& a = root.at("analysis");
    r.reject_unknown(a, "analysis", {"k_list", "fit_window", "samples", "mode", "slope_tol", "c_floor", "cap",
                                     "r0", "reference_tol", "agreement_tol", "gap_slope_max"});
    auto& o = c.analysis;
    if (a.contains("k_list")) {
      const json& k = a.at("k_list");
      if (!k.is_array() || !std::all_of(k.begin(), k.end(), [](const json& x) { return x.is_number_integer(); })) {
        r.fail("analysis.k_list", "expected a list of integers");
      }
      o.k_list = k.get<std::vector<int>>();
    }
    if (a.contains("fit_window")) {
      const json& w = a.at("fit_window");
      if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
        r.fail("analysis.fit_window", "expected [lo, hi]");
      }
      o.fit_lo = w[0].get<double>();
      o.fit_hi = w[1].get<double>();
    }
    o.samples = r.integer(a, "analysis", "samples", o.samples);
    o.mode = r.choice(a, "analysis", "mode", o.mode, parse_mode);
    o.slope_tol = r.number(a, "analysis", "slope_tol", o.slope_tol);
    o.c_floor = r.number(a, "analysis", "c_floor", o.c_floor);
    o.cap = r.number(a, "analysis", "cap", o.cap);
    o.r0 = r.number(a, "analysis", "r0", o.r0);
    o.reference_tol = r.number(a, "analysis", "reference_tol", o.reference_tol);
    o.agreement_tol = r.number(a, "analysis", "agreement_tol", o.agreement_tol);
    o.gap_slope_max = r.number(a, "analysis", "gap_slope_max", o.gap_slope_max);
  }

  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      r.fail("seed", "expected a nonnegative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }

  validate(c, r);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  json names = json::array();
  for (ExperimentKind k : c.experiments) names.push_back(std::string(to_string(k)));
  j["experiment"] = names.size() == 1 ? names[0] : names;
  j["model"] = {{"alpha", c.model.alpha},
                {"beta", c.model.beta},
                {"f_kind", std::string(to_string(c.model.f_kind))},
                {"g_kind", std::string(to_string(c.model.g_kind))},
                {"convention", std::string(to_string(c.model.convention))}};
  const auto& d = c.discretization;
  j["discretization"] = {{"n", d.n}, {"L", d.L}, {"N", d.N}, {"dt", d.dt}, {"T", d.T}, {"output_every", d.output_every}};
  j["data"] = {{"kind", std::string(to_string(c.data.kind))},
               {"amplitude", c.data.amplitude},
               {"width", c.data.width},
               {"eps", c.data.eps}};
  if (!c.data.u0_file.empty()) j["data"]["u0_file"] = c.data.u0_file;
  if (!c.data.u1_file.empty()) j["data"]["u1_file"] = c.data.u1_file;
  const auto& a = c.analysis;
  j["analysis"] = {{"k_list", a.k_list},
                   {"fit_window", {a.fit_lo, a.fit_hi}},
                   {"samples", a.samples},
                   {"mode", std::string(to_string(a.mode))},
                   {"slope_tol", a.slope_tol},
                   {"c_floor", a.c_floor},
                   {"cap", a.cap},
                   {"r0", a.r0},
                   {"reference_tol", a.reference_tol},
                   {"agreement_tol", a.agreement_tol},
                   {"gap_slope_max", a.gap_slope_max}};
  j["seed"] = c.seed;
  return j.dump(2) + "\n";
}

double resolved_box_length(const ExperimentConfig& c) {
  if (c.discretization.L > 0.0) return c.discretization.L;
  const double need = min_box_length(gaussian_support_radius(c.data.width), c.discretization.T);
  return std::ceil(need);
}

}  // namespace dbq::runner
