#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dbq::runner {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string g17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

PlotSeries plot_series(const std::string& id, const SeriesRecord& r) {
  PlotSeries p;
  p.experiment_id = id;
  p.k = r.series.k;
  p.norm_kind = r.series.norm_kind;
  p.t = r.series.times;
  p.value = r.series.values;
  p.has_theory = r.has_theory;
  p.theory_slope = r.theory_slope;
  return p;
}

}  // namespace

std::string report_json(const RunReport& report) {
  json j;
  j["schema_version"] = 1;
  j["config"] = json::parse(serialize_config(report.config));
  j["experiments"] = json::array();
  for (const ExperimentResult& r : report.results) {
    json e;
    e["id"] = std::string(to_string(r.kind));
    e["status"] = r.status;
    if (!r.error.empty()) e["error"] = r.error;
    if (r.status == "blow_up") e["blow_up_time"] = r.blow_up_time;
    e["seconds"] = r.seconds;
    e["passed"] = r.passed();
    e["series"] = json::array();
    for (const SeriesRecord& s : r.series) {
      json row = {{"k", s.series.k},
                  {"norm_kind", s.series.norm_kind},
                  {"source", std::string(to_string(s.series.source))},
                  {"points", s.series.times.size()},
                  {"verdict", s.verdict},
                  {"theory_slope", s.has_theory ? json(s.theory_slope) : json(nullptr)}};
      if (s.fitted) {
        row["fit"] = {{"slope", s.fit.slope},         {"intercept", s.fit.intercept},
                      {"stderr", number_or_null(s.fit.stderr_slope)}, {"t_lo", s.fit.t_lo},
                      {"t_hi", s.fit.t_hi},           {"points", s.fit.points}};
      } else {
        row["fit"] = nullptr;
      }
      if (!s.reason.empty()) row["reason"] = s.reason;
      e["series"].push_back(row);
    }
    e["certificates"] = json::array();
    for (const BoundCertificate& c : r.certificates) {
      e["certificates"].push_back({{"kind", std::string(to_string(c.kind))},
                                   {"C", c.sup_ratio},
                                   {"c", c.fitted_c},
                                   {"grid", c.grid_spec},
                                   {"passed", c.passed}});
    }
    e["metrics"] = json::object();
    for (const auto& [name, value] : r.metrics) e["metrics"][name] = number_or_null(value);
    e["verdicts"] = json::array();
    for (const Verdict& v : r.verdicts) {
      e["verdicts"].push_back(
          {{"criterion", v.criterion}, {"name", v.name}, {"passed", v.passed}, {"detail", v.detail}});
    }
    j["experiments"].push_back(e);
  }
  j["passed"] = report.passed();
  j["wall_clock_seconds"] = report.seconds;
  return j.dump(2) + "\n";
}

std::string series_csv(const ExperimentResult& result) {
  const std::string id(to_string(result.kind));
  std::string out = "experiment_id,t,k,norm_kind,value\n";
  for (const SeriesRecord& r : result.series) {
    for (std::size_t i = 0; i < r.series.times.size(); ++i) {
      out += id + "," + g17(r.series.times[i]) + "," + std::to_string(r.series.k) + "," + r.series.norm_kind + "," +
             g17(r.series.values[i]) + "\n";
    }
  }
  return out;
}

std::string rates_csv(const ExperimentResult& result) {
  std::string out = "k,slope,stderr,theory_slope,verdict\n";
  const double nan = std::nan("");
  for (const SeriesRecord& r : result.series) {
    out += std::to_string(r.series.k) + "," + g17(r.fitted ? r.fit.slope : nan) + "," +
           g17(r.fitted ? r.fit.stderr_slope : nan) + "," + g17(r.has_theory ? r.theory_slope : nan) + "," +
           r.verdict + "\n";
  }
  return out;
}

void write_outputs(const RunReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  const bool nested = report.results.size() > 1;
  for (const ExperimentResult& r : report.results) {
    const std::string id(to_string(r.kind));
    const fs::path sub = nested ? dir / id : dir;
    fs::create_directories(sub);
    write_file(sub / "series.csv", series_csv(r));
    write_file(sub / "rates.csv", rates_csv(r));
    for (const SeriesRecord& s : r.series) {
      const PlotSeries p = plot_series(id, s);
      write_file(sub / svg_file_name(p), svg_plot(p));
    }
  }
  write_file(dir / "report.json", report_json(report));
}

std::string svg_file_name(const PlotSeries& s) {
  return s.experiment_id + "_" + s.norm_kind + "_k" + std::to_string(s.k) + ".svg";
}

std::string svg_plot(const PlotSeries& s) {
  constexpr double W = 640, H = 420, left = 70, right = 20, top = 40, bottom = 50;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << s.experiment_id << ": "
    << s.norm_kind << ", k = " << s.k << "</text>\n";

  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    if (s.t[i] > 0.0 && s.value[i] > 0.0) pts.emplace_back(std::log10(s.t[i]), std::log10(s.value[i]));
  }
  if (pts.size() < 2) {
    o << "<text x=\"" << W / 2 << "\" y=\"" << H / 2 << "\" text-anchor=\"middle\">no positive values to plot</text>\n";
    o << "</svg>\n";
    return o.str();
  }

  double x0 = pts.front().first, x1 = pts.front().first, y0 = pts.front().second, y1 = pts.front().second;
  for (const auto& [x, y] : pts) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  // Guide line through the middle sample, slope in log(1+t).
  std::vector<std::pair<double, double>> guide;
  if (s.has_theory && std::isfinite(s.theory_slope)) {
    const auto& mid = pts[pts.size() / 2];
    const double tm = std::pow(10.0, mid.first);
    for (int i = 0; i <= 40; ++i) {
      const double x = x0 + (x1 - x0) * i / 40.0;
      const double t = std::pow(10.0, x);
      const double y = mid.second + s.theory_slope * (std::log10(1 + t) - std::log10(1 + tm));
      guide.emplace_back(x, y);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 - x0 < 1e-12) x1 = x0 + 1;
  if (y1 - y0 < 1e-12) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  auto py = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };

  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right << "\" height=\""
    << H - top - bottom << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int d = static_cast<int>(std::ceil(x0)); d <= static_cast<int>(std::floor(x1)); ++d) {
    o << "<line x1=\"" << px(d) << "\" x2=\"" << px(d) << "\" y1=\"" << top << "\" y2=\"" << H - bottom
      << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << px(d) << "\" y=\"" << H - bottom + 16 << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(y0)); d <= static_cast<int>(std::floor(y1)); ++d) {
    o << "<line x1=\"" << left << "\" x2=\"" << W - right << "\" y1=\"" << py(d) << "\" y2=\"" << py(d)
      << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << left - 6 << "\" y=\"" << py(d) + 4 << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  o << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">t</text>\n";

  auto polyline = [&](const std::vector<std::pair<double, double>>& v, const char* style) {
    o << "<polyline fill=\"none\" " << style << " points=\"";
    for (const auto& [x, y] : v) o << px(x) << "," << py(y) << " ";
    o << "\"/>\n";
  };
  polyline(pts, "stroke=\"#1f77b4\" stroke-width=\"1.5\"");
  if (!guide.empty()) {
    polyline(guide, "stroke=\"#d62728\" stroke-width=\"1\" stroke-dasharray=\"6 4\"");
    o << "<text x=\"" << W - right - 6 << "\" y=\"" << top + 16 << "\" text-anchor=\"end\" fill=\"#d62728\">"
      << "theory slope " << s.theory_slope << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<PlotSeries> read_series_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "experiment_id,t,k,norm_kind,value") {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
  std::vector<PlotSeries> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 5) throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 5 columns");
    try {
      const int k = std::stoi(f[2]);
      PlotSeries* s = nullptr;
      for (PlotSeries& p : out) {
        if (p.experiment_id == f[0] && p.k == k && p.norm_kind == f[3]) s = &p;
      }
      if (!s) {
        out.push_back({f[0], k, f[3], {}, {}, false, 0.0});
        s = &out.back();
      }
      s->t.push_back(std::stod(f[1]));
      s->value.push_back(std::stod(f[4]));
    } catch (const std::logic_error&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return out;
}

std::vector<fs::path> replot(const fs::path& series_csv_path) {
  std::vector<PlotSeries> series = read_series_csv(series_csv_path);
  const fs::path dir = series_csv_path.parent_path();
  const fs::path rates = dir / "rates.csv";
  std::ifstream in(rates);
  if (in) {
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
      if (!line.empty()) rows.push_back(split(line, ','));
    }
    if (rows.size() == series.size()) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != 5 || rows[i][3] == "nan") continue;
        series[i].has_theory = true;
        series[i].theory_slope = std::stod(rows[i][3]);
      }
    }
  }
  std::vector<fs::path> written;
  for (const PlotSeries& s : series) {
    const fs::path p = dir / svg_file_name(s);
    write_file(p, svg_plot(s));
    written.push_back(p);
  }
  return written;
}

}  // namespace dbq::runner
