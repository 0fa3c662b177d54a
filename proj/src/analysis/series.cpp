#include <cmath>
#include <stdexcept>

#include "dbq/analysis.hpp"

namespace dbq {

std::string_view to_string(SeriesSource s) {
  switch (s) {
    case SeriesSource::Linear: return "linear";
    case SeriesSource::Nonlinear: return "nonlinear";
    case SeriesSource::ProfileGap: return "profile_gap";
    case SeriesSource::NonlinearMinusLinear: return "nl_minus_linear";
  }
  return "linear";
}

void DecaySeries::validate() const {
  if (times.size() != values.size()) throw std::invalid_argument("series: times and values differ in length");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("series: times must increase strictly");
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw std::invalid_argument("series: values must be finite and nonnegative");
    }
  }
}

bool DecaySeries::is_zero() const {
  for (double v : values) {
    if (v != 0.0) return false;
  }
  return true;
}

RateFit fit_rate(const DecaySeries& series, double t_lo, double t_hi) {
  if (!(t_hi > t_lo)) throw std::invalid_argument("fit_rate: empty window");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (t < t_lo || t > t_hi) continue;
    if (!(series.values[i] > 0.0)) throw std::domain_error("cannot take log");
    x.push_back(std::log1p(t));
    y.push_back(std::log(series.values[i]));
  }
  const std::size_t m = x.size();
  if (m < 6) throw std::invalid_argument("fit_rate: need at least 6 samples in the window");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  fit.stderr_slope = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.points = m;
  return fit;
}

double eta(double t, int n) {
  if (n < 1) throw std::invalid_argument("eta: dimension must be >= 1");
  if (!(t >= 0.0)) throw std::invalid_argument("eta: t must be nonnegative");
  if (n == 1) return 1.0;
  if (n == 2) return std::log(2.0 + t) / std::sqrt(1.0 + t);
  return 1.0 / std::sqrt(1.0 + t);
}

namespace {

double derivative_norm(const PhysicalField& f, int k) {
  return k == 0 ? norm(f, NormSpec::l2()) : norm(f, NormSpec::sobolev(k));
}

void check_k_list(const std::vector<int>& k_list) {
  if (k_list.empty()) throw std::invalid_argument("decay_series: empty k_list");
  for (int k : k_list) {
    if (k < 0) throw std::invalid_argument("decay_series: derivative order must be >= 0");
  }
}

}  // namespace

std::vector<DecaySeries> decay_series(const Trajectory& run, const std::vector<int>& k_list,
                                      SeriesSource source) {
  check_k_list(k_list);
  if (run.times.size() < 8) throw std::invalid_argument("decay_series: need at least 8 output times");
  std::vector<DecaySeries> out;
  for (int k : k_list) {
    DecaySeries s;
    s.k = k;
    s.source = source;
    s.times = run.times;
    for (const StatePair& st : run.states) s.values.push_back(derivative_norm(st.u, k));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<DecaySeries> decay_series(const RadialData& data, int n, const std::vector<double>& times,
                                      const std::vector<int>& k_list, const ModelParams& params,
                                      RadialQuantity which) {
  check_k_list(k_list);
  if (times.size() < 8) throw std::invalid_argument("decay_series: need at least 8 output times");
  const SeriesSource source = which == RadialQuantity::Gap ? SeriesSource::ProfileGap : SeriesSource::Linear;
  std::vector<DecaySeries> out;
  for (int k : k_list) {
    DecaySeries s;
    s.k = k;
    s.source = source;
    s.times = times;
    for (double t : times) s.values.push_back(linear_norm_radial(data, t, k, n, params, which));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<DecaySeries> difference_series(const Trajectory& a, const Trajectory& b,
                                           const std::vector<int>& k_list, SeriesSource source) {
  check_k_list(k_list);
  if (a.times.size() != b.times.size() || !(a.grid == b.grid)) {
    throw std::invalid_argument("difference_series: runs on different meshes");
  }
  std::vector<DecaySeries> out;
  for (int k : k_list) {
    DecaySeries s;
    s.k = k;
    s.source = source;
    s.times = a.times;
    out.push_back(std::move(s));
  }
  PhysicalField diff(a.grid);
  for (std::size_t j = 0; j < a.times.size(); ++j) {
    for (std::size_t i = 0; i < a.grid.size(); ++i) diff[i] = a.states[j].u[i] - b.states[j].u[i];
    for (std::size_t q = 0; q < k_list.size(); ++q) out[q].values.push_back(derivative_norm(diff, k_list[q]));
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw std::invalid_argument("log_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> time_grid(double T, std::size_t n) {
  if (!(T > 1e-3) || n < 3) throw std::invalid_argument("time_grid: need T > 1e-3 and n >= 3");
  std::vector<double> g{0.0};
  for (double t : log_grid(1e-3, T, n - 1)) g.push_back(t);
  return g;
}

}  // namespace dbq
