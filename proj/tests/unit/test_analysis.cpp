#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dbq/analysis.hpp"
#include "dbq/initial_data.hpp"

using namespace dbq;
using std::numbers::pi;

namespace {

DecaySeries power_law(double slope, double scale, std::size_t n = 20) {
  DecaySeries s;
  s.times = log_grid(10.0, 1e4, n);
  for (double t : s.times) s.values.push_back(scale * std::pow(1 + t, slope));
  return s;
}

}  // namespace

TEST_CASE("fit_rate recovers an exact power law") {
  const RateFit fit = fit_rate(power_law(-0.75, 3.0), 10.0, 1e4);
  CHECK(fit.slope == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.stderr_slope < 1e-12);
  CHECK(fit.points == 20);
}

TEST_CASE("fit_rate uses only the window") {
  DecaySeries s = power_law(-0.5, 1.0);
  // Spoil the samples before t = 100.
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    if (s.times[i] < 100.0) s.values[i] *= 7.0;
  }
  const RateFit fit = fit_rate(s, 100.0, 1e4);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.t_lo >= 100.0);
}

TEST_CASE("fit_rate rejects zero values and short windows") {
  DecaySeries s = power_law(-0.5, 1.0);
  s.values[3] = 0.0;
  try {
    fit_rate(s, 10.0, 1e4);
    FAIL("expected domain_error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("cannot take log") != std::string::npos);
  }
  CHECK_THROWS_AS(fit_rate(power_law(-0.5, 1.0, 5), 10.0, 1e4), std::invalid_argument);
}

TEST_CASE("series validation") {
  DecaySeries s = power_law(-0.5, 1.0);
  CHECK_NOTHROW(s.validate());
  CHECK_FALSE(s.is_zero());
  s.times[4] = s.times[3];
  CHECK_THROWS(s.validate());
  DecaySeries z;
  z.times = {0.0, 1.0};
  z.values = {0.0, 0.0};
  CHECK(z.is_zero());
}

TEST_CASE("eta") {
  CHECK(eta(5.0, 1) == 1.0);
  // mpmath: ln(102) / sqrt(101)
  CHECK(eta(100.0, 2) == doctest::Approx(0.46020199529279698112).epsilon(1e-14));
  CHECK(eta(99.0, 3) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("grids") {
  const std::vector<double> g = log_grid(1e-3, 1e2, 6);
  REQUIRE(g.size() == 6);
  CHECK(g.front() == doctest::Approx(1e-3));
  CHECK(g[1] == doctest::Approx(1e-2));
  CHECK(g.back() == doctest::Approx(1e2));
  const std::vector<double> t = time_grid(1e3, 8);
  CHECK(t.front() == 0.0);
  CHECK(t[1] == doctest::Approx(1e-3));
  CHECK(t.back() == doctest::Approx(1e3));
}

TEST_CASE("decay series of a box run") {
  const Grid g = make_grid(1, 64.0, 128);
  const PhysicalField u0 = gaussian_field(g, 1.0);
  std::vector<double> times;
  for (int i = 0; i <= 10; ++i) times.push_back(i);
  const Trajectory run = linear_trajectory(u0, PhysicalField(g), times, {});
  const std::vector<DecaySeries> s = decay_series(run, {0, 1}, SeriesSource::Linear);
  REQUIRE(s.size() == 2);
  CHECK(s[0].values[0] == doctest::Approx(norm(u0, NormSpec::l2())).epsilon(1e-12));
  CHECK(s[1].k == 1);
  for (std::size_t i = 1; i < times.size(); ++i) CHECK(s[0].values[i] < s[0].values[i - 1]);

  const std::vector<DecaySeries> d = difference_series(run, run, {0}, SeriesSource::NonlinearMinusLinear);
  CHECK(d[0].is_zero());

  Trajectory short_run = run;
  short_run.times.resize(5);
  short_run.states.erase(short_run.states.begin() + 5, short_run.states.end());
  CHECK_THROWS_AS(decay_series(short_run, {0}), std::invalid_argument);
}

TEST_CASE("radial decay series") {
  const std::vector<DecaySeries> s =
      decay_series(gaussian_radial(1), 1, log_grid(100.0, 1e4, 9), {0}, {}, RadialQuantity::Linear);
  REQUIRE(s.size() == 1);
  CHECK(s[0].source == SeriesSource::Linear);
  CHECK(fit_rate(s[0], 100.0, 1e4).slope == doctest::Approx(-0.25).epsilon(0.05));
}

TEST_CASE("energy bounds: c = 0 sup is at least the value at t = 0") {
  const std::vector<double> xi = log_grid(1e-3, 1e2, 60);
  const std::vector<double> t = time_grid(100.0, 60);
  // At t = 0: G = 0, G_t = 1, so the G energy is 1 for every xi.
  CHECK(bound_sup_ratio(BoundKind::GEnergy, xi, t, 0.0, {}) >= 1.0);
  CHECK(bound_sup_ratio(BoundKind::GEnergy, xi, t, 0.5, {}) >=
        bound_sup_ratio(BoundKind::GEnergy, xi, t, 0.25, {}));
}

TEST_CASE("certify_bound picks the largest passing candidate") {
  const std::vector<double> xi = log_grid(1e-3, 1e2, 80);
  const std::vector<double> t = time_grid(1e3, 80);
  const BoundCertificate cert = certify_bound(BoundKind::GEnergy, xi, t, {0.25, 4.0, 1.0}, {});
  CHECK(cert.passed);
  CHECK(cert.fitted_c == 1.0);
  CHECK(cert.sup_ratio < 10.0);
  CHECK_FALSE(cert.grid_spec.empty());

  // e^{+4 omega t} growth beats the decay: no finite constant below the cap.
  const BoundCertificate bad = certify_bound(BoundKind::GEnergy, xi, t, {4.0}, {});
  CHECK_FALSE(bad.passed);
}

TEST_CASE("bound kind names round-trip") {
  for (BoundKind k : {BoundKind::GEnergy, BoundKind::HEnergy, BoundKind::ProfileRemainderG,
                      BoundKind::ProfileRemainderH}) {
    CHECK(parse_bound_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_bound_kind("nope"), std::invalid_argument);
}

TEST_CASE("product estimates") {
  const Grid g = make_grid(1, 2 * pi, 64);
  UniformSource rng(9);
  const PhysicalField v = random_smooth_field(g, rng, 6);
  const PhysicalField w = random_smooth_field(g, rng, 6);

  // ||v^2||_1 = ||v||_2^2 on the samples: Cauchy-Schwarz is an equality.
  const ProductEstimate e0 = product_estimate_check(v, w, 0);
  CHECK(e0.single.ratio() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(e0.difference.ratio() <= 1.0 + 1e-12);

  const ProductEstimate e1 = product_estimate_check(v, w, 1);
  CHECK(e1.single.ratio() <= 2.0 + 1e-12);
  CHECK(e1.difference.ratio() > 0.0);

  const ProductEstimate same = product_estimate_check(v, v, 0);
  CHECK(same.difference.ratio() == 0.0);
  CHECK_THROWS_AS(product_estimate_check(v, w, 2), std::invalid_argument);
}

TEST_CASE("surrogate data size and X-norm proxy") {
  const Grid g = make_grid(1, 32.0, 64);
  CHECK(surrogate_data_size(PhysicalField(g), PhysicalField(g)) == 0.0);
  const PhysicalField u0 = gaussian_field(g, 1.0, 0.01);
  const double s = surrogate_data_size(u0, PhysicalField(g));
  CHECK(s > norm(u0, NormSpec::lp(1.0)));

  std::vector<double> times = {0.0, 1.0, 2.0};
  const XNormProxy x = x_norm_proxy(linear_trajectory(u0, PhysicalField(g), times, {}));
  CHECK(x.initial > 0.0);
  CHECK(x.sup >= x.initial);
}
