#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "../support/symbol_checks.hpp"
#include "dbq/initial_data.hpp"
#include "dbq/symbols.hpp"

using namespace dbq;
using std::numbers::pi;

TEST_CASE("model parameters enforce alpha <= -1 and beta > 0") {
  CHECK_NOTHROW(ModelParams{-1.0, 1.0}.validate());
  CHECK_NOTHROW(ModelParams{-3.0, 0.5}.validate());
  CHECK_THROWS_AS((ModelParams{-0.5, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{-1.0, 0.0}.validate()), std::invalid_argument);
  CHECK(ModelParams::gamma == 1.0);
}

TEST_CASE("roots at the origin form a double zero") {
  const RootPair r = roots(0.0, {});
  CHECK(r.lambda_plus == Complex(0.0, 0.0));
  CHECK(r.lambda_minus == Complex(0.0, 0.0));
  CHECK(r.degenerate);
  CHECK_THROWS_AS(roots(-1.0, {}), std::invalid_argument);
}

TEST_CASE("roots at |xi| = 1, alpha = -1") {
  const RootPair r = roots(1.0, {-1.0, 1.0});
  CHECK(r.discriminant == -4.0);
  CHECK(r.lambda_plus.real() == doctest::Approx(-1.0));
  CHECK(r.lambda_plus.imag() == doctest::Approx(1.0));
  CHECK(r.lambda_minus.imag() == doctest::Approx(-1.0));
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("roots satisfy Vieta, the quadratic and dissipativity") {
  UniformSource rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double xi2 = rng.next(1e-9, 100.0);
    const ModelParams p{-rng.next(1.0, 4.0), 1.0};
    const RootPair r = roots(xi2, p);
    CHECK(checks::vieta_residual(xi2, p) <= 1e-10);
    const double b = damping(xi2, p), c = stiffness(xi2);
    for (Complex l : {r.lambda_plus, r.lambda_minus}) {
      CHECK(std::abs(l * l + b * l + c) <= 1e-10 * std::max({1.0, std::norm(l), b * std::abs(l), c}));
      CHECK(l.real() <= 0.0);
    }
    CHECK(r.lambda_plus.imag() >= 0.0);
  }
}

TEST_CASE("low-frequency roots follow +-i|xi| + alpha |xi|^2 / 2") {
  // |lambda - (i r + alpha r^2 / 2)| / r^3 stays bounded under refinement.
  const ModelParams p{-1.0, 1.0};
  double worst_coarse = 0.0, worst_fine = 0.0;
  for (double r = 1e-4; r <= 1e-2; r *= 1.1) {
    const RootPair rp = roots(r * r, p);
    const double k = std::abs(rp.lambda_plus - Complex(0.5 * p.alpha * r * r, r)) / (r * r * r);
    (r < 1e-3 ? worst_fine : worst_coarse) = std::max(r < 1e-3 ? worst_fine : worst_coarse, k);
  }
  CHECK(worst_coarse < 1.0);
  CHECK(worst_fine < 1.0);
  CHECK(std::abs(worst_fine - worst_coarse) < 0.1);
}

TEST_CASE("propagator initial values are exact") {
  UniformSource rng(2);
  for (int i = 0; i < 200; ++i) {
    const double xi2 = i == 0 ? 0.0 : std::pow(10.0, rng.next(-6.0, 3.0));
    const PropagatorSymbols s = propagator(xi2, 0.0, {});
    CHECK(s.G == Complex(0.0, 0.0));
    CHECK(s.H == Complex(1.0, 0.0));
    CHECK(s.Gt == Complex(1.0, 0.0));
    CHECK(s.Ht == Complex(0.0, 0.0));
  }
  CHECK_THROWS_AS(propagator(1.0, -0.1, {}), std::invalid_argument);
}

TEST_CASE("propagator at |xi| = 1, t = 1") {
  const PropagatorSymbols s = propagator(1.0, 1.0, {-1.0, 1.0});
  // mpmath values of e^{-1} sin 1 and e^{-1}(cos 1 + sin 1).
  CHECK(s.G.real() == doctest::Approx(0.30955987565311219844).epsilon(1e-14));
  CHECK(s.H.real() == doctest::Approx(0.50832598599952513907).epsilon(1e-14));
  CHECK(std::abs(s.G.imag()) < 1e-15);
}

TEST_CASE("double root at the origin") {
  const PropagatorSymbols s = propagator(0.0, 5.0, {});
  CHECK(s.G.real() == 5.0);
  CHECK(s.H.real() == 1.0);
  CHECK(s.Gt.real() == 1.0);
}

TEST_CASE("H equals G_t + b G") {
  UniformSource rng(3);
  for (int i = 0; i < 500; ++i) {
    const double xi2 = std::pow(10.0, rng.next(-6.0, 2.0));
    const double t = rng.next(0.0, 50.0);
    const ModelParams p{-rng.next(1.0, 3.0), 1.0};
    const PropagatorSymbols s = propagator(xi2, t, p);
    const Complex rhs = s.Gt + damping(xi2, p) * s.G;
    CHECK(std::abs(s.H - rhs) <= 1e-9 * std::max({std::abs(s.H), std::abs(s.Gt), 1e-300}) + 1e-300);
  }
}

TEST_CASE("ODE residual of the fundamental solutions") {
  UniformSource rng(4);
  for (int i = 0; i < 500; ++i) {
    const double xi2 = std::pow(10.0, rng.next(-4.0, 2.0));
    const double t = rng.next(0.0, 20.0);
    const checks::OdeResidual r = checks::ode_residual(xi2, t, {});
    CHECK(r.G <= 1e-6);
    CHECK(r.H <= 1e-6);
  }
}

TEST_CASE("symbols are continuous across the degenerate locus") {
  // For alpha = -1 the discriminant r^8 + 2 r^6 - 3 r^4 - 4 r^2 vanishes near r^2 = 1.5214.
  const ModelParams p{-1.0, 1.0};
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (roots(mid, p).discriminant < 0.0 ? lo : hi) = mid;
  }
  const double x0 = 0.5 * (lo + hi);
  CHECK(roots(x0, p).degenerate);
  for (double t : {0.5, 3.0, 20.0}) {
    const PropagatorSymbols at = propagator(x0, t, p);
    for (double eps : {1e-12, 1e-9, 1e-7, 1e-5}) {
      for (double side : {-1.0, 1.0}) {
        const PropagatorSymbols near = propagator(x0 * (1 + side * eps), t, p);
        // Smooth in xi2: differences scale with eps.
        CHECK(std::abs(near.G - at.G) <= (1e-8 + 1e3 * (1 + t) * eps) * std::abs(at.G));
        CHECK(std::abs(near.H - at.H) <= (1e-8 + 1e3 * (1 + t) * eps) * std::abs(at.H));
      }
    }
  }
}

TEST_CASE("phi1 series and direct forms agree in the matching band") {
  UniformSource rng(5);
  for (int i = 0; i < 200; ++i) {
    const double mag = std::pow(10.0, rng.next(-4.0, -2.0));
    const Complex z = std::polar(mag, rng.next(0.0, 2 * pi));
    CHECK(std::abs(phi1(z) - phi1_direct(z)) <= 1e-8 * std::abs(phi1(z)));
  }
  CHECK(phi1(Complex(0.0, 0.0)) == Complex(1.0, 0.0));
}

TEST_CASE("branch switch at |delta| t = 1 is seamless") {
  const ModelParams p{-1.0, 1.0};
  for (double xi2 : {1e-4, 0.01, 0.5, 3.0, 50.0}) {
    const RootPair r = roots(xi2, p);
    const double t_switch = 1.0 / std::abs(r.lambda_plus - r.lambda_minus);
    const PropagatorSymbols a = propagator(r, xi2, t_switch * (1 - 1e-12));
    const PropagatorSymbols b = propagator(r, xi2, t_switch * (1 + 1e-12));
    CHECK(std::abs(a.G - b.G) <= 1e-8 * std::abs(a.G));
    CHECK(std::abs(a.H - b.H) <= 1e-8 * std::max(std::abs(a.H), 1e-300));
    CHECK(std::abs(a.Gt - b.Gt) <= 1e-8 * std::max(std::abs(a.Gt), 1e-300));
  }
}

TEST_CASE("profile symbols") {
  const ProfileSymbols z = profile_symbols(0.0, 7.0, {});
  CHECK(z.G0 == 7.0);
  CHECK(z.H0 == 1.0);
  const ProfileSymbols p = profile_symbols(1.0, pi, {-2.0, 1.0});
  CHECK(std::abs(p.G0) < 1e-15);
  CHECK(p.H0 == doctest::Approx(-std::exp(-pi)).epsilon(1e-14));
  // e^{-5} sin 5 from mpmath (alpha = -2, |xi| = 1, t = 5).
  CHECK(profile_symbols(1.0, 5.0, {-2.0, 1.0}).G0 ==
        doctest::Approx(-0.006461180938816702056).epsilon(1e-13));
  UniformSource rng(6);
  for (int i = 0; i < 500; ++i) {
    const double xi2 = std::pow(10.0, rng.next(-8.0, 2.0));
    const double t = rng.next(0.0, 100.0);
    const ProfileSymbols s = profile_symbols(xi2, t, {-rng.next(1.0, 3.0), 1.0});
    CHECK(std::abs(s.G0) <= t * (1 + 1e-15));
    CHECK(std::abs(s.H0) <= 1.0);
  }
}

TEST_CASE("omega") {
  CHECK(omega(0.0) == 0.0);
  CHECK(omega(1.0) == 0.5);
  double prev = 0.0;
  for (double x = 1.0; x <= 1e6; x *= 10) {
    CHECK(omega(x) > prev);
    CHECK(omega(x) < 1.0);
    prev = omega(x);
  }
  CHECK(omega(1e6) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("energy functionals") {
  const EnergyValues e = energy_functionals(1.0, 1.0, 0.0, {-1.0, 1.0});
  CHECK(e.E == 6.0);
  CHECK(e.F == 4.0);
  CHECK(e.E0 == 2.0);
  const EnergyValues z = energy_functionals(3.0, 0.0, 0.0, {});
  CHECK(z.E == 0.0);
  CHECK(z.F == 0.0);
  CHECK(z.E0 == 0.0);
}

TEST_CASE("energy is equivalent to (1 + |xi|^2) E0") {
  // E >= c (1 + |xi|^2) E0 with one c > 0 over random samples.
  UniformSource rng(8);
  double c_min = 1e300;
  for (int i = 0; i < 2000; ++i) {
    const double xi2 = std::pow(10.0, rng.next(-4.0, 3.0));
    const Complex u = std::polar(rng.next(0.0, 1.0), rng.next(0.0, 2 * pi));
    const Complex ut = std::polar(rng.next(0.0, 1.0), rng.next(0.0, 2 * pi));
    const EnergyValues e = energy_functionals(xi2, u, ut, {});
    CHECK(e.E >= 0.0);
    CHECK(e.F >= 0.0);
    if (e.E0 > 0) c_min = std::min(c_min, e.E / ((1 + xi2) * e.E0));
  }
  CHECK(c_min > 0.1);
}

TEST_CASE("dE/dt + F = 0 along fundamental solutions") {
  UniformSource rng(9);
  for (int i = 0; i < 100; ++i) {
    const double xi2 = std::pow(10.0, rng.next(-3.0, 2.0));
    const double t = rng.next(0.0, 10.0);
    CHECK(checks::energy_defect(xi2, t, {}, false) <= 1e-6);
    CHECK(checks::energy_defect(xi2, t, {}, true) <= 1e-6);
  }
}

TEST_CASE("energy envelope of G over long times") {
  // |xi|^2(1+|xi|^2)|G|^2 + |G_t|^2 <= C e^{-c omega t} with C <= 100, c = 0.1.
  const ModelParams p{-1.0, 1.0};
  double sup = 0.0;
  for (double r = 1e-3; r <= 1e2; r *= 1.1) {
    const double xi2 = r * r;
    for (double t = 0.0; t <= 1e4; t = t < 1 ? t + 0.05 : t * 1.2) {
      const PropagatorSymbols s = propagator(xi2, t, p);
      const double lhs = xi2 * (1 + xi2) * std::norm(s.G) + std::norm(s.Gt);
      sup = std::max(sup, lhs * std::exp(0.1 * omega(xi2) * t));
    }
  }
  CHECK(sup <= 100.0);
}
