#include "dbq/symbols.hpp"

#include <cmath>
#include <stdexcept>

namespace dbq {

void ModelParams::validate() const {
  if (!std::isfinite(alpha) || alpha > -1.0) {
    throw std::invalid_argument("alpha must satisfy alpha <= -1");
  }
  if (!std::isfinite(beta) || !(beta > 0.0)) {
    throw std::invalid_argument("beta must be positive");
  }
}

RootPair roots(double xi2, const ModelParams& params) {
  if (!(xi2 >= 0.0)) throw std::invalid_argument("roots: xi2 must be nonnegative");
  const double b = damping(xi2, params);
  const double c = stiffness(xi2);
  RootPair out;
  out.discriminant = b * b - 4.0 * c;
  if (out.discriminant >= 0.0) {
    const double s = std::sqrt(out.discriminant);
    const double fast = -0.5 * (b + s);
    // Vieta for the slow root avoids the cancellation in (-b + s) / 2.
    const double slow = fast != 0.0 ? c / fast : 0.5 * (-b + s);
    out.lambda_plus = {slow, 0.0};
    out.lambda_minus = {fast, 0.0};
  } else {
    const double im = 0.5 * std::sqrt(-out.discriminant);
    out.lambda_plus = {-0.5 * b, im};
    out.lambda_minus = {-0.5 * b, -im};
  }
  out.degenerate = std::abs(out.lambda_plus - out.lambda_minus) <
                   1e-6 * std::max(1.0, std::abs(out.lambda_plus));
  return out;
}

Complex phi1_direct(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  const Complex em1{std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
  return em1 / z;
}

Complex phi1(Complex z) {
  if (std::abs(z) < 1e-3) {
    // sum_{k>=0} z^k / (k+1)!, truncated well below double precision.
    Complex sum = 1.0;
    Complex term = 1.0;
    for (int k = 1; k <= 8; ++k) {
      term *= z / static_cast<double>(k + 1);
      sum += term;
    }
    return sum;
  }
  return phi1_direct(z);
}

PropagatorSymbols propagator(const RootPair& r, double xi2, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("propagator: t must be nonnegative");
  const Complex lp = r.lambda_plus;
  const Complex lm = r.lambda_minus;
  const Complex delta = lp - lm;
  const double c = stiffness(xi2);
  const Complex ep = std::exp(lp * t);
  PropagatorSymbols s;
  if (std::abs(delta) * t >= 1.0) {
    // Well-separated roots: the closed forms carry no cancellation.
    const Complex em = std::exp(lm * t);
    s.G = (ep - em) / delta;
    s.H = (lp * em - lm * ep) / delta;
    s.Gt = (lp * ep - lm * em) / delta;
  } else {
    s.G = t * ep * phi1(-delta * t);
    s.H = ep - lp * s.G;
    s.Gt = ep + lm * s.G;
  }
  s.Ht = -c * s.G;
  return s;
}

PropagatorSymbols propagator(double xi2, double t, const ModelParams& params) {
  if (!(t >= 0.0)) throw std::invalid_argument("propagator: t must be nonnegative");
  return propagator(roots(xi2, params), xi2, t);
}

ProfileSymbols profile_symbols(double xi2, double t, const ModelParams& params) {
  if (!(xi2 >= 0.0)) throw std::invalid_argument("profile_symbols: xi2 must be nonnegative");
  if (!(t >= 0.0)) throw std::invalid_argument("profile_symbols: t must be nonnegative");
  const double r = std::sqrt(xi2);
  const double envelope = std::exp(0.5 * params.alpha * xi2 * t);
  const double rt = r * t;
  const double sinc_t = rt < 1e-8 ? t * (1.0 - rt * rt / 6.0) : std::sin(rt) / r;
  return {envelope * sinc_t, envelope * std::cos(rt)};
}

double omega(double xi2) {
  if (!(xi2 >= 0.0)) throw std::invalid_argument("omega: xi2 must be nonnegative");
  return xi2 / (1.0 + xi2);
}

EnergyValues energy_functionals(double xi2, Complex u_hat, Complex ut_hat,
                                const ModelParams& params) {
  const double b = damping(xi2, params);
  const double c = stiffness(xi2);
  const double u2 = std::norm(u_hat);
  const double ut2 = std::norm(ut_hat);
  const double cross = (ut_hat * std::conj(u_hat)).real();
  EnergyValues e;
  e.E = (1.0 + xi2) * ut2 + ((1.0 + xi2) * c + xi2 * b) * u2 + 2.0 * xi2 * cross;
  e.F = (2.0 * (1.0 + xi2) * b - 2.0 * xi2) * ut2 + 2.0 * xi2 * c * u2;
  e.E0 = ut2 + xi2 * (1.0 + xi2) * u2;
  return e;
}

}  // namespace dbq
