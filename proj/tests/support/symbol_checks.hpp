#pragma once

// Finite-difference checks of the propagator symbols, shared by the unit
// tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>

#include "dbq/symbols.hpp"

namespace dbq::checks {

/// Step for the 5-point stencils: a hundredth of the fastest time scale.
inline double stencil_step(double xi2, const ModelParams& p) {
  const RootPair r = roots(xi2, p);
  const double rate = std::max({1.0, std::abs(r.lambda_plus), std::abs(r.lambda_minus)});
  return 1e-2 / rate;
}

struct OdeResidual {
  double G = 0.0;
  double H = 0.0;
};

struct StencilDerivatives {
  double first = 0.0;
  double second = 0.0;
};

/// 5-point first and second derivatives of f at t with the step taken
/// adaptively: h runs up a doubling ladder from h0 and the step with the
/// smallest estimated error in the derivative of order `order` (difference
/// to the next rung plus the rounding term) wins. Keeps the stencil inside
/// t >= 0.
template <class F>
StencilDerivatives stencil_derivatives(const F& f, double t, double h0, int order = 2) {
  constexpr double eps = 2.220446049250313e-16;
  auto at = [&](double h) {
    double v[5];
    double scale = 0.0;
    for (int j = -2; j <= 2; ++j) {
      v[j + 2] = f(t + j * h);
      scale = std::max(scale, std::abs(v[j + 2]));
    }
    StencilDerivatives d{(v[0] - 8 * v[1] + 8 * v[3] - v[4]) / (12 * h),
                         (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * h * h)};
    const double rounding = order == 2 ? 64.0 / 12.0 * eps * scale / (h * h) : 18.0 / 12.0 * eps * scale / h;
    return std::pair{d, rounding};
  };
  const double h_max = t / 2;
  auto prev = at(h0);
  StencilDerivatives best = prev.first;
  double best_err = 1e300;
  for (double h = h0; 2 * h <= h_max && h < 1e6 * h0; h *= 2) {
    const auto next = at(2 * h);
    const double change = order == 2 ? prev.first.second - next.first.second : prev.first.first - next.first.first;
    const double err = std::abs(change) / 15 + prev.second;
    if (err < best_err) {
      best_err = err;
      best = prev.first;
    }
    prev = next;
  }
  return best;
}

/// |w_tt + b w_t + c w| / (1 + |w_tt|) for w = G and w = H, with w_t and
/// w_tt from adaptive 5-point stencils.
inline OdeResidual ode_residual(double xi2, double t, const ModelParams& p) {
  const double h0 = 1e-2 * stencil_step(xi2, p);
  t = std::max(t, 4.0 * h0);
  const double b = damping(xi2, p), c = stiffness(xi2);
  auto G = [&](double s) { return propagator(xi2, s, p).G.real(); };
  auto H = [&](double s) { return propagator(xi2, s, p).H.real(); };
  const StencilDerivatives dg = stencil_derivatives(G, t, h0);
  const StencilDerivatives dh = stencil_derivatives(H, t, h0);
  return {std::abs(dg.second + b * dg.first + c * G(t)) / (1 + std::abs(dg.second)),
          std::abs(dh.second + b * dh.first + c * H(t)) / (1 + std::abs(dh.second))};
}

/// Relative defect of dE/dt + F = 0 along (u, u_t) = (G, G_t) (use_h false)
/// or (H, H_t) (use_h true), with dE/dt from the adaptive 5-point stencil.
inline double energy_defect(double xi2, double t, const ModelParams& p, bool use_h) {
  const double h0 = 1e-2 * stencil_step(xi2, p);
  t = std::max(t, 4.0 * h0);
  auto energy = [&](double s) {
    const PropagatorSymbols ps = propagator(xi2, s, p);
    return use_h ? energy_functionals(xi2, ps.H, ps.Ht, p) : energy_functionals(xi2, ps.G, ps.Gt, p);
  };
  const double dE = stencil_derivatives([&](double s) { return energy(s).E; }, t, h0, 1).first;
  const double F = energy(t).F;
  const double scale = std::max(std::abs(F), std::abs(dE));
  return scale == 0.0 ? 0.0 : std::abs(dE + F) / scale;
}

/// Vieta residuals relative to b and c.
inline double vieta_residual(double xi2, const ModelParams& p) {
  const RootPair r = roots(xi2, p);
  const double b = damping(xi2, p), c = stiffness(xi2);
  const double sum = std::abs(r.lambda_plus + r.lambda_minus + b);
  const double prod = std::abs(r.lambda_plus * r.lambda_minus - c);
  return std::max(b > 0 ? sum / b : sum, c > 0 ? prod / c : prod);
}

}  // namespace dbq::checks
