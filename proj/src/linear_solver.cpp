#include "dbq/linear_solver.hpp"

#include <cmath>
#include <stdexcept>

#include "dbq/errors.hpp"

namespace dbq {

StatePair::StatePair(PhysicalField u_, PhysicalField ut_, double t_)
    : u(std::move(u_)), ut(std::move(ut_)), t(t_) {
  if (!(u.grid() == ut.grid())) throw std::invalid_argument("state fields live on different grids");
}

SpectralState::SpectralState(SpectralField u_, SpectralField ut_, double t_)
    : u(std::move(u_)), ut(std::move(ut_)), t(t_) {
  if (!(u.grid() == ut.grid())) throw std::invalid_argument("state fields live on different grids");
}

SpectralState to_spectral(const StatePair& s) {
  return {forward_transform(s.u), forward_transform(s.ut), s.t};
}

StatePair to_physical(const SpectralState& s) {
  return {inverse_transform(s.u), inverse_transform(s.ut), s.t};
}

SpectralState linear_solution(const SpectralField& u0, const SpectralField& u1, double t,
                              const ModelParams& params) {
  if (!(u0.grid() == u1.grid())) throw std::invalid_argument("u0 and u1 live on different grids");
  if (!(t >= 0.0)) throw std::invalid_argument("linear_solution: t must be nonnegative");
  const Grid& grid = u0.grid();
  SpectralField u(grid), ut(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double xi2 = grid.xi2(i);
    const auto s = propagator(roots(xi2, params), xi2, t);
    u[i] = s.G.real() * u1[i] + s.H.real() * u0[i];
    ut[i] = s.Gt.real() * u1[i] + s.Ht.real() * u0[i];
  }
  return {std::move(u), std::move(ut), t};
}

StatePair linear_solution(const PhysicalField& u0, const PhysicalField& u1, double t,
                          const ModelParams& params) {
  if (!(u0.grid() == u1.grid())) throw std::invalid_argument("u0 and u1 live on different grids");
  if (t == 0.0) return {u0, u1, 0.0};
  return to_physical(linear_solution(forward_transform(u0), forward_transform(u1), t, params));
}

PhysicalField profile_solution(const PhysicalField& u0, const PhysicalField& u1, double t,
                               const ModelParams& params) {
  if (!(u0.grid() == u1.grid())) throw std::invalid_argument("u0 and u1 live on different grids");
  if (!(t >= 0.0)) throw std::invalid_argument("profile_solution: t must be nonnegative");
  if (t == 0.0) return u0;
  const Grid& grid = u0.grid();
  const SpectralField f0 = forward_transform(u0);
  const SpectralField f1 = forward_transform(u1);
  SpectralField u(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = profile_symbols(grid.xi2(i), t, params);
    u[i] = p.G0 * f1[i] + p.H0 * f0[i];
  }
  return inverse_transform(u);
}

double spectral_energy(const SpectralState& s, const ModelParams& params) {
  const Grid& grid = s.grid();
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    total += energy_functionals(grid.xi2(i), s.u[i], s.ut[i], params).E;
  }
  return total * grid.dual_cell_volume();
}

RadialData gaussian_radial(int n, double sigma, double amplitude) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian width must be positive");
  RadialData d;
  const double scale = amplitude * std::pow(sigma, n);
  d.u0_hat = [scale, sigma](double r) { return scale * std::exp(-0.5 * sigma * sigma * r * r); };
  d.u1_hat = [](double) { return 0.0; };
  d.class_tag = DataClass::L1Type;
  // exp(-sigma^2 r^2) < 1e-70 beyond this radius.
  d.cutoff = 12.8 / sigma;
  return d;
}

RadialData l2_type_radial(int n, double eps, double amplitude) {
  if (!(eps > 0.0) || eps >= static_cast<double>(n)) {
    throw std::invalid_argument("l2_type_radial: eps must lie in (0, n)");
  }
  RadialData d;
  const double power = -0.5 * (n - eps);
  d.u0_hat = [amplitude, power](double r) { return r <= 1.0 ? amplitude * std::pow(r, power) : 0.0; };
  d.u1_hat = [](double) { return 0.0; };
  d.class_tag = DataClass::L2Type;
  d.cutoff = 2.0;
  d.breakpoints = {1.0};
  return d;
}

namespace {

double radial_value(const RadialData& data, double t, int k, int n, const ModelParams& params,
                    RadialQuantity which, double cutoff) {
  RadialQuadratureOptions opt;
  opt.cutoff = cutoff;
  opt.rel_tol = 1e-10;
  opt.breakpoints = data.breakpoints;
  // Mass of the diffusive envelope exp(alpha r^2 t / 2) sits near r ~ t^{-1/2}.
  const double scale = 1.0 / std::sqrt(1.0 + t);
  for (int j = -3; j <= 4; ++j) opt.breakpoints.push_back(std::ldexp(scale, j));

  auto profile_sq = [&](double r) {
    const double xi2 = r * r;
    const double a0 = data.u0_hat(r);
    const double a1 = data.u1_hat(r);
    double value = 0.0;
    switch (which) {
      case RadialQuantity::Linear: {
        const auto s = propagator(roots(xi2, params), xi2, t);
        value = s.G.real() * a1 + s.H.real() * a0;
        break;
      }
      case RadialQuantity::Profile: {
        const auto p = profile_symbols(xi2, t, params);
        value = p.G0 * a1 + p.H0 * a0;
        break;
      }
      case RadialQuantity::Gap: {
        const auto s = propagator(roots(xi2, params), xi2, t);
        const auto p = profile_symbols(xi2, t, params);
        value = (s.G.real() - p.G0) * a1 + (s.H.real() - p.H0) * a0;
        break;
      }
    }
    return value * value;
  };
  return radial_norm_quadrature_sq(profile_sq, k, n, opt);
}

}  // namespace

double linear_norm_radial(const RadialData& data, double t, int k, int n,
                          const ModelParams& params, RadialQuantity which) {
  if (!(t >= 0.0)) throw std::invalid_argument("linear_norm_radial: t must be nonnegative");
  if (k < 0) throw std::invalid_argument("linear_norm_radial: k must be >= 0");
  double cutoff = data.cutoff;
  double previous = radial_value(data, t, k, n, params, which, cutoff);
  for (int doubling = 0; doubling < 3; ++doubling) {
    cutoff *= 2.0;
    const double current = radial_value(data, t, k, n, params, which, cutoff);
    if (std::abs(current - previous) <= 1e-8 * std::abs(current) ||
        (current == 0.0 && previous == 0.0)) {
      return current;
    }
    previous = current;
  }
  throw ConvergenceError("linear_norm_radial: radial tail did not converge after 3 cutoff doublings");
}

}  // namespace dbq
