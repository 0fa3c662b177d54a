#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dbq/errors.hpp"
#include "dbq/nonlinear_solver.hpp"

namespace dbq {
namespace {

// Closed forms lose digits to cancellation when |lambda| dt is small; the
// Taylor series converges like rho^j there.
constexpr double kSeriesRadius = 0.5;

double spectral_l2_sq(const SpectralField& F) {
  double s = 0.0;
  for (const Complex& c : F.coeffs()) s += std::norm(c);
  return s * F.grid().dual_cell_volume();
}

long whole_multiple(double span, double unit, const char* what) {
  const double q = span / unit;
  const long k = std::lround(q);
  if (k < 1 || std::abs(q - static_cast<double>(k)) > 1e-9 * std::max(1.0, q)) {
    throw std::invalid_argument(std::string(what) + " must be a positive whole multiple of dt");
  }
  return k;
}

}  // namespace

DuhamelWeights duhamel_weights(double xi2, double dt, const ModelParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("duhamel_weights: dt must be positive");
  const RootPair rp = roots(xi2, params);
  const PropagatorSymbols s = propagator(rp, xi2, dt);
  const double b = damping(xi2, params);
  const double c = stiffness(xi2);

  DuhamelWeights w{};
  w.G = s.G.real();
  w.H = s.H.real();
  w.Gt = s.Gt.real();
  w.Ht = s.Ht.real();

  const double rho = std::max(std::abs(rp.lambda_plus), std::abs(rp.lambda_minus)) * dt;
  if (rho <= kSeriesRadius) {
    // g_j = G^{(j)}(0): g_0 = 0, g_1 = 1, g_{j+2} = -b g_{j+1} - c g_j.
    double g_prev = 0.0, g = 1.0;
    double pow_dt = dt * dt;  // dt^{j+1} for j = 1
    double fact1 = 2.0;       // (j+1)!
    double fact2 = 6.0;       // (j+2)!
    double W0 = 0.0, W1 = 0.0;
    double last_t0 = 1.0;
    for (int j = 1; j < 80; ++j) {
      const double t0 = g * pow_dt / fact1;
      const double t1 = g * pow_dt / fact2;
      W0 += t0;
      W1 += t1;
      // g_j can vanish by cancellation (b = c = 2 gives g_4 = 0), so stop
      // only after two consecutive negligible terms.
      const bool tiny = std::abs(t0) <= 1e-18 * std::abs(W0);
      if (tiny && std::abs(last_t0) <= 1e-18 * std::abs(W0)) break;
      last_t0 = t0;
      const double g_next = -b * g - c * g_prev;
      g_prev = g;
      g = g_next;
      pow_dt *= dt;
      fact1 *= j + 2;
      fact2 *= j + 3;
    }
    w.W0 = W0;
    w.W1 = W1;
  } else {
    w.W0 = (1.0 - w.H) / c;
    w.W1 = (dt - w.G - b * w.W0) / (c * dt);
  }
  w.V0 = w.G;
  w.V1 = w.W0 / dt;
  return w;
}

DuhamelStepper::DuhamelStepper(Grid grid, double dt, ModelParams params, NonlinearitySpec spec)
    : grid_(std::move(grid)), dt_(dt), params_(params), spec_(spec) {
  params_.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  // Weights depend on the mode only through |xi|^2; reuse across equal shells.
  weights_.resize(grid_.size());
  std::vector<std::pair<double, std::size_t>> order(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) order[i] = {grid_.xi2(i), i};
  std::sort(order.begin(), order.end());
  double last_xi2 = -1.0;
  DuhamelWeights last{};
  for (const auto& [xi2, i] : order) {
    if (xi2 != last_xi2) {
      last = duhamel_weights(xi2, dt_, params_);
      last_xi2 = xi2;
    }
    weights_[i] = last;
  }
}

SpectralState DuhamelStepper::step(const SpectralState& y) const {
  if (!(y.grid() == grid_)) throw std::invalid_argument("DuhamelStepper: state on a different grid");
  const std::size_t M = grid_.size();
  SpectralField au(grid_), aut(grid_);
  if (spec_.is_linear()) {
    for (std::size_t i = 0; i < M; ++i) {
      const DuhamelWeights& w = weights_[i];
      au[i] = w.H * y.u[i] + w.G * y.ut[i];
      aut[i] = w.Ht * y.u[i] + w.Gt * y.ut[i];
    }
    return {std::move(au), std::move(aut), y.t + dt_};
  }

  const SpectralField Nn = nonlinearity(y, spec_);
  for (std::size_t i = 0; i < M; ++i) {
    const DuhamelWeights& w = weights_[i];
    au[i] = w.H * y.u[i] + w.G * y.ut[i] + w.W0 * Nn[i];
    aut[i] = w.Ht * y.u[i] + w.Gt * y.ut[i] + w.V0 * Nn[i];
  }
  SpectralState a(std::move(au), std::move(aut), y.t + dt_);
  const SpectralField Na = nonlinearity(a, spec_);
  for (std::size_t i = 0; i < M; ++i) {
    const DuhamelWeights& w = weights_[i];
    const Complex d = Na[i] - Nn[i];
    a.u[i] += w.W1 * d;
    a.ut[i] += w.V1 * d;
  }
  return a;
}

StatePair step_duhamel(const StatePair& state, double dt, const NonlinearitySpec& spec,
                       const ModelParams& params) {
  const DuhamelStepper stepper(state.grid(), dt, params, spec);
  StatePair next = to_physical(stepper.step(to_spectral(state)));
  if (!next.u.all_finite() || !next.ut.all_finite()) {
    throw BlowUpError("state blow-up", state.t + dt);
  }
  return next;
}

Trajectory solve(const PhysicalField& u0, const PhysicalField& u1, double T, double dt,
                 const NonlinearitySpec& spec, const ModelParams& params,
                 const SolveOptions& options) {
  if (!(u0.grid() == u1.grid())) throw std::invalid_argument("u0 and u1 live on different grids");
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("T must be positive");
  const long steps = whole_multiple(T, dt, "T");
  const long every = whole_multiple(options.output_every, dt, "output_every");

  const DuhamelStepper stepper(u0.grid(), dt, params, spec);
  SpectralState y = to_spectral(StatePair(u0, u1, 0.0));
  const double initial = std::sqrt(spectral_l2_sq(y.u)) + std::sqrt(spectral_l2_sq(y.ut));
  const double limit = options.blowup_factor * std::max(initial, 1e-300);

  Trajectory out{u0.grid(), {0.0}, {StatePair(u0, u1, 0.0)}};
  for (long k = 1; k <= steps; ++k) {
    y = stepper.step(y);
    y.t = static_cast<double>(k) * dt;
    const double size = std::sqrt(spectral_l2_sq(y.u)) + std::sqrt(spectral_l2_sq(y.ut));
    if (!std::isfinite(size) || size > limit) throw BlowUpError("state blow-up", y.t);
    if (k % every == 0 || k == steps) {
      out.times.push_back(y.t);
      out.states.push_back(to_physical(y));
    }
  }
  return out;
}

Trajectory linear_trajectory(const PhysicalField& u0, const PhysicalField& u1,
                             const std::vector<double>& times, const ModelParams& params) {
  if (!(u0.grid() == u1.grid())) throw std::invalid_argument("u0 and u1 live on different grids");
  const SpectralField f0 = forward_transform(u0);
  const SpectralField f1 = forward_transform(u1);
  Trajectory out{u0.grid(), times, {}};
  out.states.reserve(times.size());
  for (double t : times) {
    if (t == 0.0) {
      out.states.emplace_back(u0, u1, 0.0);
    } else {
      out.states.push_back(to_physical(linear_solution(f0, f1, t, params)));
    }
  }
  return out;
}

double max_l2_distance(const Trajectory& a, const Trajectory& b) {
  if (a.times.size() != b.times.size()) throw std::invalid_argument("trajectories on different meshes");
  if (!(a.grid == b.grid)) throw std::invalid_argument("trajectories on different grids");
  double worst = 0.0;
  PhysicalField diff(a.grid);
  for (std::size_t j = 0; j < a.times.size(); ++j) {
    if (std::abs(a.times[j] - b.times[j]) > 1e-9 * std::max(1.0, std::abs(a.times[j]))) {
      throw std::invalid_argument("trajectories on different meshes");
    }
    for (std::size_t i = 0; i < a.grid.size(); ++i) diff[i] = a.states[j].u[i] - b.states[j].u[i];
    worst = std::max(worst, norm(diff, NormSpec::l2()));
  }
  return worst;
}

}  // namespace dbq
