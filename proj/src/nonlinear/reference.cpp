#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "dbq/errors.hpp"
#include "dbq/nonlinear_solver.hpp"

namespace dbq {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Fifth-order minus embedded fourth-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// Averages each coefficient with the conjugate of its mirror so the block
// [first, first + P) describes a real field.
void project_real(const Grid& grid, Complex* first) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t j = grid.mirror(i);
    if (j < i) continue;
    const Complex avg = 0.5 * (first[i] + std::conj(first[j]));
    first[i] = avg;
    first[j] = std::conj(avg);
  }
}

// State layout: [u^ ; u_t^] as one complex vector of length 2P.
struct System {
  Grid grid;
  NonlinearitySpec spec;
  std::vector<double> b, c;

  void rhs(double t, const std::vector<Complex>& y, std::vector<Complex>& dy) const {
    const std::size_t P = grid.size();
    std::vector<Complex> u_hat(y.begin(), y.begin() + P), ut_hat(y.begin() + P, y.end());
    // Trial stages of a rejected stiff step can drift off the real subspace.
    project_real(grid, u_hat.data());
    project_real(grid, ut_hat.data());
    SpectralField u(grid, std::move(u_hat));
    SpectralField ut(grid, std::move(ut_hat));
    SpectralField src(grid);
    SpectralState s(std::move(u), std::move(ut), t);
    if (!spec.is_linear()) src = nonlinearity(s, spec);
    for (std::size_t i = 0; i < P; ++i) {
      dy[i] = s.ut[i];
      dy[P + i] = -b[i] * s.ut[i] - c[i] * s.u[i] + src[i];
    }
  }
};

}  // namespace

Trajectory reference_solve(const PhysicalField& u0, const PhysicalField& u1, double T,
                           const NonlinearitySpec& spec, const ModelParams& params, double tol,
                           const ReferenceOptions& options) {
  if (!(u0.grid() == u1.grid())) throw std::invalid_argument("u0 and u1 live on different grids");
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("T must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(options.output_every > 0.0)) throw std::invalid_argument("output_every must be positive");
  params.validate();

  const Grid& grid = u0.grid();
  const std::size_t P = grid.size();
  System sys{grid, spec, std::vector<double>(P), std::vector<double>(P)};
  for (std::size_t i = 0; i < P; ++i) {
    const double x = grid.xi2(i);
    sys.b[i] = x * x - params.alpha * x;
    sys.c[i] = x + x * x;
  }

  std::vector<Complex> y(2 * P);
  {
    const SpectralField f0 = forward_transform(u0);
    const SpectralField f1 = forward_transform(u1);
    std::copy(f0.coeffs().begin(), f0.coeffs().end(), y.begin());
    std::copy(f1.coeffs().begin(), f1.coeffs().end(), y.begin() + P);
  }

  std::vector<double> outputs;
  for (long k = 1;; ++k) {
    const double s = static_cast<double>(k) * options.output_every;
    if (s >= T * (1.0 - 1e-12)) break;
    outputs.push_back(s);
  }
  outputs.push_back(T);

  Trajectory out{grid, {0.0}, {StatePair(u0, u1, 0.0)}};
  auto record = [&](double t) {
    SpectralState s(SpectralField(grid, std::vector<Complex>(y.begin(), y.begin() + P)),
                    SpectralField(grid, std::vector<Complex>(y.begin() + P, y.end())), t);
    out.times.push_back(t);
    out.states.push_back(to_physical(s));
  };

  const std::size_t D = 2 * P;
  std::array<std::vector<Complex>, 7> k;
  for (auto& v : k) v.assign(D, Complex{});
  std::vector<Complex> tmp(D), ynew(D);

  double t = 0.0;
  sys.rhs(t, y, k[0]);
  double h = std::min(1e-4, options.output_every);
  long steps = 0;
  std::size_t next = 0;

  while (next < outputs.size()) {
    const double target = outputs[next];
    if (target - t <= 1e-13 * std::max(1.0, t)) {
      t = target;
      record(t);
      ++next;
      continue;
    }
    bool hit = false;
    const double h_free = h;
    if (t + h >= target) {
      h = target - t;
      hit = true;
    }
    if (h < 1e-14 * std::max(1.0, t) || ++steps > options.max_steps) {
      throw ConvergenceError("stiffness limit; reduce N or T");
    }

    auto stage = [&](std::vector<Complex>& dst, std::initializer_list<std::pair<int, double>> terms) {
      for (std::size_t i = 0; i < D; ++i) {
        Complex acc = y[i];
        for (const auto& [s, a] : terms) acc += h * a * k[s][i];
        dst[i] = acc;
      }
    };
    stage(tmp, {{0, a21}});
    sys.rhs(t + c2 * h, tmp, k[1]);
    stage(tmp, {{0, a31}, {1, a32}});
    sys.rhs(t + c3 * h, tmp, k[2]);
    stage(tmp, {{0, a41}, {1, a42}, {2, a43}});
    sys.rhs(t + c4 * h, tmp, k[3]);
    stage(tmp, {{0, a51}, {1, a52}, {2, a53}, {3, a54}});
    sys.rhs(t + c5 * h, tmp, k[4]);
    stage(tmp, {{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
    sys.rhs(t + h, tmp, k[5]);
    stage(ynew, {{0, b1}, {2, b3}, {3, b4}, {4, b5}, {5, b6}});
    sys.rhs(t + h, ynew, k[6]);

    double err = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      const Complex e =
          h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
      const double scale_re = tol + tol * std::max(std::abs(y[i].real()), std::abs(ynew[i].real()));
      const double scale_im = tol + tol * std::max(std::abs(y[i].imag()), std::abs(ynew[i].imag()));
      err += (e.real() / scale_re) * (e.real() / scale_re) + (e.imag() / scale_im) * (e.imag() / scale_im);
    }
    err = std::sqrt(err / (2.0 * static_cast<double>(D)));
    if (!std::isfinite(err)) err = 1e10;

    const double factor = std::clamp(0.9 * std::pow(std::max(err, 1e-300), -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      t = hit ? target : t + h;
      y.swap(ynew);
      std::swap(k[0], k[6]);
      // Stiff modes sit at the edge of the explicit stability region, where
      // rounding differences between xi and -xi grow to the tolerance level.
      // Project back onto real fields.
      project_real(grid, y.data());
      project_real(grid, y.data() + P);
      if (hit) {
        record(t);
        ++next;
      }
      h = hit ? std::max(h * factor, h_free) : h * factor;
    } else {
      h *= std::min(factor, 1.0);
    }
  }
  return out;
}

}  // namespace dbq
