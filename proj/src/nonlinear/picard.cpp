#include <cmath>
#include <stdexcept>

#include "dbq/nonlinear_solver.hpp"

namespace dbq {
namespace {

bool is_uniform(const std::vector<double>& t) {
  if (t.size() < 3) return true;
  const double h = t[1] - t[0];
  for (std::size_t j = 2; j < t.size(); ++j) {
    if (std::abs((t[j] - t[j - 1]) - h) > 1e-9 * h) return false;
  }
  return true;
}

}  // namespace

Trajectory picard_iterate(const Trajectory& base, const PhysicalField& u0, const PhysicalField& u1,
                          const NonlinearitySpec& spec, const ModelParams& params) {
  const Grid& grid = base.grid;
  if (!(u0.grid() == grid) || !(u1.grid() == grid)) {
    throw std::invalid_argument("picard_iterate: data and trajectory live on different grids");
  }
  const std::vector<double>& t = base.times;
  const std::size_t M = t.size();
  if (M == 0 || t[0] != 0.0) throw std::invalid_argument("picard_iterate: mesh must start at t = 0");
  for (std::size_t j = 1; j < M; ++j) {
    if (!(t[j] > t[j - 1])) throw std::invalid_argument("picard_iterate: mesh must be increasing");
  }

  const std::size_t P = grid.size();
  std::vector<SpectralField> source;
  source.reserve(M);
  for (const StatePair& s : base.states) source.push_back(nonlinearity(s, spec));

  const SpectralField f0 = forward_transform(u0);
  const SpectralField f1 = forward_transform(u1);

  // Kernel values G(t_i - t_j), G_t(t_i - t_j) per mode. On a uniform mesh
  // they depend only on the lag i - j.
  const bool uniform = is_uniform(t);
  std::vector<std::vector<double>> lagG, lagGt;
  if (uniform) {
    lagG.assign(M, std::vector<double>(P));
    lagGt.assign(M, std::vector<double>(P));
    for (std::size_t l = 0; l < M; ++l) {
      for (std::size_t i = 0; i < P; ++i) {
        const auto s = propagator(grid.xi2(i), t[l] - t[0], params);
        lagG[l][i] = s.G.real();
        lagGt[l][i] = s.Gt.real();
      }
    }
  }

  Trajectory out{grid, t, {}};
  out.states.reserve(M);
  for (std::size_t m = 0; m < M; ++m) {
    SpectralState y = m == 0 ? SpectralState(f0, f1, 0.0) : linear_solution(f0, f1, t[m], params);
    for (std::size_t j = 0; j + 1 <= m; ++j) {
      // Trapezoid: interval [t_j, t_{j+1}] contributes h/2 at both ends.
      const double h = t[j + 1] - t[j];
      for (std::size_t end : {j, j + 1}) {
        const double w = 0.5 * h;
        if (uniform) {
          const auto& kg = lagG[m - end];
          const auto& kgt = lagGt[m - end];
          for (std::size_t i = 0; i < P; ++i) {
            y.u[i] += w * kg[i] * source[end][i];
            y.ut[i] += w * kgt[i] * source[end][i];
          }
        } else {
          for (std::size_t i = 0; i < P; ++i) {
            const auto s = propagator(grid.xi2(i), t[m] - t[end], params);
            y.u[i] += w * s.G.real() * source[end][i];
            y.ut[i] += w * s.Gt.real() * source[end][i];
          }
        }
      }
    }
    y.t = t[m];
    out.states.push_back(m == 0 ? StatePair(u0, u1, 0.0) : to_physical(y));
  }
  return out;
}

}  // namespace dbq
