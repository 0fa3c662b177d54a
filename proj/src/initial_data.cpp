#include "dbq/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dbq {

double gaussian_support_radius(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian width must be positive");
  return sigma * std::sqrt(2.0 * std::log(1e8));
}

double min_box_length(double R0, double T) { return 2.0 * (R0 + 1.2 * T); }

PhysicalField gaussian_field(const Grid& grid, double sigma, double amplitude) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian width must be positive");
  const double inv = 1.0 / (2.0 * sigma * sigma);
  return PhysicalField::sample(grid, [&](const std::array<double, 3>& x) {
    return amplitude * std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * inv);
  });
}

PhysicalField random_smooth_field(const Grid& grid, UniformSource& rng, int band) {
  if (band < 1 || 2 * band >= grid.points()) {
    throw std::invalid_argument("random_smooth_field: band must lie in [1, N/2)");
  }
  SpectralField F(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.multi_index(i);
    bool inside = true;
    double m2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const int m = grid.wavenumber(idx[a]);
      inside = inside && std::abs(m) <= band;
      m2 += static_cast<double>(m) * m;
    }
    if (!inside) continue;
    const double amp = 1.0 / (1.0 + m2);
    const double phase = rng.next(0.0, 2.0 * std::numbers::pi);
    F[i] = std::polar(amp * rng.next(0.2, 1.0), phase);
  }
  // Symmetrize so the field is real.
  SpectralField H(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    H[i] = 0.5 * (F[i] + std::conj(F[grid.mirror(i)]));
  }
  PhysicalField f = inverse_transform(H);
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  if (m > 0.0) {
    for (double& v : f.values()) v /= m;
  }
  return f;
}

}  // namespace dbq
