#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dbq/spectral_core.hpp"

namespace dbq {
namespace {

double plancherel(const SpectralField& F, int k) {
  const Grid& grid = F.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = k == 0 ? 1.0 : std::pow(grid.xi2(i), k);
    sum += w * std::norm(F[i]);
  }
  return std::sqrt(sum * grid.dual_cell_volume());
}

double negative_homogeneous(const SpectralField& F) {
  const Grid& grid = F.grid();
  const double l2 = plancherel(F, 0);
  // The xi = 0 mode sits at storage index 0.
  const double mean_part = std::abs(F[0]) * std::sqrt(grid.dual_cell_volume());
  if (mean_part > 1e-10 * l2) {
    throw std::domain_error("not in homogeneous negative space: field has non-negligible mean");
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) sum += std::norm(F[i]) / grid.xi2(i);
  return std::sqrt(sum * grid.dual_cell_volume());
}

}  // namespace

double norm(const PhysicalField& f, const NormSpec& spec) {
  const Grid& grid = f.grid();
  switch (spec.kind) {
    case NormSpec::Kind::Linf: {
      double m = 0.0;
      for (double v : f.values()) m = std::max(m, std::abs(v));
      return m;
    }
    case NormSpec::Kind::Lp: {
      if (spec.p == 1.0) {
        double s = 0.0;
        for (double v : f.values()) s += std::abs(v);
        return s * grid.cell_volume();
      }
      if (spec.p == 2.0) {
        double s = 0.0;
        for (double v : f.values()) s += v * v;
        return std::sqrt(s * grid.cell_volume());
      }
      if (std::isinf(spec.p)) return norm(f, NormSpec::linf());
      throw std::invalid_argument("only p in {1, 2, inf} Lebesgue norms are supported");
    }
    case NormSpec::Kind::SobolevDeriv:
    case NormSpec::Kind::NegHomogeneousL2:
      return norm(forward_transform(f), spec);
  }
  throw std::invalid_argument("unknown norm kind");
}

double norm(const SpectralField& F, const NormSpec& spec) {
  switch (spec.kind) {
    case NormSpec::Kind::SobolevDeriv:
      if (spec.k < 0) throw std::invalid_argument("derivative order must be >= 0");
      return plancherel(F, spec.k);
    case NormSpec::Kind::NegHomogeneousL2:
      return negative_homogeneous(F);
    case NormSpec::Kind::Lp:
      if (spec.p == 2.0) return plancherel(F, 0);
      return norm(inverse_transform(F), spec);
    case NormSpec::Kind::Linf:
      return norm(inverse_transform(F), spec);
  }
  throw std::invalid_argument("unknown norm kind");
}

double sobolev_hs_norm(const SpectralField& F, int s) {
  const Grid& grid = F.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sum += std::pow(1.0 + grid.xi2(i), s) * std::norm(F[i]);
  }
  return std::sqrt(sum * grid.dual_cell_volume());
}

double sphere_area(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default:
      return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
  }
}

}  // namespace dbq
