#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dbq/spectral_core.hpp"

namespace dbq {

Grid make_grid(int n, double L, int N) {
  if (n < 1 || n > 3) {
    throw std::invalid_argument("grid dimension must be 1, 2 or 3, got " + std::to_string(n));
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw std::invalid_argument("box length must be positive and finite");
  }
  if (N < 8 || N % 2 != 0) {
    throw std::invalid_argument("resolution must be even and >= 8, got " + std::to_string(N));
  }

  auto data = std::make_shared<Grid::Data>();
  data->dim = n;
  data->length = L;
  data->points = N;
  std::size_t size = 1;
  for (int a = 0; a < n; ++a) size *= static_cast<std::size_t>(N);
  data->size = size;
  data->xi2.resize(size);
  data->mirror.resize(size);
  data->dealias.resize(size);
  data->phase.resize(size);

  const double dxi = 2.0 * std::numbers::pi / L;
  auto signed_m = [N](int i) { return i < N / 2 ? i : i - N; };
  auto mirror_index = [N](int i) { return i == 0 ? 0 : N - i; };

  for (std::size_t flat = 0; flat < size; ++flat) {
    std::size_t rest = flat;
    std::size_t mirror = 0;
    std::size_t stride = 1;
    double k2 = 0.0;
    int msum = 0;
    bool keep = true;
    for (int a = n - 1; a >= 0; --a) {
      const int i = static_cast<int>(rest % N);
      rest /= N;
      const int m = signed_m(i);
      k2 += static_cast<double>(m) * m;
      msum += m;
      keep = keep && (3 * std::abs(m) < N);
      mirror += static_cast<std::size_t>(mirror_index(i)) * stride;
      stride *= N;
    }
    data->xi2[flat] = k2 * dxi * dxi;
    data->mirror[flat] = mirror;
    data->dealias[flat] = keep ? 1 : 0;
    data->phase[flat] = (msum % 2 == 0) ? 1.0 : -1.0;
  }
  return Grid(std::move(data));
}

double Grid::dxi() const { return 2.0 * std::numbers::pi / data_->length; }

double Grid::cell_volume() const { return std::pow(dx(), dim()); }

double Grid::dual_cell_volume() const { return std::pow(dxi(), dim()); }

int Grid::wavenumber(int index) const {
  const int N = points();
  return index < N / 2 ? index : index - N;
}

std::array<int, 3> Grid::multi_index(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  const auto N = static_cast<std::size_t>(points());
  for (int a = dim() - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % N);
    flat /= N;
  }
  return idx;
}

double Grid::coordinate(int index) const { return -0.5 * length() + index * dx(); }

}  // namespace dbq
