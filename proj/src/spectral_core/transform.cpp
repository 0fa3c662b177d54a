#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "dbq/spectral_core.hpp"

namespace dbq {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int dim, int N, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dim, N, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    int dims[3] = {N, N, N};
    std::size_t size = 1;
    for (int a = 0; a < dim; ++a) size *= static_cast<std::size_t>(N);
    auto* scratch = fftw_alloc_complex(size);
    fftw_plan plan =
        fftw_plan_dft(dim, dims, scratch, scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw std::runtime_error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void execute(const Grid& grid, std::vector<Complex>& data, int sign) {
  fftw_plan plan = PlanCache::instance().get(grid.dim(), grid.points(), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

PhysicalField::PhysicalField(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

PhysicalField::PhysicalField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("physical field size does not match its grid");
  }
}

PhysicalField PhysicalField::sample(const Grid& grid,
                                    const std::function<double(const std::array<double, 3>&)>& f) {
  PhysicalField out(grid);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.multi_index(flat);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(idx[a]);
    out[flat] = f(x);
  }
  return out;
}

bool PhysicalField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

SpectralField::SpectralField(Grid grid) : grid_(std::move(grid)), coeffs_(grid_.size()) {}

SpectralField::SpectralField(Grid grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    throw std::invalid_argument("spectral field size does not match its grid");
  }
}

double SpectralField::hermitian_defect() const {
  double scale = 0.0;
  double defect = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    scale = std::max(scale, std::abs(coeffs_[i]));
    defect = std::max(defect, std::abs(coeffs_[grid_.mirror(i)] - std::conj(coeffs_[i])));
  }
  return scale > 0.0 ? defect / scale : 0.0;
}

SpectralField forward_transform(const PhysicalField& f) {
  const Grid& grid = f.grid();
  if (!f.all_finite()) throw std::domain_error("forward_transform: field has non-finite values");
  std::vector<Complex> data(f.values().begin(), f.values().end());
  execute(grid, data, FFTW_FORWARD);
  const double scale = std::pow(2.0 * std::numbers::pi, -0.5 * grid.dim()) * grid.cell_volume();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= scale * grid.phase(i);
  return SpectralField(grid, std::move(data));
}

PhysicalField inverse_transform(const SpectralField& F) {
  const Grid& grid = F.grid();
  if (F.hermitian_defect() > 1e-9) {
    throw std::domain_error("inverse_transform: coefficients are not Hermitian-symmetric");
  }
  std::vector<Complex> data(F.coeffs().begin(), F.coeffs().end());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= grid.phase(i);
  execute(grid, data, FFTW_BACKWARD);
  const double scale = std::pow(2.0 * std::numbers::pi, 0.5 * grid.dim()) /
                       std::pow(grid.length(), grid.dim());
  std::vector<double> values(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) values[i] = data[i].real() * scale;
  PhysicalField out(grid, std::move(values));
  if (!out.all_finite()) throw std::domain_error("inverse_transform: non-finite result");
  return out;
}

SpectralField apply_multiplier(const SpectralField& F, const std::function<double(double)>& m) {
  SpectralField out = F;
  const Grid& grid = F.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] *= m(grid.xi2(i));
  return out;
}

}  // namespace dbq
