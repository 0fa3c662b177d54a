#pragma once

// Periodic grids, Fourier transforms and norms.
//
// Fourier normalization (used by every Plancherel-based quantity in the
// library): the coefficient attached to the lattice frequency xi_m is
//
//     c_m = (2 pi)^(-n/2) * (L/N)^n * sum_j u(x_j) exp(-i xi_m . x_j),
//
// with sample points x_j = -L/2 + j L/N. This is the rectangle-rule
// approximation of the unitary transform  u^(xi) = (2 pi)^(-n/2) int u e^{-ix.xi} dx,
// so that
//
//     ||u||_{L2}^2 = (L/N)^n sum_j |u_j|^2 = (2 pi / L)^n sum_m |c_m|^2
//
// holds exactly (discrete Parseval), and c_m approximates u^(xi_m) for data
// whose support fits in the box. Radial continuum norms use the same
// convention: ||u||^2 = |S^{n-1}| int_0^inf r^{n-1} |u^(r)|^2 dr.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace dbq {

using Complex = std::complex<double>;

/// Periodic box [-L/2, L/2)^n sampled with N points per axis.
///
/// Cheap to copy: the frequency tables are shared and immutable.
class Grid {
 public:
  int dim() const { return data_->dim; }
  double length() const { return data_->length; }
  int points() const { return data_->points; }
  std::size_t size() const { return data_->size; }

  double dx() const { return data_->length / data_->points; }
  /// Lattice step 2 pi / L of the frequency lattice.
  double dxi() const;
  double cell_volume() const;
  double dual_cell_volume() const;

  /// Signed wavenumber m in [-N/2, N/2) for a storage index in [0, N).
  int wavenumber(int index) const;
  std::array<int, 3> multi_index(std::size_t flat) const;
  /// Physical coordinate of sample `index` along one axis.
  double coordinate(int index) const;

  /// |xi|^2 for every lattice point, in storage order.
  std::span<const double> xi2() const { return data_->xi2; }
  double xi2(std::size_t flat) const { return data_->xi2[flat]; }
  /// Storage index of -xi. The Nyquist plane maps to itself.
  std::size_t mirror(std::size_t flat) const { return data_->mirror[flat]; }
  /// True when every |m_axis| < N/3 (the modes kept by the 2/3 rule).
  bool in_dealias_band(std::size_t flat) const { return data_->dealias[flat] != 0; }
  /// (-1)^(m_1+...+m_n), the phase of the centred sample origin.
  double phase(std::size_t flat) const { return data_->phase[flat]; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.data_ == b.data_ ||
           (a.dim() == b.dim() && a.points() == b.points() && a.length() == b.length());
  }

 private:
  struct Data {
    int dim;
    double length;
    int points;
    std::size_t size;
    std::vector<double> xi2;
    std::vector<std::size_t> mirror;
    std::vector<unsigned char> dealias;
    std::vector<double> phase;
  };
  explicit Grid(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  friend Grid make_grid(int n, double L, int N);

  std::shared_ptr<const Data> data_;
};

/// Throws std::invalid_argument unless 1 <= n <= 3, L > 0, N even and N >= 8.
Grid make_grid(int n, double L, int N);

/// Real samples on a grid, row-major with the last axis fastest.
class PhysicalField {
 public:
  explicit PhysicalField(Grid grid);
  PhysicalField(Grid grid, std::vector<double> values);

  /// Samples f(x) at every lattice point.
  static PhysicalField sample(const Grid& grid,
                              const std::function<double(const std::array<double, 3>&)>& f);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Fourier coefficients on the grid's frequency lattice, FFT storage order.
class SpectralField {
 public:
  explicit SpectralField(Grid grid);
  SpectralField(Grid grid, std::vector<Complex> coeffs);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  const Complex& operator[](std::size_t i) const { return coeffs_[i]; }
  Complex& operator[](std::size_t i) { return coeffs_[i]; }

  /// max |c(-xi) - conj c(xi)| relative to max |c|.
  double hermitian_defect() const;

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

SpectralField forward_transform(const PhysicalField& f);
/// Throws std::domain_error when the coefficients are not Hermitian
/// (relative defect above 1e-9), i.e. would not produce a real field.
PhysicalField inverse_transform(const SpectralField& F);

/// Applies a real multiplier m(|xi|^2) mode-wise.
SpectralField apply_multiplier(const SpectralField& F, const std::function<double(double)>& m);

struct NormSpec {
  enum class Kind { Lp, SobolevDeriv, NegHomogeneousL2, Linf };

  Kind kind = Kind::Lp;
  double p = 2.0;
  int k = 0;

  static NormSpec lp(double p) { return {Kind::Lp, p, 0}; }
  static NormSpec l2() { return {Kind::Lp, 2.0, 0}; }
  static NormSpec linf() { return {Kind::Linf, 0.0, 0}; }
  /// || |grad|^k f ||_{L2} via Plancherel.
  static NormSpec sobolev(int k) { return {Kind::SobolevDeriv, 2.0, k}; }
  static NormSpec neg_homogeneous() { return {Kind::NegHomogeneousL2, 2.0, -1}; }
};

/// Lp (p in {1, 2}) and Linf use the rectangle rule on samples; the
/// Sobolev and negative homogeneous norms use Plancherel with |xi|^k weights.
double norm(const PhysicalField& f, const NormSpec& spec);
double norm(const SpectralField& F, const NormSpec& spec);

/// sqrt(sum (1+|xi|^2)^s |c|^2 dxi^n), the inhomogeneous H^s norm.
double sobolev_hs_norm(const SpectralField& F, int s);

/// Surface measure |S^{n-1}| of the unit sphere: 2, 2 pi, 4 pi.
double sphere_area(int n);

struct RadialQuadratureOptions {
  double cutoff = 12.0;
  /// Geometric panels between cutoff * 1e-8 and cutoff.
  int panels = 48;
  double rel_tol = 1e-11;
  /// Extra panel boundaries (discontinuities, known scales).
  std::vector<double> breakpoints;
  int max_subdivisions = 200000;
};

/// Adaptive Gauss-Kronrod integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, int max_subdivisions = 100000);

/// Integrates |S^{n-1}| int_0^cutoff r^(2k+n-1) |profile(r)|^2 dr and returns
/// its square root, i.e. the L2 norm of |grad|^k u for a radial spectrum.
/// Throws std::domain_error when the profile is not finite somewhere.
double radial_norm_quadrature(const std::function<double(double)>& profile, int k, int n,
                              const RadialQuadratureOptions& options = {});

/// Same integral with the squared profile supplied directly (lets callers
/// form |a + b|^2 without cancellation).
double radial_norm_quadrature_sq(const std::function<double(double)>& profile_sq, int k, int n,
                                 const RadialQuadratureOptions& options = {});

}  // namespace dbq
