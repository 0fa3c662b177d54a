#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dbq/linear_solver.hpp"
#include "dbq/nonlinear_solver.hpp"

namespace dbq {

enum class SeriesSource { Linear, Nonlinear, ProfileGap, NonlinearMinusLinear };

std::string_view to_string(SeriesSource s);

/// Time series of one norm. Times strictly increasing, values finite and
/// nonnegative (checked by validate()).
struct DecaySeries {
  std::vector<double> times;
  std::vector<double> values;
  int k = 0;
  std::string norm_kind = "L2";
  SeriesSource source = SeriesSource::Linear;

  void validate() const;
  bool is_zero() const;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t points = 0;
};

/// Least squares of log(value) against log(1 + t) over the samples with
/// t in [t_lo, t_hi]. Needs at least 6 samples in the window; throws
/// std::domain_error("cannot take log") on a nonpositive value there.
RateFit fit_rate(const DecaySeries& series, double t_lo, double t_hi);

/// Gap correction factor: 1 for n = 1, (1+t)^{-1/2} ln(2+t) for n = 2,
/// (1+t)^{-1/2} for n >= 3.
double eta(double t, int n);

/// ||u(t)|| for each recorded state of a box run: the L2 norm of
/// |grad|^k u for every k in k_list. Requires at least 8 output times.
std::vector<DecaySeries> decay_series(const Trajectory& run, const std::vector<int>& k_list,
                                      SeriesSource source = SeriesSource::Nonlinear);

/// The same from the radial continuum quadrature at the given times.
std::vector<DecaySeries> decay_series(const RadialData& data, int n, const std::vector<double>& times,
                                      const std::vector<int>& k_list, const ModelParams& params,
                                      RadialQuantity which);

/// ||u(t) - v(t)||_{|grad|^k} for two runs on one mesh.
std::vector<DecaySeries> difference_series(const Trajectory& a, const Trajectory& b,
                                           const std::vector<int>& k_list, SeriesSource source);

/// n log-spaced points in [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// t = 0 followed by n - 1 log-spaced points in [1e-3, T].
std::vector<double> time_grid(double T, std::size_t n);

enum class BoundKind { GEnergy, HEnergy, ProfileRemainderG, ProfileRemainderH };

std::string_view to_string(BoundKind k);
BoundKind parse_bound_kind(std::string_view name);

struct CertifyOptions {
  double cap = 1e3;
  /// Frequency limit for the profile remainders.
  double r0 = 0.5;
};

struct BoundCertificate {
  BoundKind kind = BoundKind::GEnergy;
  double sup_ratio = 0.0;  // also the certified constant C
  double fitted_c = 0.0;
  std::string grid_spec;
  bool passed = false;
};

/// Pointwise bound checks over (|xi|, t) grids:
///   GEnergy          |xi|^2(1+|xi|^2)|G|^2 + |G_t|^2               <= C e^{-c omega t}
///   HEnergy          |xi|^2(1+|xi|^2)|H|^2 + |H_t|^2  <= C |xi|^2(1+|xi|^2) e^{-c omega t}
///   ProfileRemainderG |G - G0|                                        <= C e^{-c |xi|^2 t}
///   ProfileRemainderH |H - H0|                                        <= C |xi| e^{-c |xi|^2 t}
/// The profile remainders only use |xi| <= r0. The sup of LHS e^{+c env t}/weight
/// is nondecreasing in c; candidates are tried in descending order and the
/// first one with a finite sup below the cap is returned.
BoundCertificate certify_bound(BoundKind kind, const std::vector<double>& xi_grid,
                               const std::vector<double>& t_grid, std::vector<double> c_candidates,
                               const ModelParams& params, const CertifyOptions& options = {});

/// sup over the grid for one fixed c.
double bound_sup_ratio(BoundKind kind, const std::vector<double>& xi_grid,
                       const std::vector<double>& t_grid, double c, const ModelParams& params,
                       double r0 = 0.5);

struct ProductSides {
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs / rhs, or 0 when both vanish.
  double ratio() const;
};

struct ProductEstimate {
  ProductSides single;      // f(v) = v^2 against ||v||_p ||d^m v||_q
  ProductSides difference;  // f(v) - f(w) against the symmetric difference form
};

/// Product estimates for f(v) = v^2 with derivative order m in {0, 1}:
///   m = 0:  ||v^2||_1          <= C ||v||_2 ||v||_2
///   m = 1:  || |grad| v^2 ||_2 <= C ||v||_inf || |grad| v ||_2
/// and for differences
///   ||d^m (v^2 - w^2)||_r <= C [ (||d^m v||_q + ||d^m w||_q) ||v - w||_p
///                                 + (||v||_p + ||w||_p) ||d^m (v - w)||_q ].
ProductEstimate product_estimate_check(const PhysicalField& v, const PhysicalField& w, int m);

/// Computable stand-in for the data size: ||u0||_1 + max(||u1||_{W^{-1,2}},
/// ||antiderivative of u1||_1 in 1D) + ||u0||_{H^{s+2}} + ||u1||_{H^s} with
/// s = max(0, floor(n/2) - 1).
double surrogate_data_size(const PhysicalField& u0, const PhysicalField& u1);

struct XNormProxy {
  double initial = 0.0;
  double sup = 0.0;
  double sup_time = 0.0;
};

/// sup_t max_{k <= 2} (1+t)^{n/4+k/2} || |grad|^k u(t) ||_2 over the run.
XNormProxy x_norm_proxy(const Trajectory& run);

}  // namespace dbq
