#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dbq/analysis.hpp"

namespace dbq {

double ProductSides::ratio() const {
  if (lhs == 0.0 && rhs == 0.0) return 0.0;
  return lhs / rhs;
}

namespace {

// Rectangle-rule sum of squares. Products of two L2 norms are formed as
// sqrt(Sv * Sw) so that ||v||_2 ||v||_2 reproduces sum v^2 bit for bit.
double sum_sq(const PhysicalField& f) {
  double s = 0.0;
  for (double x : f.values()) s += x * x;
  return s * f.grid().cell_volume();
}

double l1_of_square(const PhysicalField& f) {
  double s = 0.0;
  for (double x : f.values()) s += std::abs(x * x);
  return s * f.grid().cell_volume();
}

double linf(const PhysicalField& f) { return norm(f, NormSpec::linf()); }
double grad_l2(const PhysicalField& f) { return norm(f, NormSpec::sobolev(1)); }

PhysicalField combine(const PhysicalField& a, const PhysicalField& b, double sb) {
  PhysicalField out(a.grid());
  for (std::size_t i = 0; i < a.grid().size(); ++i) out[i] = a[i] + sb * b[i];
  return out;
}

PhysicalField square(const PhysicalField& a) {
  PhysicalField out(a.grid());
  for (std::size_t i = 0; i < a.grid().size(); ++i) out[i] = a[i] * a[i];
  return out;
}

}  // namespace

ProductEstimate product_estimate_check(const PhysicalField& v, const PhysicalField& w, int m) {
  if (!(v.grid() == w.grid())) throw std::invalid_argument("product_estimate_check: fields on different grids");
  const PhysicalField d = combine(v, w, -1.0);
  ProductEstimate out;
  if (m == 0) {
    // (r, p, q) = (1, 2, 2)
    out.single = {l1_of_square(v), std::sqrt(sum_sq(v) * sum_sq(v))};
    const PhysicalField dsq = combine(square(v), square(w), -1.0);
    const double lhs = norm(dsq, NormSpec::lp(1.0));
    const double vw = std::sqrt(sum_sq(v)) + std::sqrt(sum_sq(w));
    const double dd = std::sqrt(sum_sq(d));
    out.difference = {lhs, vw * dd + vw * dd};
  } else if (m == 1) {
    // (r, p, q) = (2, inf, 2)
    out.single = {grad_l2(square(v)), linf(v) * grad_l2(v)};
    const PhysicalField dsq = combine(square(v), square(w), -1.0);
    out.difference = {grad_l2(dsq), (grad_l2(v) + grad_l2(w)) * linf(d) +
                                        (linf(v) + linf(w)) * grad_l2(d)};
  } else {
    throw std::invalid_argument("product_estimate_check: m must be 0 or 1");
  }
  return out;
}

double surrogate_data_size(const PhysicalField& u0, const PhysicalField& u1) {
  if (!(u0.grid() == u1.grid())) throw std::invalid_argument("surrogate_data_size: fields on different grids");
  const Grid& grid = u0.grid();
  const int n = grid.dim();
  const int s = std::max(0, n / 2 - 1);

  double negative = 0.0;
  const SpectralField f1 = forward_transform(u1);
  negative = norm(f1, NormSpec::neg_homogeneous());
  if (n == 1) {
    // L1 norm of the running integral of u1 from the left edge.
    double acc = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      acc += u1[i] * grid.dx();
      l1 += std::abs(acc) * grid.dx();
    }
    negative = std::max(negative, l1);
  }
  return norm(u0, NormSpec::lp(1.0)) + negative + sobolev_hs_norm(forward_transform(u0), s + 2) +
         sobolev_hs_norm(f1, s);
}

XNormProxy x_norm_proxy(const Trajectory& run) {
  if (run.times.empty()) throw std::invalid_argument("x_norm_proxy: empty run");
  const double n = run.grid.dim();
  XNormProxy out;
  for (std::size_t j = 0; j < run.times.size(); ++j) {
    const double t = run.times[j];
    double value = 0.0;
    for (int k = 0; k <= 2; ++k) {
      const double weight = std::pow(1.0 + t, n / 4.0 + k / 2.0);
      const double nk = k == 0 ? norm(run.states[j].u, NormSpec::l2()) : norm(run.states[j].u, NormSpec::sobolev(k));
      value = std::max(value, weight * nk);
    }
    if (j == 0) out.initial = value;
    if (value > out.sup) {
      out.sup = value;
      out.sup_time = t;
    }
  }
  return out;
}

}  // namespace dbq
