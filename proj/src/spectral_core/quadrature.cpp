#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "dbq/errors.hpp"
#include "dbq/spectral_core.hpp"

namespace dbq {
namespace {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK qk15 abscissae).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error, abs_value;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  double kabs = std::abs(k);
  for (int j = 0; j < 7; ++j) {
    const double f1 = f(c - h * kXgk[j]);
    const double f2 = f(c + h * kXgk[j]);
    k += kWgk[j] * (f1 + f2);
    kabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, k * h, std::abs((k - g) * h), kabs * std::abs(h)};
}

double adaptive(const std::function<double(double)>& f, const std::vector<double>& edges,
                double rel_tol, double abs_tol, int max_subdivisions) {
  std::priority_queue<Segment> heap;
  double total = 0.0, error = 0.0, total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) continue;
    Segment s = kronrod(f, edges[i], edges[i + 1]);
    total += s.value;
    error += s.error;
    total_abs += s.abs_value;
    heap.push(s);
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  int splits = 0;
  while (!heap.empty()) {
    const double target = std::max({rel_tol * std::abs(total), abs_tol, 50.0 * eps * total_abs});
    if (error <= target) return total;
    if (splits >= max_subdivisions) {
      throw ConvergenceError("adaptive quadrature did not reach its tolerance");
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval at floating-point resolution; accept its contribution as is.
      error -= worst.error;
      continue;
    }
    Segment left = kronrod(f, worst.a, mid);
    Segment right = kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  return total;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 int max_subdivisions) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, rel_tol, max_subdivisions);
  return adaptive(f, {a, b}, rel_tol, 0.0, max_subdivisions);
}

double radial_norm_quadrature_sq(const std::function<double(double)>& profile_sq, int k, int n,
                                 const RadialQuadratureOptions& options) {
  if (k < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(options.cutoff > 0.0)) throw std::invalid_argument("cutoff must be positive");

  const int power = 2 * k + n - 1;
  auto integrand = [&](double r) {
    const double v = profile_sq(r);
    if (!std::isfinite(v)) throw std::domain_error("radial profile is not finite");
    return (power == 0 ? 1.0 : std::pow(r, power)) * v;
  };

  const double cutoff = options.cutoff;
  const double inner = cutoff * 1e-8;
  std::vector<double> edges;
  edges.push_back(inner);
  const int panels = std::max(1, options.panels);
  for (int i = 1; i <= panels; ++i) {
    edges.push_back(inner * std::pow(cutoff / inner, static_cast<double>(i) / panels));
  }
  edges.back() = cutoff;
  for (double b : options.breakpoints) {
    if (b > inner && b < cutoff) edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  // Innermost panel [0, inner] with r = inner * u^8, which tames integrable
  // algebraic singularities at the origin.
  auto inner_integrand = [&](double u) {
    const double u7 = std::pow(u, 7);
    return integrand(inner * u7 * u) * 8.0 * inner * u7;
  };
  // The head is judged against the body so that rounding noise in a
  // negligible head cannot stall refinement.
  const double body = adaptive(integrand, edges, options.rel_tol, 0.0, options.max_subdivisions);
  const double head = adaptive(inner_integrand, {0.0, 0.5, 1.0}, options.rel_tol,
                               options.rel_tol * std::abs(body), options.max_subdivisions);
  const double value = sphere_area(n) * (head + body);
  return std::sqrt(std::max(0.0, value));
}

double radial_norm_quadrature(const std::function<double(double)>& profile, int k, int n,
                              const RadialQuadratureOptions& options) {
  return radial_norm_quadrature_sq(
      [&](double r) {
        const double p = profile(r);
        return p * p;
      },
      k, n, options);
}

}  // namespace dbq
