#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dbq/analysis.hpp"

namespace dbq {

std::string_view to_string(BoundKind k) {
  switch (k) {
    case BoundKind::GEnergy: return "G_energy";
    case BoundKind::HEnergy: return "H_energy";
    case BoundKind::ProfileRemainderG: return "profile_remainder_G";
    case BoundKind::ProfileRemainderH: return "profile_remainder_H";
  }
  return "G_energy";
}

BoundKind parse_bound_kind(std::string_view name) {
  for (BoundKind k : {BoundKind::GEnergy, BoundKind::HEnergy, BoundKind::ProfileRemainderG,
                      BoundKind::ProfileRemainderH}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown bound kind '" + std::string(name) + "'");
}

namespace {

bool is_profile(BoundKind k) {
  return k == BoundKind::ProfileRemainderG || k == BoundKind::ProfileRemainderH;
}

// log(LHS / weight) and the envelope exponent env * t at every grid point.
struct Samples {
  std::vector<double> log_ratio;
  std::vector<double> env_t;
};

Samples sample(BoundKind kind, const std::vector<double>& xi_grid, const std::vector<double>& t_grid,
               const ModelParams& params, double r0) {
  if (xi_grid.empty() || t_grid.empty()) throw std::invalid_argument("certify_bound: empty grid");
  Samples s;
  for (double r : xi_grid) {
    if (!(r > 0.0)) throw std::invalid_argument("certify_bound: |xi| grid must be positive");
    if (is_profile(kind) && r > r0) continue;
    const double xi2 = r * r;
    const RootPair rp = roots(xi2, params);
    const double energy_weight = xi2 * (1.0 + xi2);
    const double env = is_profile(kind) ? xi2 : omega(xi2);
    for (double t : t_grid) {
      if (!(t >= 0.0)) throw std::invalid_argument("certify_bound: times must be nonnegative");
      const PropagatorSymbols p = propagator(rp, xi2, t);
      double lhs = 0.0, weight = 1.0;
      switch (kind) {
        case BoundKind::GEnergy:
          lhs = energy_weight * std::norm(p.G) + std::norm(p.Gt);
          break;
        case BoundKind::HEnergy:
          lhs = energy_weight * std::norm(p.H) + std::norm(p.Ht);
          weight = energy_weight;
          break;
        case BoundKind::ProfileRemainderG:
          lhs = std::abs(p.G.real() - profile_symbols(xi2, t, params).G0);
          break;
        case BoundKind::ProfileRemainderH:
          lhs = std::abs(p.H.real() - profile_symbols(xi2, t, params).H0);
          weight = r;
          break;
      }
      s.log_ratio.push_back(std::log(lhs) - std::log(weight));
      s.env_t.push_back(env * t);
    }
  }
  if (s.log_ratio.empty()) throw std::invalid_argument("certify_bound: no |xi| grid point inside r0");
  return s;
}

double sup_for(const Samples& s, double c) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.log_ratio.size(); ++i) {
    best = std::max(best, s.log_ratio[i] + c * s.env_t[i]);
  }
  return std::exp(best);
}

std::string describe(BoundKind kind, const std::vector<double>& xi, const std::vector<double>& t, double r0) {
  const auto [xlo, xhi] = std::minmax_element(xi.begin(), xi.end());
  const auto [tlo, thi] = std::minmax_element(t.begin(), t.end());
  std::ostringstream os;
  os << "xi: " << xi.size() << " points in [" << *xlo << ", " << *xhi << "]; t: " << t.size()
     << " points in [" << *tlo << ", " << *thi << "]";
  if (is_profile(kind)) os << "; |xi| <= " << r0;
  return os.str();
}

}  // namespace

double bound_sup_ratio(BoundKind kind, const std::vector<double>& xi_grid,
                       const std::vector<double>& t_grid, double c, const ModelParams& params,
                       double r0) {
  return sup_for(sample(kind, xi_grid, t_grid, params, r0), c);
}

BoundCertificate certify_bound(BoundKind kind, const std::vector<double>& xi_grid,
                               const std::vector<double>& t_grid, std::vector<double> c_candidates,
                               const ModelParams& params, const CertifyOptions& options) {
  if (c_candidates.empty()) throw std::invalid_argument("certify_bound: no candidate rates");
  const Samples s = sample(kind, xi_grid, t_grid, params, options.r0);
  std::sort(c_candidates.begin(), c_candidates.end(), std::greater<>());

  BoundCertificate cert;
  cert.kind = kind;
  cert.grid_spec = describe(kind, xi_grid, t_grid, options.r0);
  for (double c : c_candidates) {
    const double sup = sup_for(s, c);
    if (std::isfinite(sup) && sup <= options.cap) {
      cert.sup_ratio = sup;
      cert.fitted_c = c;
      cert.passed = true;
      return cert;
    }
  }
  // Nothing passed: report the smallest candidate's sup.
  cert.fitted_c = c_candidates.back();
  cert.sup_ratio = sup_for(s, cert.fitted_c);
  cert.passed = false;
  return cert;
}

}  // namespace dbq
