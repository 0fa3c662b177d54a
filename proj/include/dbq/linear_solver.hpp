#pragma once

#include <functional>
#include <vector>

#include "dbq/spectral_core.hpp"
#include "dbq/symbols.hpp"

namespace dbq {

/// (u, u_t) at time t. Both fields live on one grid.
struct StatePair {
  PhysicalField u;
  PhysicalField ut;
  double t = 0.0;

  StatePair(PhysicalField u_, PhysicalField ut_, double t_ = 0.0);
  const Grid& grid() const { return u.grid(); }
};

/// Spectral counterpart used inside the solvers.
struct SpectralState {
  SpectralField u;
  SpectralField ut;
  double t = 0.0;

  SpectralState(SpectralField u_, SpectralField ut_, double t_ = 0.0);
  const Grid& grid() const { return u.grid(); }
};

SpectralState to_spectral(const StatePair& s);
StatePair to_physical(const SpectralState& s);

/// Exact linear solution u_L(t) = G(t)*u1 + H(t)*u0 and its time derivative,
/// evaluated mode-wise in one shot. Throws std::invalid_argument on grid
/// mismatch or t < 0.
StatePair linear_solution(const PhysicalField& u0, const PhysicalField& u1, double t,
                          const ModelParams& params);
SpectralState linear_solution(const SpectralField& u0, const SpectralField& u1, double t,
                              const ModelParams& params);

/// Asymptotic profile G0(t)*u1 + H0(t)*u0 (u only).
PhysicalField profile_solution(const PhysicalField& u0, const PhysicalField& u1, double t,
                               const ModelParams& params);

/// Sum over the lattice of the per-mode energy E, weighted by the dual cell.
double spectral_energy(const SpectralState& s, const ModelParams& params);

enum class DataClass { L1Type, L2Type };

/// Radially symmetric data given through their Fourier profiles.
struct RadialData {
  std::function<double(double)> u0_hat;
  std::function<double(double)> u1_hat;
  DataClass class_tag = DataClass::L1Type;
  /// |xi| beyond which both profiles are negligible.
  double cutoff = 12.0;
  /// Known discontinuities of the profiles (e.g. a spectral cutoff at 1).
  std::vector<double> breakpoints;
};

/// u0 = amplitude exp(-|x|^2 / (2 sigma^2)), u1 = 0.
RadialData gaussian_radial(int n, double sigma = 1.0, double amplitude = 1.0);
/// u0^(r) = amplitude r^{-(n - eps)/2} 1[r <= 1], u1 = 0: in L2 but not L1.
RadialData l2_type_radial(int n, double eps = 0.2, double amplitude = 1.0);

enum class RadialQuantity { Linear, Profile, Gap };

/// || |grad|^k w(t) ||_{L2} as a continuum radial integral, for w = u_L,
/// the profile, or u_L minus the profile (difference taken on the symbols).
/// The cutoff is doubled until the value is stable; throws
/// ConvergenceError after three doublings without agreement.
double linear_norm_radial(const RadialData& data, double t, int k, int n,
                          const ModelParams& params, RadialQuantity which);

}  // namespace dbq
