#pragma once

// Pointwise Fourier symbols of the linear damped Boussinesq operator
//
//     u_tt - Lap u + Lap^2 u + alpha Lap u_t + Lap^2 u_t = 0,
//
// which in Fourier space is the per-mode oscillator
//
//     u^_tt + b(r) u^_t + c(r) u^ = 0,   b = r^4 - alpha r^2,  c = r^2 + r^4,
//
// with r = |xi|. All functions take xi2 = r^2.

#include <complex>

namespace dbq {

using Complex = std::complex<double>;

struct ModelParams {
  double alpha = -1.0;
  double beta = 1.0;
  static constexpr double gamma = 1.0;

  /// Throws std::invalid_argument unless alpha <= -1 and beta > 0.
  void validate() const;
};

/// Damping coefficient b(r) = r^4 - alpha r^2.
inline double damping(double xi2, const ModelParams& p) { return xi2 * xi2 - p.alpha * xi2; }
/// Stiffness coefficient c(r) = r^2 + r^4.
inline double stiffness(double xi2) { return xi2 + xi2 * xi2; }

struct RootPair {
  Complex lambda_plus;
  Complex lambda_minus;
  double discriminant = 0.0;  // b^2 - 4c
  bool degenerate = false;    // |lambda_+ - lambda_-| < 1e-6 max(1, |lambda_+|)
};

/// Characteristic roots of lambda^2 + b lambda + c = 0. lambda_+ carries the
/// nonnegative imaginary part; for real roots lambda_+ is the slower one.
RootPair roots(double xi2, const ModelParams& params);

struct PropagatorSymbols {
  Complex G, H, Gt, Ht;
};

/// G^, H^ and their time derivatives at (xi2, t). Uses the divided-difference
/// form G = t e^{lambda_+ t} phi1(-(lambda_+ - lambda_-) t), which reduces to
/// the confluent limit t e^{lambda t} at a double root.
PropagatorSymbols propagator(double xi2, double t, const ModelParams& params);
PropagatorSymbols propagator(const RootPair& r, double xi2, double t);

/// phi1(z) = (e^z - 1) / z, with its Taylor series for |z| < 1e-3.
Complex phi1(Complex z);
/// Plain (e^z - 1)/z through a complex expm1; used to test the series branch.
Complex phi1_direct(Complex z);

struct ProfileSymbols {
  double G0;  // e^{alpha r^2 t / 2} sin(r t) / r
  double H0;  // e^{alpha r^2 t / 2} cos(r t)
};

ProfileSymbols profile_symbols(double xi2, double t, const ModelParams& params);

/// omega(r) = r^2 / (1 + r^2).
double omega(double xi2);

struct EnergyValues {
  double E;
  double F;
  double E0;
};

/// Per-mode energy E, its dissipation F (dE/dt + F = 0 along solutions) and
/// the comparison quantity E0 = |u_t|^2 + r^2 (1 + r^2) |u|^2.
EnergyValues energy_functionals(double xi2, Complex u_hat, Complex ut_hat,
                                const ModelParams& params);

}  // namespace dbq
