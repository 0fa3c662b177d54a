#pragma once

// Full Cauchy problem
//
//     u_tt - Lap u + Lap^2 u + alpha Lap u_t + Lap^2 u_t = Lap S(u, u_t)
//
// with S built from the nonlinearities f, g. Three independent routes:
// an ETD2 exponential integrator built on the closed-form symbols, the
// Picard map of the Duhamel formula, and a Dormand-Prince method-of-lines
// reference that never touches the symbol engine.

#include <string_view>
#include <vector>

#include "dbq/linear_solver.hpp"

namespace dbq {

enum class Power { None, Quadratic, Cubic };

/// Which combination of f and g forms the source S.
///   Duhamel        : S = f(u) + beta g(u_t)   (default)
///   ContractionMap : S = f(u) - beta g(u_t)
///   SwappedRoles   : S = beta f(u_t) + g(u)
enum class SourceConvention { Duhamel, ContractionMap, SwappedRoles };

struct NonlinearitySpec {
  Power f = Power::Quadratic;
  Power g = Power::Quadratic;
  double beta = 1.0;
  SourceConvention convention = SourceConvention::Duhamel;

  bool is_linear() const { return f == Power::None && g == Power::None; }
  static NonlinearitySpec linear() { return {Power::None, Power::None, 1.0, SourceConvention::Duhamel}; }
};

Power parse_power(std::string_view name);
std::string_view to_string(Power p);
SourceConvention parse_convention(std::string_view name);
std::string_view to_string(SourceConvention c);

/// Fourier coefficients of Lap S(u, u_t): products formed in physical space
/// from 2/3-rule truncated inputs, truncated again, then multiplied by -|xi|^2.
/// Throws BlowUpError when a product overflows.
SpectralField nonlinearity(const SpectralState& state, const NonlinearitySpec& spec);
SpectralField nonlinearity(const StatePair& state, const NonlinearitySpec& spec);

/// Per-mode exponential-integrator data for one step of size dt.
struct DuhamelWeights {
  double G, H, Gt, Ht;  // homogeneous propagation over dt
  double W0, W1;        // int_0^dt G(s) ds,  int_0^dt G(s)(dt - s)/dt ds
  double V0, V1;        // the same integrals of G_t
};

/// Closed forms from the roots; a Taylor series in dt replaces them when
/// max |lambda| dt <= 0.5 (including the double root at xi = 0).
DuhamelWeights duhamel_weights(double xi2, double dt, const ModelParams& params);

/// ETD2 (exponential Runge-Kutta, Cox-Matthews) stepper with weights cached
/// for one grid and step size.
class DuhamelStepper {
 public:
  DuhamelStepper(Grid grid, double dt, ModelParams params, NonlinearitySpec spec);

  SpectralState step(const SpectralState& state) const;
  double dt() const { return dt_; }

 private:
  Grid grid_;
  double dt_;
  ModelParams params_;
  NonlinearitySpec spec_;
  std::vector<DuhamelWeights> weights_;
};

StatePair step_duhamel(const StatePair& state, double dt, const NonlinearitySpec& spec,
                       const ModelParams& params);

struct Trajectory {
  Grid grid;
  std::vector<double> times;
  std::vector<StatePair> states;
};

struct SolveOptions {
  /// Spacing of recorded states; must be a whole multiple of dt.
  double output_every = 1.0;
  /// Abort when ||u||_2 + ||u_t||_2 exceeds this multiple of its initial value.
  double blowup_factor = 1e6;
};

/// Repeated ETD2 steps from (u0, u1) to T. Throws BlowUpError carrying the
/// offending time when the guard trips.
Trajectory solve(const PhysicalField& u0, const PhysicalField& u1, double T, double dt,
                 const NonlinearitySpec& spec, const ModelParams& params,
                 const SolveOptions& options = {});

/// The exact linear trajectory on the mesh `times`.
Trajectory linear_trajectory(const PhysicalField& u0, const PhysicalField& u1,
                             const std::vector<double>& times, const ModelParams& params);

/// One application of the Duhamel map to `base`: the linear part by the
/// closed-form symbols, the memory integral by the composite trapezoid rule
/// over the stored states. Returns a trajectory on the same mesh.
Trajectory picard_iterate(const Trajectory& base, const PhysicalField& u0, const PhysicalField& u1,
                          const NonlinearitySpec& spec, const ModelParams& params);

struct ReferenceOptions {
  double output_every = 1.0;
  long max_steps = 20'000'000;
};

/// Method-of-lines oracle: the spectral ODE system integrated by an adaptive
/// Dormand-Prince 5(4) pair with absolute and relative tolerance `tol`.
/// Throws ConvergenceError("stiffness limit; reduce N or T") when the step
/// size underflows.
Trajectory reference_solve(const PhysicalField& u0, const PhysicalField& u1, double T,
                           const NonlinearitySpec& spec, const ModelParams& params, double tol,
                           const ReferenceOptions& options = {});

/// max over recorded states of the L2 distance between two trajectories on
/// one mesh.
double max_l2_distance(const Trajectory& a, const Trajectory& b);

}  // namespace dbq
