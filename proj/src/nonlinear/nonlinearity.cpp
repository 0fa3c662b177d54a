#include <cmath>
#include <stdexcept>
#include <string>

#include "dbq/errors.hpp"
#include "dbq/nonlinear_solver.hpp"

namespace dbq {
namespace {

double apply(Power p, double v) {
  switch (p) {
    case Power::None: return 0.0;
    case Power::Quadratic: return v * v;
    case Power::Cubic: return v * v * v;
  }
  return 0.0;
}

PhysicalField truncated(const SpectralField& F) {
  SpectralField T = F;
  const Grid& grid = F.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.in_dealias_band(i)) T[i] = 0.0;
  }
  return inverse_transform(T);
}

}  // namespace

Power parse_power(std::string_view name) {
  if (name == "none") return Power::None;
  if (name == "quadratic") return Power::Quadratic;
  if (name == "cubic") return Power::Cubic;
  throw std::invalid_argument("unknown nonlinearity kind '" + std::string(name) + "'");
}

std::string_view to_string(Power p) {
  switch (p) {
    case Power::None: return "none";
    case Power::Quadratic: return "quadratic";
    case Power::Cubic: return "cubic";
  }
  return "none";
}

SourceConvention parse_convention(std::string_view name) {
  if (name == "duhamel") return SourceConvention::Duhamel;
  if (name == "contraction_map") return SourceConvention::ContractionMap;
  if (name == "swapped_roles") return SourceConvention::SwappedRoles;
  throw std::invalid_argument("unknown source convention '" + std::string(name) + "'");
}

std::string_view to_string(SourceConvention c) {
  switch (c) {
    case SourceConvention::Duhamel: return "duhamel";
    case SourceConvention::ContractionMap: return "contraction_map";
    case SourceConvention::SwappedRoles: return "swapped_roles";
  }
  return "duhamel";
}

SpectralField nonlinearity(const SpectralState& state, const NonlinearitySpec& spec) {
  const Grid& grid = state.grid();
  SpectralField out(grid);
  if (spec.is_linear()) return out;

  // Which of u, u_t each power acts on.
  Power on_u = spec.f, on_ut = spec.g;
  double coeff_u = 1.0, coeff_ut = spec.beta;
  switch (spec.convention) {
    case SourceConvention::Duhamel: break;
    case SourceConvention::ContractionMap: coeff_ut = -spec.beta; break;
    case SourceConvention::SwappedRoles:
      on_u = spec.g;
      on_ut = spec.f;
      coeff_u = 1.0;
      coeff_ut = spec.beta;
      break;
  }

  PhysicalField source(grid);
  if (on_u != Power::None) {
    const PhysicalField u = truncated(state.u);
    for (std::size_t i = 0; i < grid.size(); ++i) source[i] += coeff_u * apply(on_u, u[i]);
  }
  if (on_ut != Power::None) {
    const PhysicalField ut = truncated(state.ut);
    for (std::size_t i = 0; i < grid.size(); ++i) source[i] += coeff_ut * apply(on_ut, ut[i]);
  }
  if (!source.all_finite()) throw BlowUpError("state blow-up: nonlinearity overflowed", state.t);

  out = forward_transform(source);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = grid.in_dealias_band(i) ? -grid.xi2(i) * out[i] : Complex{0.0, 0.0};
  }
  return out;
}

SpectralField nonlinearity(const StatePair& state, const NonlinearitySpec& spec) {
  return nonlinearity(to_spectral(state), spec);
}

}  // namespace dbq
