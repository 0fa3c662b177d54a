#pragma once

#include <cstdint>
#include <random>

#include "dbq/spectral_core.hpp"

namespace dbq {

/// amplitude * exp(-|x|^2 / (2 sigma^2)) centred in the box.
PhysicalField gaussian_field(const Grid& grid, double sigma = 1.0, double amplitude = 1.0);

/// Radius beyond which exp(-r^2 / (2 sigma^2)) is below 1e-8.
double gaussian_support_radius(double sigma);

/// Smallest box side 2 (R0 + 1.2 T) that keeps waves launched from radius R0
/// (low-frequency group speed 1, with slack) from wrapping around before T.
double min_box_length(double R0, double T);

/// Portable uniform doubles in [0, 1) from mt19937_64 (the standard
/// distributions are implementation-defined, which would break run-to-run
/// reproducibility across toolchains).
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 engine_;
};

/// Real trigonometric polynomial with random coefficients on |m_axis| <= band,
/// amplitudes decaying like 1 / (1 + |m|^2). Normalized to unit L-infinity.
PhysicalField random_smooth_field(const Grid& grid, UniformSource& rng, int band);

}  // namespace dbq
