#ifndef PARABOUND_PRESETS_HPP
#define PARABOUND_PRESETS_HPP

#include <cstdint>
#include <map>
#include <string>

#include "parabound/problem.hpp"

namespace parabound {

/// Stefan-Boltzmann constant, W m^-2 K^-4. Default multiplier of the
/// blackbody law when none is given.
inline constexpr double kStefanBoltzmann = 5.670374419e-8;

using ParamMap = std::map<std::string, double>;

/// Named scalar-field catalogue. Supported presets:
///   zero, constant(value), affine(a0, ax, ay[, az]),
///   cos_product(amplitude, kx, ky) -> a*cos(kx pi x)cos(ky pi y),
///   cos2(amplitude) -> a*cos^2(pi x)cos^2(pi y),
///   gaussian(amplitude, cx, cy, width),
///   step(axis, threshold, low, high),
///   fourier_random(seed, mean, amplitude, modes) -> nonnegative random field,
///   decay(rate) multiplies any of the above via the "time_rate" key,
///   manufactured_u / manufactured_f / manufactured_h for the convergence case.
ScalarFn make_scalar_field(const std::string& preset, const ParamMap& params);

/// Vector-field catalogue for the drift:
///   zero, constant(ex, ey[, ez]), time_linear(scale) -> (scale*t, 0),
///   rotor(scale) -> divergence-free swirl about the box center,
///   shear(scale) -> (scale*sin(pi y), 0).
VectorFn make_vector_field(const std::string& preset, const ParamMap& params,
                           const DomainSpec& domain);

/// Diffusion catalogue: identity(scale), diag(a1, a2[, a3]),
/// matrix(a11, a12, a21, a22), checkerboard(a1, a2, cells) with scalar
/// materials aligned to a cells x cells grid.
DiffusionField make_diffusion(const std::string& preset, const ParamMap& params,
                              const DomainSpec& domain);

/// Boundary-law presets. neumann: b = 0, ell = 2. robin(b_star): constant.
/// blackbody(sigma): sigma |xi|^3, ell = 5. wien(b_star): b_star xi^4, ell = 6.
/// custom(ell, b_lower, b_upper): power law with multiplier sweeping the
/// [b_lower, b_upper] band along the boundary.
BoundaryLaw make_boundary_law(const std::string& kind, const ParamMap& params);

bool is_drift_zero_preset(const std::string& preset, const ParamMap& params);

}  // namespace parabound

#endif
