#pragma once

#include <vector>

#include "mvs/core.hpp"

namespace mvs {

/// κ h^γ for Euler, a h² for Savage-Hutter. Throws std::invalid_argument for h < 0.
double pressure(double h, const ModelParams& params);

/// p'(h).
double pressure_derivative(double h, const ModelParams& params);

/// sqrt(p'(h)); zero on dry cells.
double sound_speed(double h, const ModelParams& params);

/// Internal energy density P(h) with P'' h = p': κ h^γ/(γ-1) for Euler, a h² for SH.
double internal_energy(double h, const ModelParams& params);

/// max over cells of |u| + sqrt(p'(h)); 0 for a fully dry state.
double max_wave_speed(const ConservedState& state, const ModelParams& params,
                      double floor = kDefaultHeightFloor);

/// Resolvent of the scaled friction graph s·B, B the subdifferential of |·|:
/// the unique w with w + s B(w) ∋ v.
///
/// Equals 0 when |v| <= s and (1 - s/|v|) v otherwise (vector soft threshold).
Vec2 friction_prox(const Vec2& v, double s);

/// Per-cell max(0, |∇h - f/(2a)| - d/(2a)) with periodic central differences;
/// a field of zeros certifies a stationary pile (u ≡ 0).
///
/// Throws std::invalid_argument for the Euler model or non-positive heights.
std::vector<double> stationary_defect(const std::vector<double>& h, const ModelParams& params,
                                      const TorusGrid& grid, double t = 0.0);

/// Periodic central-difference gradient of a cell field.
Vec2 central_gradient(const std::vector<double>& field, const TorusGrid& grid, std::size_t cell);

}  // namespace mvs
