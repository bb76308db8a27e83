#pragma once

#include <string>
#include <vector>

#include "mvs/core.hpp"

namespace mvs {

/// Parameters shared by the named initial-data presets. Unused fields are ignored.
struct InitialDataSpec {
  std::string preset = "constant";
  double h0 = 1.0;
  Vec2 u0;
  double amplitude = 0.1;  // sine-perturbation
  double h_left = 2.0;     // dam-break: h on x < 0.5
  double h_right = 1.0;    // dam-break: h on x >= 0.5
  double slope = -1.0;     // stationary-pile slope; < 0 means d/(2a)
  std::string file;        // "file" preset
};

/// Builds the initial state on `grid`. Presets: constant, sine-perturbation,
/// dam-break, stationary-pile, file. Throws std::invalid_argument for an
/// unknown preset and std::runtime_error when the file cannot be read.
ConservedState make_initial_state(const InitialDataSpec& spec, const TorusGrid& grid,
                                  const ModelParams& params);

std::vector<std::string> initial_presets();

/// Smooth reference solution together with the force that makes it exact.
struct ManufacturedSolution {
  StrongSolution strong;
  ForceField force;
};

/// (H, U) ≡ (h0, u0); exact with zero force for Euler and for SH at rest.
/// For SH with u0 ≠ 0 the force d u0/|u0| balances the friction.
ManufacturedSolution constant_solution(double h0, Vec2 u0, const ModelParams& params);

/// H = h0 + A sin(2π(x - c t)), U ≡ (c, 0): the mass equation holds exactly and
/// the force G = p'(H) ∂ₓH / H (Euler) or f = 2a ∂ₓH + d sign(c) e_x (SH) closes
/// the momentum equation.
ManufacturedSolution travelling_wave(double h0, double amplitude, double speed,
                                     const ModelParams& params);

}  // namespace mvs
