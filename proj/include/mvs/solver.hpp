#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvs/core.hpp"

namespace mvs {

enum class FluxKind { LocalLaxFriedrichs };

struct SolverConfig {
  double cfl = 0.45;
  double t_end = 1.0;
  double viscosity = 0.0;  // artificial viscosity ε applied to (h, q)
  FluxKind flux = FluxKind::LocalLaxFriedrichs;
  std::size_t record_every = 1;
  double height_floor = kDefaultHeightFloor;
  std::size_t max_steps = 50'000'000;

  /// Throws std::invalid_argument when 0 < cfl <= 1, ε >= 0 or t_end > 0 is violated.
  void validate() const;
};

/// Raised by hyperbolic_step when the update would produce a negative height.
class NegativeHeightError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the solution stops being finite.
class NonFiniteStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CellState {
  double h = 0.0;
  Vec2 q;
};

struct FluxVector {
  double mass = 0.0;
  Vec2 momentum;
};

/// Physical flux (h u_n, h u u_n + p n) through a face with normal e_axis.
FluxVector physical_flux(const CellState& s, int axis, const ModelParams& params,
                         double floor = kDefaultHeightFloor);

/// Local Lax-Friedrichs (Rusanov) flux across a face with normal e_axis:
/// ½(F(L) + F(R)) - ½ λ (R - L), λ the larger of |u_n| + c on the two sides.
FluxVector numerical_flux(const CellState& left, const CellState& right, const ModelParams& params,
                          int axis = 0, double floor = kDefaultHeightFloor);

/// Explicit conservative update by face-flux differences followed by the
/// periodic discrete Laplacian ε Δ on (h, q). Leaves sources alone.
///
/// Throws NegativeHeightError when a cell height drops below zero.
ConservedState hyperbolic_step(const ConservedState& state, double dt, const ModelParams& params,
                               double viscosity = 0.0, double floor = kDefaultHeightFloor);

/// Implicit Coulomb friction with force: per wet cell
/// u ← friction_prox(u + dt f(x), dt d), h unchanged. Savage-Hutter only.
ConservedState friction_step(const ConservedState& state, double dt, const ModelParams& params,
                             double floor = kDefaultHeightFloor);

/// Explicit body-force update q ← q + dt h G for Euler. Identity when G ≡ 0.
ConservedState force_step(const ConservedState& state, double dt, const ModelParams& params);

/// Largest stable step: cfl / ∑_axes(λ_max / Δx_k), additionally limited by
/// ε dt ∑_axes 1/Δx_k² <= ½ when ε > 0. Infinite on a dry, inviscid state.
double stable_dt(const ConservedState& state, const SolverConfig& config, const ModelParams& params);

/// One full step: hyperbolic step, then the source step of the model
/// (force for Euler, friction for Savage-Hutter). dt is halved once on a
/// negative height before the error is propagated. Returns the dt actually used.
double step(ConservedState& state, double dt, const SolverConfig& config, const ModelParams& params);

/// Integrates to config.t_end, recording t = 0, every `record_every` steps and t_end.
std::vector<ConservedState> advance(const ConservedState& initial, const SolverConfig& config,
                                    const ModelParams& params);

/// Integrates from state.t to `t_target` without recording.
ConservedState advance_to(ConservedState state, double t_target, const SolverConfig& config,
                          const ModelParams& params);

}  // namespace mvs
