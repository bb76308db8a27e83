#include "mvs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvs/physics.hpp"

namespace mvs {

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  if (!(viscosity >= 0.0)) throw std::invalid_argument("viscosity must be >= 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
  if (record_every == 0) throw std::invalid_argument("record_every must be >= 1");
  if (!(height_floor > 0.0)) throw std::invalid_argument("height floor must be > 0");
}

FluxVector physical_flux(const CellState& s, int axis, const ModelParams& params, double floor) {
  const Vec2 u = cell_velocity(s.h, s.q, floor);
  const double un = u[axis];
  FluxVector f;
  f.mass = s.h > floor ? s.q[axis] : 0.0;
  f.momentum = un * (s.h > floor ? s.q : Vec2{});
  f.momentum[axis] += pressure(s.h, params);
  return f;
}

FluxVector numerical_flux(const CellState& left, const CellState& right, const ModelParams& params,
                          int axis, double floor) {
  const FluxVector fl = physical_flux(left, axis, params, floor);
  const FluxVector fr = physical_flux(right, axis, params, floor);
  const double sl = std::abs(cell_velocity(left.h, left.q, floor)[axis]) + sound_speed(left.h, params);
  const double sr = std::abs(cell_velocity(right.h, right.q, floor)[axis]) + sound_speed(right.h, params);
  const double lam = std::max(sl, sr);

  FluxVector f;
  f.mass = 0.5 * (fl.mass + fr.mass) - 0.5 * lam * (right.h - left.h);
  f.momentum = 0.5 * (fl.momentum + fr.momentum) - 0.5 * lam * (right.q - left.q);
  return f;
}

namespace {

void apply_viscosity(ConservedState& s, double dt, double viscosity) {
  if (viscosity <= 0.0) return;
  const TorusGrid& g = s.grid;
  std::vector<double> h = s.h;
  std::vector<Vec2> q = s.q;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int axis = 0; axis < g.dim(); ++axis) {
      const double r = viscosity * dt / (g.width(axis) * g.width(axis));
      const std::size_t up = g.neighbor(i, axis, 1);
      const std::size_t dn = g.neighbor(i, axis, -1);
      h[i] += r * (s.h[up] - 2.0 * s.h[i] + s.h[dn]);
      q[i] += r * (s.q[up] - 2.0 * s.q[i] + s.q[dn]);
    }
  }
  s.h = std::move(h);
  s.q = std::move(q);
}

void check_heights(ConservedState& s, double floor) {
  double hmax = 0.0;
  for (double v : s.h) hmax = std::max(hmax, std::abs(v));
  const double roundoff = 1e-13 * hmax;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s.h[i]) || !std::isfinite(s.q[i].x) || !std::isfinite(s.q[i].y))
      throw NonFiniteStateError("non-finite value after hyperbolic step");
    if (s.h[i] < 0.0) {
      if (s.h[i] < -roundoff) throw NegativeHeightError("negative height after hyperbolic step");
      s.h[i] = 0.0;
    }
    if (s.h[i] <= floor) s.q[i] = Vec2{};
  }
}

}  // namespace

ConservedState hyperbolic_step(const ConservedState& state, double dt, const ModelParams& params,
                               double viscosity, double floor) {
  const TorusGrid& g = state.grid;
  ConservedState next = state;
  next.t = state.t + dt;

  for (int axis = 0; axis < g.dim(); ++axis) {
    const double ratio = dt / g.width(axis);
    for (std::size_t i = 0; i < g.size(); ++i) {
      // Each cell owns its upper face along this axis.
      const std::size_t j = g.neighbor(i, axis, 1);
      const FluxVector f =
          numerical_flux({state.h[i], state.q[i]}, {state.h[j], state.q[j]}, params, axis, floor);
      next.h[i] -= ratio * f.mass;
      next.q[i] -= ratio * f.momentum;
      next.h[j] += ratio * f.mass;
      next.q[j] += ratio * f.momentum;
    }
  }
  apply_viscosity(next, dt, viscosity);
  check_heights(next, floor);
  return next;
}

ConservedState friction_step(const ConservedState& state, double dt, const ModelParams& params,
                             double floor) {
  if (params.model != Model::SavageHutter)
    throw std::invalid_argument("friction_step requires the Savage-Hutter model");
  ConservedState next = state;
  const double threshold = dt * params.d;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double h = state.h[i];
    if (h <= floor) continue;
    const Vec2 v = state.q[i] / h + dt * params.force(state.t, state.grid.center(i));
    next.q[i] = h * friction_prox(v, threshold);
  }
  return next;
}

ConservedState force_step(const ConservedState& state, double dt, const ModelParams& params) {
  if (params.force.is_zero()) return state;
  ConservedState next = state;
  for (std::size_t i = 0; i < state.size(); ++i)
    next.q[i] += dt * state.h[i] * params.force(state.t, state.grid.center(i));
  return next;
}

double stable_dt(const ConservedState& state, const SolverConfig& config,
                 const ModelParams& params) {
  const TorusGrid& g = state.grid;
  const double lam = max_wave_speed(state, params, config.height_floor);
  double rate = 0.0;
  double diff = 0.0;
  for (int axis = 0; axis < g.dim(); ++axis) {
    rate += lam / g.width(axis);
    diff += 1.0 / (g.width(axis) * g.width(axis));
  }
  double dt = rate > 0.0 ? config.cfl / rate : std::numeric_limits<double>::infinity();
  if (config.viscosity > 0.0) dt = std::min(dt, 0.5 / (config.viscosity * diff));
  return dt;
}

double step(ConservedState& state, double dt, const SolverConfig& config, const ModelParams& params) {
  ConservedState hyp(state.grid);
  try {
    hyp = hyperbolic_step(state, dt, params, config.viscosity, config.height_floor);
  } catch (const NegativeHeightError&) {
    dt *= 0.5;
    hyp = hyperbolic_step(state, dt, params, config.viscosity, config.height_floor);
  }
  // Sources are evaluated at the start of the step.
  hyp.t = state.t;
  if (params.model == Model::SavageHutter)
    hyp = friction_step(hyp, dt, params, config.height_floor);
  else
    hyp = force_step(hyp, dt, params);
  hyp.t = state.t + dt;
  for (std::size_t i = 0; i < hyp.size(); ++i)
    if (!std::isfinite(hyp.q[i].x) || !std::isfinite(hyp.q[i].y))
      throw NonFiniteStateError("non-finite momentum after source step");
  state = std::move(hyp);
  return dt;
}

namespace {

double next_dt(const ConservedState& s, double t_target, const SolverConfig& config,
               const ModelParams& params) {
  const double remaining = t_target - s.t;
  const double dt = stable_dt(s, config, params);
  // Avoid leaving a sliver step at the end.
  if (dt >= remaining * (1.0 - 1e-12)) return remaining;
  return dt;
}

}  // namespace

std::vector<ConservedState> advance(const ConservedState& initial, const SolverConfig& config,
                                    const ModelParams& params) {
  config.validate();
  params.validate();
  initial.validate();

  std::vector<ConservedState> records{initial};
  ConservedState s = initial;
  std::size_t steps = 0;
  while (s.t < config.t_end) {
    if (++steps > config.max_steps) throw std::runtime_error("advance: step limit exceeded");
    const double t0 = s.t;
    const double target_dt = next_dt(s, config.t_end, config, params);
    const double used = step(s, target_dt, config, params);
    if (used == target_dt && target_dt == config.t_end - t0) s.t = config.t_end;
    if (steps % config.record_every == 0 || s.t >= config.t_end) records.push_back(s);
  }
  return records;
}

ConservedState advance_to(ConservedState state, double t_target, const SolverConfig& config,
                          const ModelParams& params) {
  config.validate();
  params.validate();
  std::size_t steps = 0;
  while (state.t < t_target) {
    if (++steps > config.max_steps) throw std::runtime_error("advance_to: step limit exceeded");
    const double t0 = state.t;
    const double target_dt = next_dt(state, t_target, config, params);
    const double used = step(state, target_dt, config, params);
    if (used == target_dt && target_dt == t_target - t0) state.t = t_target;
  }
  return state;
}

}  // namespace mvs
