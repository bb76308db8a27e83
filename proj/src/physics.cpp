#include "mvs/physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvs {

double pressure(double h, const ModelParams& params) {
  if (h < 0.0) throw std::invalid_argument("pressure: negative height");
  if (params.model == Model::Euler) return params.kappa * std::pow(h, params.gamma);
  return params.a * h * h;
}

double pressure_derivative(double h, const ModelParams& params) {
  if (h < 0.0) throw std::invalid_argument("pressure_derivative: negative height");
  if (params.model == Model::Euler)
    return params.gamma * params.kappa * std::pow(h, params.gamma - 1.0);
  return 2.0 * params.a * h;
}

double sound_speed(double h, const ModelParams& params) {
  return h > 0.0 ? std::sqrt(pressure_derivative(h, params)) : 0.0;
}

double internal_energy(double h, const ModelParams& params) {
  if (params.model == Model::Euler)
    return params.kappa * std::pow(h, params.gamma) / (params.gamma - 1.0);
  return params.a * h * h;
}

double max_wave_speed(const ConservedState& state, const ModelParams& params, double floor) {
  double lam = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double h = state.h[i];
    if (h <= 0.0) continue;
    lam = std::max(lam, norm(cell_velocity(h, state.q[i], floor)) + sound_speed(h, params));
  }
  return lam;
}

Vec2 friction_prox(const Vec2& v, double s) {
  const double nv = norm(v);
  if (nv <= s) return {};
  return (1.0 - s / nv) * v;
}

Vec2 central_gradient(const std::vector<double>& field, const TorusGrid& grid, std::size_t cell) {
  Vec2 g;
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const double up = field[grid.neighbor(cell, axis, 1)];
    const double dn = field[grid.neighbor(cell, axis, -1)];
    g[axis] = (up - dn) / (2.0 * grid.width(axis));
  }
  return g;
}

std::vector<double> stationary_defect(const std::vector<double>& h, const ModelParams& params,
                                      const TorusGrid& grid, double t) {
  if (params.model != Model::SavageHutter)
    throw std::invalid_argument("stationary_defect requires the Savage-Hutter model");
  if (h.size() != grid.size()) throw std::invalid_argument("height field does not match grid");
  for (double v : h)
    if (!(v > 0.0)) throw std::invalid_argument("stationary_defect requires h > 0");

  const double two_a = 2.0 * params.a;
  std::vector<double> defect(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Vec2 g = central_gradient(h, grid, i) - params.force(t, grid.center(i)) / two_a;
    defect[i] = std::max(0.0, norm(g) - params.d / two_a);
  }
  return defect;
}

}  // namespace mvs
