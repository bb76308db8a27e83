#include "mvs/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mvs {

std::string to_string(Model model) {
  return model == Model::Euler ? "euler" : "savage-hutter";
}

Model model_from_string(const std::string& name) {
  if (name == "euler") return Model::Euler;
  if (name == "savage-hutter" || name == "sh") return Model::SavageHutter;
  throw std::invalid_argument("unknown model '" + name + "'");
}

ForceField ForceField::zero() { return ForceField{}; }

ForceField ForceField::constant(Vec2 value) {
  ForceField f;
  f.eval = [value](double, const Vec2&) { return value; };
  f.sup_norm = norm(value);
  std::ostringstream os;
  os << "constant(" << value.x << "," << value.y << ")";
  f.description = os.str();
  return f;
}

void ModelParams::validate() const {
  if (model == Model::Euler) {
    if (!(gamma > 1.0)) throw std::invalid_argument("gamma must be > 1");
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
  } else {
    if (!(a > 0.0)) throw std::invalid_argument("a must be > 0");
    if (!(d > 0.0)) throw std::invalid_argument("d must be > 0");
  }
  if (!(force.sup_norm >= 0.0)) throw std::invalid_argument("force sup-norm must be >= 0");
}

TorusGrid::TorusGrid(std::size_t nx) : dim_(1), nx_(nx), ny_(1) {
  if (nx == 0) throw std::invalid_argument("grid needs at least one cell");
}

TorusGrid::TorusGrid(std::size_t nx, std::size_t ny) : dim_(2), nx_(nx), ny_(ny) {
  if (nx == 0 || ny == 0) throw std::invalid_argument("grid needs at least one cell per axis");
}

Vec2 TorusGrid::center(std::size_t cell) const {
  const double x = (double(ix(cell)) + 0.5) * width(0);
  const double y = dim_ == 2 ? (double(iy(cell)) + 0.5) * width(1) : 0.0;
  return {x, y};
}

std::size_t TorusGrid::neighbor(std::size_t cell, int axis, long offset) const {
  const long n = long(axis == 0 ? nx_ : ny_);
  const long i = long(axis == 0 ? ix(cell) : iy(cell));
  const long j = ((i + offset) % n + n) % n;
  return axis == 0 ? index(std::size_t(j), iy(cell)) : index(ix(cell), std::size_t(j));
}

double ConservedState::total_mass() const {
  double sum = 0.0;
  for (double v : h) sum += v;
  return sum * grid.cell_measure();
}

void ConservedState::validate() const {
  if (h.size() != grid.size() || q.size() != grid.size())
    throw std::invalid_argument("state size does not match grid");
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!std::isfinite(h[i]) || !std::isfinite(q[i].x) || !std::isfinite(q[i].y))
      throw std::invalid_argument("non-finite value in state");
    if (h[i] < 0.0) throw std::invalid_argument("negative height in state");
    if (h[i] == 0.0 && (q[i].x != 0.0 || q[i].y != 0.0))
      throw std::invalid_argument("momentum on a dry cell");
  }
}

ConservedState sample_strong(const StrongSolution& sol, const TorusGrid& grid, double t) {
  if (t < sol.t_begin || t > sol.t_end)
    throw std::out_of_range("time outside the strong solution's validity interval");
  ConservedState s(grid, t);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec2 x = grid.center(i);
    const double H = sol.H(t, x);
    if (!(H >= sol.floor) || !(H > 0.0))
      throw std::domain_error("strong solution height below its floor");
    s.h[i] = H;
    s.q[i] = H * sol.U(t, x);
  }
  return s;
}

std::vector<Vec2> velocity(const ConservedState& state, double floor) {
  std::vector<Vec2> u(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) u[i] = cell_velocity(state.h[i], state.q[i], floor);
  return u;
}

double sampled_sup_norm(const ForceField& force, const TorusGrid& grid,
                        const std::vector<double>& times) {
  if (!force.eval) return 0.0;
  double sup = 0.0;
  for (double t : times)
    for (std::size_t i = 0; i < grid.size(); ++i) sup = std::max(sup, norm(force(t, grid.center(i))));
  return sup;
}

}  // namespace mvs
