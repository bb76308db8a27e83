#include "mvs/presets.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mvs/physics.hpp"

namespace mvs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ConservedState read_state_file(const std::string& path, const TorusGrid& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open initial data file '" + path + "'");
  ConservedState s(grid);
  std::string line;
  std::size_t cell = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (cell >= grid.size()) throw std::runtime_error("initial data file has more rows than cells");
    std::istringstream row(line);
    double h = 0.0, qx = 0.0, qy = 0.0;
    if (!(row >> h >> qx)) throw std::runtime_error("malformed row in initial data file");
    row >> qy;
    s.h[cell] = h;
    s.q[cell] = {qx, qy};
    ++cell;
  }
  if (cell != grid.size()) throw std::runtime_error("initial data file has fewer rows than cells");
  return s;
}

/// Piecewise-linear periodic pile rising with slope `up` on [0, x_peak) and
/// falling with slope `down` (< 0) on [x_peak, 1).
double tent(double x, double h0, double up, double down, double x_peak) {
  return x < x_peak ? h0 + up * x : h0 + up * x_peak + down * (x - x_peak);
}

}  // namespace

std::vector<std::string> initial_presets() {
  return {"constant", "sine-perturbation", "dam-break", "stationary-pile", "file"};
}

ConservedState make_initial_state(const InitialDataSpec& spec, const TorusGrid& grid,
                                  const ModelParams& params) {
  if (spec.preset == "file") {
    ConservedState s = read_state_file(spec.file, grid);
    s.validate();
    return s;
  }

  ConservedState s(grid);
  if (spec.preset == "constant") {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      s.h[i] = spec.h0;
      s.q[i] = spec.h0 * spec.u0;
    }
  } else if (spec.preset == "sine-perturbation") {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec2 x = grid.center(i);
      double shape = std::sin(kTwoPi * x.x);
      if (grid.dim() == 2) shape *= std::sin(kTwoPi * x.y);
      s.h[i] = spec.h0 + spec.amplitude * shape;
      s.q[i] = s.h[i] * spec.u0;
    }
  } else if (spec.preset == "dam-break") {
    for (std::size_t i = 0; i < grid.size(); ++i) s.h[i] = grid.center(i).x < 0.5 ? spec.h_left : spec.h_right;
  } else if (spec.preset == "stationary-pile") {
    if (params.model != Model::SavageHutter)
      throw std::invalid_argument("stationary-pile preset requires the Savage-Hutter model");
    const double two_a = 2.0 * params.a;
    const double s_rel = spec.slope < 0.0 ? params.d / two_a : spec.slope;
    const double tilt = params.force(0.0, Vec2{}).x / two_a;
    if (!(s_rel > std::abs(tilt)))
      throw std::invalid_argument("stationary-pile slope must exceed |f|/(2a)");
    const double up = tilt + s_rel;
    const double down = tilt - s_rel;
    const double x_peak = -down / (up - down);
    for (std::size_t i = 0; i < grid.size(); ++i) s.h[i] = tent(grid.center(i).x, spec.h0, up, down, x_peak);
  } else {
    throw std::invalid_argument("unknown initial data preset '" + spec.preset + "'");
  }
  s.validate();
  return s;
}

ManufacturedSolution constant_solution(double h0, Vec2 u0, const ModelParams& params) {
  if (!(h0 > 0.0)) throw std::invalid_argument("constant strong solution needs h0 > 0");
  ManufacturedSolution m;
  m.strong.H = [h0](double, const Vec2&) { return h0; };
  m.strong.U = [u0](double, const Vec2&) { return u0; };
  m.strong.floor = h0;
  m.strong.U_sup = norm(u0);
  const double nu = norm(u0);
  if (params.model == Model::SavageHutter && nu > 0.0)
    m.force = ForceField::constant((params.d / nu) * u0);
  else
    m.force = ForceField::zero();
  return m;
}

ManufacturedSolution travelling_wave(double h0, double amplitude, double speed,
                                     const ModelParams& params) {
  if (!(h0 > std::abs(amplitude))) throw std::invalid_argument("travelling wave needs h0 > |A|");
  ManufacturedSolution m;
  m.strong.H = [=](double t, const Vec2& x) { return h0 + amplitude * std::sin(kTwoPi * (x.x - speed * t)); };
  m.strong.U = [=](double, const Vec2&) { return Vec2{speed, 0.0}; };
  m.strong.floor = h0 - std::abs(amplitude);
  m.strong.U_sup = std::abs(speed);

  const auto H = m.strong.H;
  const auto dH = [=](double t, const Vec2& x) {
    return amplitude * kTwoPi * std::cos(kTwoPi * (x.x - speed * t));
  };
  ForceField f;
  f.time_dependent = speed != 0.0;
  if (params.model == Model::Euler) {
    const ModelParams p = params;
    f.eval = [=](double t, const Vec2& x) {
      const double h = H(t, x);
      return Vec2{pressure_derivative(h, p) * dH(t, x) / h, 0.0};
    };
    // p'(H)/H = κγ H^{γ-2} is monotone in H, so the sup sits at an extreme height.
    const double lo = h0 - std::abs(amplitude), hi = h0 + std::abs(amplitude);
    const double coeff = std::max(pressure_derivative(lo, p) / lo, pressure_derivative(hi, p) / hi);
    f.sup_norm = coeff * std::abs(amplitude) * kTwoPi;
    f.description = "travelling-wave G";
  } else {
    const double a = params.a;
    const double push = speed > 0.0 ? params.d : (speed < 0.0 ? -params.d : 0.0);
    f.eval = [=](double t, const Vec2& x) { return Vec2{2.0 * a * dH(t, x) + push, 0.0}; };
    f.sup_norm = 2.0 * a * std::abs(amplitude) * kTwoPi + std::abs(push);
    f.description = "travelling-wave f";
  }
  m.force = f;
  return m;
}

}  // namespace mvs
