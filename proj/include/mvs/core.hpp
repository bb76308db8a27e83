#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvs/vec.hpp"

namespace mvs {

/// Default height below which a cell counts as dry and carries zero velocity.
inline constexpr double kDefaultHeightFloor = 1e-12;

enum class Model { Euler, SavageHutter };

std::string to_string(Model model);
Model model_from_string(const std::string& name);

/// Spatial (optionally time-dependent) force field: G for Euler, f for Savage-Hutter.
///
/// `sup_norm` is the declared bound on |f|; it is checked against samples on a
/// grid before it is relied on (see `sampled_sup_norm`).
struct ForceField {
  std::function<Vec2(double t, const Vec2& x)> eval;
  double sup_norm = 0.0;
  bool time_dependent = false;
  std::string description = "zero";

  Vec2 operator()(double t, const Vec2& x) const { return eval ? eval(t, x) : Vec2{}; }
  bool is_zero() const { return !eval || sup_norm == 0.0; }

  static ForceField zero();
  static ForceField constant(Vec2 value);
};

struct ModelParams {
  Model model = Model::SavageHutter;
  double gamma = 2.0;  // Euler isentropic exponent
  double kappa = 1.0;  // Euler pressure constant
  double a = 1.0;      // Savage-Hutter pressure constant
  double d = 1.0;      // Savage-Hutter friction magnitude
  ForceField force = ForceField::zero();

  /// Throws std::invalid_argument when a constant of the selected model is out of range.
  void validate() const;

  /// Exponent of the density component in the anisotropic sphere: gamma for Euler, 2 for SH.
  double density_exponent() const { return model == Model::Euler ? gamma : 2.0; }
};

class TorusGrid {
 public:
  /// One-dimensional torus with `nx` cells.
  explicit TorusGrid(std::size_t nx);
  /// Two-dimensional torus with `nx * ny` cells.
  TorusGrid(std::size_t nx, std::size_t ny);

  int dim() const { return dim_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }

  /// Cell width along `axis`. In 1D the (unused) second axis has width 1.
  double width(int axis) const { return axis == 0 ? 1.0 / double(nx_) : 1.0 / double(ny_); }
  double cell_measure() const { return width(0) * width(1); }

  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx_ + ix; }
  std::size_t ix(std::size_t cell) const { return cell % nx_; }
  std::size_t iy(std::size_t cell) const { return cell / nx_; }

  Vec2 center(std::size_t cell) const;

  /// Periodic neighbour of `cell` shifted by `offset` cells along `axis`.
  std::size_t neighbor(std::size_t cell, int axis, long offset) const;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int dim_;
  std::size_t nx_;
  std::size_t ny_;
};

/// Per-cell height and momentum q = h u at time t. Snapshots are values.
struct ConservedState {
  TorusGrid grid;
  double t = 0.0;
  std::vector<double> h;
  std::vector<Vec2> q;

  explicit ConservedState(TorusGrid g, double time = 0.0)
      : grid(g), t(time), h(g.size(), 0.0), q(g.size()) {}

  std::size_t size() const { return h.size(); }

  /// ∑ h |cell|.
  double total_mass() const;

  /// Throws std::invalid_argument on negative heights, non-finite values or
  /// momentum on a dry cell.
  void validate() const;
};

/// A Lipschitz height H >= c > 0 and C¹ velocity U, used as the reference
/// solution in relative-energy comparisons.
struct StrongSolution {
  std::function<double(double t, const Vec2& x)> H;
  std::function<Vec2(double t, const Vec2& x)> U;
  double floor = 0.0;  // c with H >= c > 0
  double t_begin = 0.0;
  double t_end = std::numeric_limits<double>::infinity();

  /// sup |U|, sup |∇U| and sup |∂_t U|; used to size the Gronwall rate.
  double U_sup = 0.0;
  double grad_U_sup = 0.0;
  double dt_U_sup = 0.0;

  double c1_norm() const { return U_sup + grad_U_sup + dt_U_sup; }
};

/// Samples (H, H U) at cell centres.
///
/// Throws std::out_of_range outside the validity interval and
/// std::domain_error when H falls below the declared floor.
ConservedState sample_strong(const StrongSolution& sol, const TorusGrid& grid, double t);

/// u = q / h on wet cells, 0 where h <= floor.
std::vector<Vec2> velocity(const ConservedState& state, double floor = kDefaultHeightFloor);

inline Vec2 cell_velocity(double h, const Vec2& q, double floor = kDefaultHeightFloor) {
  return h > floor ? q / h : Vec2{};
}

/// Largest |f| over cell centres at the given times.
double sampled_sup_norm(const ForceField& force, const TorusGrid& grid,
                        const std::vector<double>& times = {0.0});

}  // namespace mvs
