#pragma once

#include <string>
#include <vector>

#include "mvs/core.hpp"
#include "mvs/young.hpp"

namespace mvs {

/// Time series written to series.csv. Optional columns hold NaN when unused.
struct DiagnosticsSeries {
  std::vector<double> times;
  std::vector<double> energy;      // E_mvs(t)
  std::vector<double> momentum;    // M(t) = ∫ overline{h|u|}
  std::vector<double> comparison;  // M̃(t); NaN when not applicable
  std::vector<double> defect;      // admissibility defect
  std::vector<double> relative_energy;  // empty when no strong solution is attached
  double E0 = 0.0;

  /// Throws std::invalid_argument if times are not strictly increasing, column
  /// lengths disagree, or an energy / momentum is negative.
  void validate() const;
};

/// E_mvs = ∫ ½ overline{h|u|²} + κ/(γ-1) overline{h^γ} (Euler) or + a overline{h²} (SH).
double energy(const YoungMeasureField& field, const ModelParams& params);

/// Per-cell energy density (the integrand of `energy`).
std::vector<double> energy_density(const YoungMeasureField& field, const ModelParams& params);

/// Which Savage-Hutter work term the admissibility inequality uses.
enum class AdmissibilityForm {
  /// W' = -∫ d overline{h|u|} - overline{h f·u}  (B(u)·u = |u|)
  Dissipation,
  /// W' = -∫ d (overline{h|u|} - overline{h f·u}), the displayed variant
  Displayed,
};

/// Instantaneous work rate ∫ dW/dt: ∫ overline{h G·u} for Euler, the SH form per `form`.
double work_rate(const YoungMeasureField& field, const ModelParams& params,
                 AdmissibilityForm form = AdmissibilityForm::Dissipation);

struct AdmissibilityReport {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> work;    // W(t), trapezoid over the snapshots
  std::vector<double> defect;  // max(0, E(t) - E0 - W(t))
  double E0 = 0.0;

  double max_defect() const;
};

/// Energy inequality residual over a time-ordered sequence of fields.
/// E0 is the energy of the first field. Throws with fewer than 2 samples.
AdmissibilityReport admissibility_defect(const std::vector<YoungMeasureField>& fields,
                                         const ModelParams& params,
                                         AdmissibilityForm form = AdmissibilityForm::Dissipation);

struct RelativeEnergy {
  double kinetic = 0.0;   // ∫ ½ overline{h|u-U|²}
  double pressure = 0.0;  // ∫ overline{P(h) - P'(H)(h - H) - P(H)}, concentration included
  double total() const { return kinetic + pressure; }
};

/// Relative energy between a field and a strong solution, midpoint quadrature.
/// Throws std::domain_error when H drops below its floor on the grid.
RelativeEnergy relative_energy(const YoungMeasureField& field, const StrongSolution& strong,
                               const ModelParams& params);

/// ∫ overline{h|u|} for one field. The integrand has zero recession.
double momentum(const YoungMeasureField& field);
std::vector<double> momentum_series(const std::vector<YoungMeasureField>& fields);

/// C(a) = max{1/(3a), 4/3}.
double deposition_constant(double a);

/// Closed-form solution of M̃' = -¾ C(a)(d - f∞) M̃^{2/3}, M̃(0) = (C(a) E0)^{3/4},
/// truncated at zero. Throws std::invalid_argument when f∞ >= d.
double comparison_solution(double t, double E0, double a, double d, double f_inf);

/// 4 (d - f∞)^{-1} C(a)^{-3/4} E0^{1/4}, the time after which M vanishes.
double deposition_bound(double E0, double a, double d, double f_inf);

/// Earliest recorded time after which M(t) <= threshold for all later samples.
/// threshold = rel * M(0), or rel * max M when M(0) = 0.
double measured_deposition_time(const std::vector<double>& times, const std::vector<double>& M,
                                double rel = 1e-8);

struct GronwallReport {
  bool pass = true;
  double defect = 0.0;  // max over τ of E_rel(τ) - E_rel(0) exp(C ‖U‖_{C¹} τ), clipped at 0
  double worst_time = 0.0;
};

/// Checks E_rel(τ) <= E_rel(0) exp(C ‖U‖_{C¹} τ) + tolerance at every sample.
GronwallReport gronwall_check(const std::vector<double>& times, const std::vector<double>& E_rel,
                              double u_c1_norm, double scheme_constant, double tolerance);

/// Default scheme constant 10 (1 + ‖∇U‖∞ + ‖∂_t U‖∞).
double default_gronwall_constant(const StrongSolution& strong);

/// Time-independent test function from the fixed Fourier catalog.
struct TestFunction {
  std::string name;
  int axis = -1;  // -1 for the constant function
  int kind = 0;   // 0: constant, 1: sin(2π x_axis), 2: cos(2π x_axis)

  double value(const Vec2& x) const;
  Vec2 gradient(const Vec2& x) const;
};

/// {1, sin 2πx, cos 2πx[, sin 2πy, cos 2πy]}.
std::vector<TestFunction> fourier_test_functions(int dim);

struct ResidualEntry {
  std::string equation;  // "mass" or "momentum"
  std::string test;      // test function name, with component for momentum
  double residual = 0.0;
};

/// Absolute residuals of the mass and momentum identities of the measure-valued
/// formulation at τ = last field time, trapezoid in time and midpoint in space.
/// Momentum test functions are φ = ψ e_k. Throws with fewer than 2 samples.
std::vector<ResidualEntry> weak_residual(const std::vector<YoungMeasureField>& fields,
                                         const ModelParams& params,
                                         const std::vector<TestFunction>& tests);

}  // namespace mvs
