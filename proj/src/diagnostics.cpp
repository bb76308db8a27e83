#include "mvs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mvs/physics.hpp"

namespace mvs {

void DiagnosticsSeries::validate() const {
  const std::size_t n = times.size();
  if (energy.size() != n || momentum.size() != n || comparison.size() != n || defect.size() != n ||
      (!relative_energy.empty() && relative_energy.size() != n))
    throw std::invalid_argument("series columns have different lengths");
  for (std::size_t i = 1; i < n; ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("series times not strictly increasing");
  for (std::size_t i = 0; i < n; ++i) {
    if (energy[i] < 0.0 || momentum[i] < 0.0) throw std::invalid_argument("negative energy or momentum");
    if (!relative_energy.empty() && relative_energy[i] < 0.0)
      throw std::invalid_argument("negative relative energy");
  }
}

namespace {

/// Coefficient c with concentration energy c ⟨β₁^p, ν∞⟩ m.
double pressure_energy_coefficient(const ModelParams& params) {
  return params.model == Model::Euler ? params.kappa / (params.gamma - 1.0) : params.a;
}

double cell_energy(const YoungMeasureCell& cell, const ModelParams& params) {
  const double p = params.density_exponent();
  const double c = pressure_energy_coefficient(params);
  double e = 0.0;
  for (const Atom& a : cell.atoms) e += a.weight * (0.5 * norm2(a.lp) + c * std::pow(a.l1, p));
  if (cell.conc_mass > 0.0) {
    double r = 0.0;
    for (const SphereAtom& s : cell.sphere_atoms)
      r += s.weight * (0.5 * norm2(s.bp) + c * std::pow(s.b1, p));
    e += cell.conc_mass * r;
  }
  return e;
}

/// Friction force density selected for an atom: λ₁(-d B(u) + f), with the
/// static selection B(0) = proj_ball(f/d) that balances the applied force.
Vec2 friction_force(const Atom& a, const Vec2& f, double d) {
  const double n = norm(a.lp);
  if (n > 0.0) return a.l1 * (f - (d / n) * a.lp);
  const double nf = norm(f);
  const Vec2 b = nf > d ? f / nf : f / d;
  return a.l1 * (f - d * b);
}

}  // namespace

std::vector<double> energy_density(const YoungMeasureField& field, const ModelParams& params) {
  std::vector<double> e(field.cells.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = cell_energy(field.cells[i], params);
  return e;
}

double energy(const YoungMeasureField& field, const ModelParams& params) {
  double sum = 0.0;
  for (const auto& c : field.cells) sum += cell_energy(c, params);
  return sum * field.grid.cell_measure();
}

double work_rate(const YoungMeasureField& field, const ModelParams& params, AdmissibilityForm form) {
  double sum = 0.0;
  for (std::size_t i = 0; i < field.cells.size(); ++i) {
    const Vec2 f = params.force(field.t, field.grid.center(i));
    double hfu = 0.0;
    double hu_abs = 0.0;
    for (const Atom& a : field.cells[i].atoms) {
      const double s = std::sqrt(a.l1);
      hfu += a.weight * s * dot(a.lp, f);
      hu_abs += a.weight * s * norm(a.lp);
    }
    if (params.model == Model::Euler)
      sum += hfu;
    else if (form == AdmissibilityForm::Dissipation)
      sum -= params.d * hu_abs - hfu;
    else
      sum -= params.d * (hu_abs - hfu);
  }
  return sum * field.grid.cell_measure();
}

double AdmissibilityReport::max_defect() const {
  double m = 0.0;
  for (double v : defect) m = std::max(m, v);
  return m;
}

AdmissibilityReport admissibility_defect(const std::vector<YoungMeasureField>& fields,
                                         const ModelParams& params, AdmissibilityForm form) {
  if (fields.size() < 2) throw std::invalid_argument("admissibility_defect needs >= 2 samples");
  AdmissibilityReport r;
  double work = 0.0;
  double prev_rate = 0.0;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const double e = energy(fields[k], params);
    const double rate = work_rate(fields[k], params, form);
    if (k == 0) {
      r.E0 = e;
    } else {
      work += 0.5 * (fields[k].t - fields[k - 1].t) * (prev_rate + rate);
    }
    prev_rate = rate;
    r.times.push_back(fields[k].t);
    r.energy.push_back(e);
    r.work.push_back(work);
    r.defect.push_back(std::max(0.0, e - r.E0 - work));
  }
  return r;
}

RelativeEnergy relative_energy(const YoungMeasureField& field, const StrongSolution& strong,
                               const ModelParams& params) {
  const double p = params.density_exponent();
  const double c = pressure_energy_coefficient(params);
  RelativeEnergy rel;
  for (std::size_t i = 0; i < field.cells.size(); ++i) {
    const Vec2 x = field.grid.center(i);
    const double H = strong.H(field.t, x);
    if (!(H >= strong.floor) || !(H > 0.0))
      throw std::domain_error("strong solution height below its floor");
    const Vec2 U = strong.U(field.t, x);
    const double PH = internal_energy(H, params);
    const double dPH = params.model == Model::Euler
                           ? params.kappa * params.gamma / (params.gamma - 1.0) * std::pow(H, params.gamma - 1.0)
                           : 2.0 * params.a * H;
    const YoungMeasureCell& cell = field.cells[i];
    double kin = 0.0;
    double pre = 0.0;
    for (const Atom& a : cell.atoms) {
      kin += a.weight * 0.5 * norm2(a.lp - std::sqrt(a.l1) * U);
      const double bregman = internal_energy(a.l1, params) - dPH * (a.l1 - H) - PH;
      pre += a.weight * std::max(0.0, bregman);
    }
    if (cell.conc_mass > 0.0) {
      double k = 0.0, q = 0.0;
      for (const SphereAtom& s : cell.sphere_atoms) {
        k += s.weight * 0.5 * norm2(s.bp);
        q += s.weight * c * std::pow(s.b1, p);
      }
      kin += cell.conc_mass * k;
      pre += cell.conc_mass * q;
    }
    rel.kinetic += kin;
    rel.pressure += pre;
  }
  rel.kinetic *= field.grid.cell_measure();
  rel.pressure *= field.grid.cell_measure();
  return rel;
}

double momentum(const YoungMeasureField& field) {
  double sum = 0.0;
  for (const auto& c : field.cells)
    for (const Atom& a : c.atoms) sum += a.weight * std::sqrt(a.l1) * norm(a.lp);
  return sum * field.grid.cell_measure();
}

std::vector<double> momentum_series(const std::vector<YoungMeasureField>& fields) {
  std::vector<double> m;
  m.reserve(fields.size());
  for (const auto& f : fields) m.push_back(momentum(f));
  return m;
}

double deposition_constant(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("deposition_constant: a must be > 0");
  return std::max(1.0 / (3.0 * a), 4.0 / 3.0);
}

namespace {

void check_friction_dominates(double d, double f_inf) {
  if (!(f_inf < d)) throw std::invalid_argument("force sup-norm must be strictly below d");
  if (f_inf < 0.0) throw std::invalid_argument("force sup-norm must be >= 0");
}

}  // namespace

double comparison_solution(double t, double E0, double a, double d, double f_inf) {
  check_friction_dominates(d, f_inf);
  if (E0 < 0.0) throw std::invalid_argument("comparison_solution: E0 must be >= 0");
  const double C = deposition_constant(a);
  const double bracket = 3.0 * std::pow(C * E0, 0.25) - 0.75 * C * (d - f_inf) * t;
  if (bracket < 0.0) return 0.0;
  const double v = bracket / 3.0;
  return v * v * v;
}

double deposition_bound(double E0, double a, double d, double f_inf) {
  check_friction_dominates(d, f_inf);
  if (E0 < 0.0) throw std::invalid_argument("deposition_bound: E0 must be >= 0");
  return 4.0 / (d - f_inf) * std::pow(deposition_constant(a), -0.75) * std::pow(E0, 0.25);
}

double measured_deposition_time(const std::vector<double>& times, const std::vector<double>& M,
                                double rel) {
  if (times.empty() || times.size() != M.size())
    throw std::invalid_argument("measured_deposition_time: bad series");
  double ref = M.front();
  if (ref <= 0.0) ref = *std::max_element(M.begin(), M.end());
  const double threshold = rel * ref;
  for (std::size_t k = M.size(); k-- > 0;) {
    if (M[k] > threshold) {
      if (k + 1 == M.size()) return std::numeric_limits<double>::infinity();
      return times[k + 1];
    }
  }
  return times.front();
}

GronwallReport gronwall_check(const std::vector<double>& times, const std::vector<double>& E_rel,
                              double u_c1_norm, double scheme_constant, double tolerance) {
  if (times.size() != E_rel.size() || times.empty())
    throw std::invalid_argument("gronwall_check: bad series");
  GronwallReport r;
  const double rate = scheme_constant * u_c1_norm;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double bound = E_rel.front() * std::exp(rate * (times[k] - times.front()));
    const double excess = E_rel[k] - bound;
    if (excess > r.defect) {
      r.defect = excess;
      r.worst_time = times[k];
    }
    if (excess > tolerance) r.pass = false;
  }
  return r;
}

double default_gronwall_constant(const StrongSolution& strong) {
  return 10.0 * (1.0 + strong.grad_U_sup + strong.dt_U_sup);
}

double TestFunction::value(const Vec2& x) const {
  if (kind == 0) return 1.0;
  const double arg = 2.0 * std::numbers::pi * x[axis];
  return kind == 1 ? std::sin(arg) : std::cos(arg);
}

Vec2 TestFunction::gradient(const Vec2& x) const {
  Vec2 g;
  if (kind == 0) return g;
  const double k = 2.0 * std::numbers::pi;
  const double arg = k * x[axis];
  g[axis] = kind == 1 ? k * std::cos(arg) : -k * std::sin(arg);
  return g;
}

std::vector<TestFunction> fourier_test_functions(int dim) {
  std::vector<TestFunction> t{{"1", -1, 0}, {"sin(2pi x)", 0, 1}, {"cos(2pi x)", 0, 2}};
  if (dim == 2) {
    t.push_back({"sin(2pi y)", 1, 1});
    t.push_back({"cos(2pi y)", 1, 2});
  }
  return t;
}

namespace {

struct CellMoments {
  double h = 0.0;
  Vec2 hu;
  Mat2 huu;
  double pressure = 0.0;  // κ overline{h^γ} or a overline{h²}
  Vec2 force;             // overline{hG} or overline{h(-dB(u)+f)}
};

CellMoments cell_moments(const YoungMeasureCell& cell, const ModelParams& params, const Vec2& f) {
  const double p = params.density_exponent();
  const double c = params.model == Model::Euler ? params.kappa : params.a;
  CellMoments m;
  for (const Atom& a : cell.atoms) {
    m.h += a.weight * a.l1;
    m.hu += a.weight * std::sqrt(a.l1) * a.lp;
    m.huu += a.weight * outer(a.lp, a.lp);
    m.pressure += a.weight * c * std::pow(a.l1, p);
    m.force += a.weight * (params.model == Model::Euler ? a.l1 * f : friction_force(a, f, params.d));
  }
  if (cell.conc_mass > 0.0) {
    for (const SphereAtom& s : cell.sphere_atoms) {
      m.huu += cell.conc_mass * s.weight * outer(s.bp, s.bp);
      m.pressure += cell.conc_mass * s.weight * c * std::pow(s.b1, p);
    }
  }
  return m;
}

}  // namespace

std::vector<ResidualEntry> weak_residual(const std::vector<YoungMeasureField>& fields,
                                         const ModelParams& params,
                                         const std::vector<TestFunction>& tests) {
  if (fields.size() < 2) throw std::invalid_argument("weak_residual needs >= 2 samples");
  const TorusGrid& grid = fields.front().grid;
  const double dx = grid.cell_measure();
  const int dim = grid.dim();
  const std::size_t ntest = tests.size();

  // Per test: mass flux integral, momentum flux integral per component, and
  // boundary terms at t = 0 and τ.
  std::vector<double> mass_int(ntest, 0.0), mass_prev(ntest, 0.0);
  std::vector<Vec2> mom_int(ntest), mom_prev(ntest);
  std::vector<double> mass_first(ntest, 0.0), mass_last(ntest, 0.0);
  std::vector<Vec2> mom_first(ntest), mom_last(ntest);

  for (std::size_t k = 0; k < fields.size(); ++k) {
    const YoungMeasureField& field = fields[k];
    std::vector<double> mass_rate(ntest, 0.0), mass_bdry(ntest, 0.0);
    std::vector<Vec2> mom_rate(ntest), mom_bdry(ntest);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec2 x = grid.center(i);
      const CellMoments m = cell_moments(field.cells[i], params, params.force(field.t, x));
      for (std::size_t j = 0; j < ntest; ++j) {
        const double psi = tests[j].value(x);
        const Vec2 g = tests[j].gradient(x);
        mass_rate[j] += dot(g, m.hu) * dx;
        mass_bdry[j] += psi * m.h * dx;
        for (int c = 0; c < dim; ++c) {
          const Vec2 row = c == 0 ? Vec2{m.huu.xx, m.huu.xy} : Vec2{m.huu.yx, m.huu.yy};
          mom_rate[j][c] += (dot(row, g) + g[c] * m.pressure + psi * m.force[c]) * dx;
          mom_bdry[j][c] += psi * m.hu[c] * dx;
        }
      }
    }
    for (std::size_t j = 0; j < ntest; ++j) {
      if (k == 0) {
        mass_first[j] = mass_bdry[j];
        mom_first[j] = mom_bdry[j];
      } else {
        const double half_dt = 0.5 * (field.t - fields[k - 1].t);
        mass_int[j] += half_dt * (mass_prev[j] + mass_rate[j]);
        mom_int[j] += half_dt * (mom_prev[j] + mom_rate[j]);
      }
      mass_prev[j] = mass_rate[j];
      mom_prev[j] = mom_rate[j];
      mass_last[j] = mass_bdry[j];
      mom_last[j] = mom_bdry[j];
    }
  }

  std::vector<ResidualEntry> out;
  for (std::size_t j = 0; j < ntest; ++j) {
    out.push_back({"mass", tests[j].name, std::abs(mass_int[j] + mass_first[j] - mass_last[j])});
    for (int c = 0; c < dim; ++c) {
      const std::string comp = c == 0 ? "e_x " : "e_y ";
      out.push_back({"momentum", comp + tests[j].name,
                     std::abs(mom_int[j][c] + mom_first[j][c] - mom_last[j][c])});
    }
  }
  return out;
}

}  // namespace mvs
