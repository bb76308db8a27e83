#include "mvs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "mvs/physics.hpp"
#include "mvs/presets.hpp"
#include "mvs/solver.hpp"
#include "mvs/young.hpp"

namespace mvs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string pass_fail(bool ok) { return ok ? "pass" : "fail"; }

AdmissibilityForm form_of(const ExperimentConfig& c) {
  return c.checks.displayed_admissibility ? AdmissibilityForm::Displayed : AdmissibilityForm::Dissipation;
}

ModelParams model_params(const ExperimentConfig& c) {
  ModelParams p = c.params;
  p.force = c.force.build();
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

ConservedState initial_state(const ExperimentConfig& c, const ModelParams& p) {
  try {
    return make_initial_state(c.initial, c.grid(), p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<YoungMeasureField> dirac_fields(const std::vector<ConservedState>& states, const ModelParams& p,
                                            double floor) {
  std::vector<YoungMeasureField> fields;
  fields.reserve(states.size());
  for (const auto& s : states) fields.push_back(from_state(s, p, floor));
  return fields;
}

DiagnosticsSeries series_from_fields(const std::vector<YoungMeasureField>& fields, const ModelParams& p,
                                     AdmissibilityForm form, bool comparison) {
  DiagnosticsSeries s;
  const AdmissibilityReport adm = admissibility_defect(fields, p, form);
  s.times = adm.times;
  s.energy = adm.energy;
  s.defect = adm.defect;
  s.E0 = adm.E0;
  s.momentum = momentum_series(fields);
  const double f_inf = p.force.sup_norm;
  for (double t : s.times)
    s.comparison.push_back(comparison ? comparison_solution(t, s.E0, p.a, p.d, f_inf) : kNaN);
  return s;
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

double mass_drift(const std::vector<ConservedState>& states) {
  const double m0 = states.front().total_mass();
  double worst = 0.0;
  for (const auto& s : states) worst = std::max(worst, std::abs(s.total_mass() - m0));
  return worst;
}

/// Admissibility tolerance in absolute units: tol × E0, or tol when E0 = 0.
double admissibility_slack(const ExperimentConfig& c, double E0) {
  return c.checks.admissibility_tolerance * (E0 > 0.0 ? E0 : 1.0);
}

void prepare_output(const ExperimentConfig& c) { std::filesystem::create_directories(c.output_dir); }

void add(Summary& s, const std::string& key, double v) { s.emplace_back(key, format_double(v)); }
void add(Summary& s, const std::string& key, const std::string& v) { s.emplace_back(key, v); }
void add(Summary& s, const std::string& key, std::size_t v) { s.emplace_back(key, std::to_string(v)); }

void finish(ExperimentResult& r, const ExperimentConfig& c) {
  add(r.summary, "status", r.status == kExitPass ? std::string("pass") : std::string("fail"));
  write_summary(c.output_dir / "summary.txt", r.summary);
}

void common_header(Summary& s, const ExperimentConfig& c, const ModelParams& p) {
  add(s, "experiment", to_string(c.experiment));
  add(s, "model", to_string(p.model));
  add(s, "force", p.force.description);
  add(s, "force_sup", p.force.sup_norm);
  add(s, "dim", std::size_t(c.dim));
  add(s, "nx", c.nx);
  if (c.dim == 2) add(s, "ny", c.ny);
  add(s, "initial", c.initial.preset);
  add(s, "seed", std::to_string(c.seed));
}

}  // namespace

DiagnosticsSeries series_from_states(const std::vector<ConservedState>& states, const ModelParams& params,
                                     AdmissibilityForm form, bool comparison) {
  return series_from_fields(dirac_fields(states, params, kDefaultHeightFloor), params, form, comparison);
}

ExperimentResult run_simulate(const ExperimentConfig& c) {
  c.validate();
  const ModelParams p = model_params(c);
  const ConservedState s0 = initial_state(c, p);
  prepare_output(c);

  const auto states = advance(s0, c.solver, p);
  const auto fields = dirac_fields(states, p, c.solver.height_floor);
  ExperimentResult r;
  r.series = series_from_fields(fields, p, form_of(c), false);
  write_series_csv(c.output_dir / "series.csv", r.series);
  write_young_measure(c.output_dir / young_measure_filename(fields.back().t), fields.back());

  const double defect = max_of(r.series.defect);
  const double drift = mass_drift(states);
  const bool adm_ok = defect <= admissibility_slack(c, r.series.E0);
  const bool mass_ok = drift <= 1e-10;

  common_header(r.summary, c, p);
  add(r.summary, "records", states.size());
  add(r.summary, "t_end", states.back().t);
  add(r.summary, "E0", r.series.E0);
  add(r.summary, "E_end", r.series.energy.back());
  add(r.summary, "M_end", r.series.momentum.back());
  add(r.summary, "max_defect", defect);
  add(r.summary, "mass_drift", drift);
  add(r.summary, "admissibility", pass_fail(adm_ok));
  add(r.summary, "mass_conservation", pass_fail(mass_ok));
  if (!adm_ok) r.notes.push_back("admissibility defect " + format_double(defect) + " above tolerance");
  if (!mass_ok) r.notes.push_back("mass drift " + format_double(drift) + " above 1e-10");
  r.status = adm_ok && mass_ok ? kExitPass : kExitCheckFailed;
  finish(r, c);
  return r;
}

ExperimentResult run_deposition(const ExperimentConfig& config) {
  config.validate();
  ExperimentConfig c = config;
  const ModelParams p = model_params(c);
  if (p.model != Model::SavageHutter) throw ConfigError("deposition requires the Savage-Hutter model");
  if (!(p.force.sup_norm < p.d)) throw ConfigError("deposition requires ‖f‖∞ < d");
  const ConservedState s0 = initial_state(c, p);

  const double E0 = energy(from_state(s0, p, c.solver.height_floor), p);
  const double C = deposition_constant(p.a);
  const double T_bound = deposition_bound(E0, p.a, p.d, p.force.sup_norm);
  if (c.t_end_auto) c.solver.t_end = T_bound > 0.0 ? 1.25 * T_bound : 1.0;
  prepare_output(c);

  const auto states = advance(s0, c.solver, p);
  ExperimentResult r;
  r.series = series_from_fields(dirac_fields(states, p, c.solver.height_floor), p, form_of(c), true);
  write_series_csv(c.output_dir / "series.csv", r.series);

  const auto& M = r.series.momentum;
  const double slack = c.checks.momentum_tolerance * M.front();
  double worst_excess = 0.0;
  for (std::size_t k = 0; k < M.size(); ++k)
    worst_excess = std::max(worst_excess, M[k] - r.series.comparison[k]);
  const bool comparison_ok = worst_excess <= slack;
  const double T_measured = measured_deposition_time(r.series.times, M, c.checks.deposition_threshold);
  const bool time_ok = T_measured <= T_bound;
  const double defect = max_of(r.series.defect);
  const bool adm_ok = defect <= admissibility_slack(c, E0);

  common_header(r.summary, c, p);
  add(r.summary, "a", p.a);
  add(r.summary, "d", p.d);
  add(r.summary, "E0", E0);
  add(r.summary, "C(a)", C);
  add(r.summary, "M0", M.front());
  add(r.summary, "M_tilde0", r.series.comparison.front());
  add(r.summary, "T_bound", T_bound);
  add(r.summary, "T_measured", T_measured);
  add(r.summary, "t_end", states.back().t);
  add(r.summary, "records", states.size());
  add(r.summary, "max_excess_over_M_tilde", worst_excess);
  add(r.summary, "max_defect", defect);
  add(r.summary, "M_le_M_tilde", pass_fail(comparison_ok));
  add(r.summary, "T_measured_le_T_bound", pass_fail(time_ok));
  add(r.summary, "admissibility", pass_fail(adm_ok));
  if (!comparison_ok) r.notes.push_back("M exceeds the comparison solution by " + format_double(worst_excess));
  if (!time_ok) r.notes.push_back("momentum still present at the deposition bound");
  if (!adm_ok) r.notes.push_back("admissibility defect " + format_double(defect) + " above tolerance");
  r.status = comparison_ok && time_ok && adm_ok ? kExitPass : kExitCheckFailed;
  finish(r, c);
  return r;
}

ExperimentResult run_weak_strong(const ExperimentConfig& config) {
  config.validate();
  const auto& ws = config.weak_strong;
  ModelParams p = model_params(config);
  ManufacturedSolution m;
  try {
    m = ws.strong == "constant" ? constant_solution(ws.H0, ws.U0, p)
                                : travelling_wave(ws.H0, ws.amplitude, ws.speed, p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  // the manufactured force replaces whatever force was configured
  p.force = m.force;
  prepare_output(config);

  const bool same_data = ws.perturbation == 0.0;
  const double C = default_gronwall_constant(m.strong);
  ExperimentResult r;
  common_header(r.summary, config, p);
  add(r.summary, "strong", ws.strong);
  add(r.summary, "t_end", config.solver.t_end);
  add(r.summary, "same_initial_data", same_data ? std::string("yes") : std::string("no"));
  add(r.summary, "gronwall_constant", C);

  std::vector<double> finals;
  double worst_rel = 0.0;
  for (std::size_t n : ws.resolutions) {
    const TorusGrid grid = config.dim == 1 ? TorusGrid(n) : TorusGrid(n, n);
    ConservedState s0 = sample_strong(m.strong, grid, 0.0);
    if (!same_data) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double bump = 1.0 + ws.perturbation * std::sin(2.0 * std::numbers::pi * grid.center(i).x);
        s0.h[i] *= bump;
        s0.q[i] = bump * s0.q[i];
      }
    }
    const auto states = advance(s0, config.solver, p);
    const auto fields = dirac_fields(states, p, config.solver.height_floor);
    DiagnosticsSeries s = series_from_fields(fields, p, form_of(config), false);
    for (const auto& f : fields) s.relative_energy.push_back(relative_energy(f, m.strong, p).total());
    write_series_csv(config.output_dir / ("series_" + std::to_string(n) + ".csv"), s);

    const GronwallReport g =
        gronwall_check(s.times, s.relative_energy, m.strong.c1_norm(), C, ws.tolerance);
    const std::string tag = "_" + std::to_string(n);
    add(r.summary, "E_rel_end" + tag, s.relative_energy.back());
    add(r.summary, "E_rel_max" + tag, max_of(s.relative_energy));
    add(r.summary, "gronwall" + tag, pass_fail(g.pass));
    add(r.summary, "gronwall_defect" + tag, g.defect);
    if (!finals.empty()) add(r.summary, "ratio" + tag, s.relative_energy.back() / finals.back());
    finals.push_back(s.relative_energy.back());
    worst_rel = std::max(worst_rel, max_of(s.relative_energy));
    r.series = std::move(s);
  }
  write_series_csv(config.output_dir / "series.csv", r.series);

  bool shrinks = true;
  for (std::size_t k = 1; k < finals.size(); ++k) shrinks = shrinks && finals[k] <= finals[k - 1] + ws.tolerance;
  add(r.summary, "E_rel_shrinks", pass_fail(shrinks));
  bool ok = shrinks;
  if (ws.strong == "constant") {
    const bool exact = worst_rel <= ws.tolerance;
    add(r.summary, "E_rel_le_tolerance", pass_fail(exact));
    ok = ok && exact;
    if (!exact) r.notes.push_back("constant strong data drifted: E_rel " + format_double(worst_rel));
  }
  if (!shrinks) r.notes.push_back("relative energy grows under refinement");
  if (!same_data) {
    r.notes.push_back("perturbed initial data: report only");
    ok = true;
  }
  r.status = ok ? kExitPass : kExitCheckFailed;
  finish(r, config);
  return r;
}

ExperimentResult run_young_analyze(const ExperimentConfig& c) {
  c.validate();
  const ModelParams p = model_params(c);
  const Exponents e = Exponents::for_model(p);
  const auto& y = c.young;

  std::vector<ConservedState> members;
  std::vector<SolverConfig> solvers;
  if (y.ensemble == "levels") {
    for (double level : y.levels) {
      InitialDataSpec spec = c.initial;
      spec.preset = "constant";
      spec.h0 = level;
      try {
        members.push_back(make_initial_state(spec, c.grid(), p));
      } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
      }
      solvers.push_back(c.solver);
    }
  } else {
    const ConservedState base = initial_state(c, p);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    for (std::size_t k = 0; k < y.members; ++k) {
      SolverConfig sc = c.solver;
      ConservedState s = base;
      if (y.ensemble == "viscosity-ladder") {
        sc.viscosity = y.viscosity0 / std::ldexp(1.0, int(k));
      } else {
        for (std::size_t i = 0; i < s.size(); ++i) {
          const double factor = 1.0 + y.perturbation * noise(rng);
          s.h[i] *= factor;
          s.q[i] = factor * s.q[i];
        }
      }
      members.push_back(std::move(s));
      solvers.push_back(sc);
    }
  }

  double cutoff = y.cutoff;
  if (cutoff <= 0.0) {
    double r0 = 0.0;
    for (const auto& s : members)
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double h = s.h[i];
        const Vec2 u = cell_velocity(h, s.q[i], c.solver.height_floor);
        r0 = std::max(r0, anisotropic_radius(h, std::sqrt(h) * u, e));
      }
    cutoff = 10.0 * (r0 > 0.0 ? r0 : 1.0);
  }
  prepare_output(c);

  const double t_end = c.solver.t_end;
  std::vector<YoungMeasureField> fields;
  for (std::size_t k = 0; k < y.samples; ++k) {
    const double t = t_end * double(k) / double(y.samples - 1);
    if (k > 0)
      for (std::size_t j = 0; j < members.size(); ++j) members[j] = advance_to(members[j], t, solvers[j], p);
    fields.push_back(from_ensemble(members, p, cutoff, c.solver.height_floor));
  }

  ExperimentResult r;
  r.series = series_from_fields(fields, p, form_of(c), false);
  write_series_csv(c.output_dir / "series.csv", r.series);

  const std::size_t snaps = std::min(y.snapshots, fields.size());
  for (std::size_t j = 1; j <= snaps; ++j) {
    const std::size_t k = (fields.size() - 1) * j / snaps;
    write_young_measure(c.output_dir / young_measure_filename(fields[k].t), fields[k]);
  }

  // per-cell moments at the final time
  const auto cat = catalog(e);
  const auto& last = fields.back();
  const auto h_bar = scalar_moment(last, cat.at("h"));
  const auto hp_bar = scalar_moment(last, cat.at("h^p"));
  const auto hu_bar = moment(last, cat.at("hu"));
  const auto kin_bar = scalar_moment(last, cat.at("h|u|^2"));
  double max_var = 0.0, max_conc = 0.0;
  {
    std::ofstream out(c.output_dir / "moments.csv");
    out << "cell,x,y,h,h_p,hu_x,hu_y,h_u2,conc_mass,var_h\n";
    for (std::size_t i = 0; i < last.cells.size(); ++i) {
      double mean = 0.0, second = 0.0;
      for (const Atom& a : last.cells[i].atoms) {
        mean += a.weight * a.l1;
        second += a.weight * a.l1 * a.l1;
      }
      const double var = std::max(0.0, second - mean * mean);
      max_var = std::max(max_var, var);
      max_conc = std::max(max_conc, last.cells[i].conc_mass);
      const Vec2 x = last.grid.center(i);
      const Vec2 hu = std::get<Vec2>(hu_bar[i]);
      out << i << ',' << format_double(x.x) << ',' << format_double(x.y) << ',' << format_double(h_bar[i])
          << ',' << format_double(hp_bar[i]) << ',' << format_double(hu.x) << ',' << format_double(hu.y) << ','
          << format_double(kin_bar[i]) << ',' << format_double(last.cells[i].conc_mass) << ','
          << format_double(var) << '\n';
    }
  }

  const double defect = max_of(r.series.defect);
  const bool adm_ok = defect <= admissibility_slack(c, r.series.E0);
  common_header(r.summary, c, p);
  add(r.summary, "ensemble", y.ensemble);
  add(r.summary, "members", members.size());
  add(r.summary, "cutoff", cutoff);
  add(r.summary, "samples", fields.size());
  add(r.summary, "t_end", t_end);
  add(r.summary, "E0", r.series.E0);
  add(r.summary, "h_bar_cell0", h_bar.front());
  add(r.summary, "h_p_bar_cell0", hp_bar.front());
  add(r.summary, "max_variance_h", max_var);
  add(r.summary, "max_conc_mass", max_conc);
  add(r.summary, "max_defect", defect);
  add(r.summary, "admissibility", pass_fail(adm_ok));
  if (!adm_ok) r.notes.push_back("empirical measure violates admissibility by " + format_double(defect));
  r.status = adm_ok ? kExitPass : kExitCheckFailed;
  finish(r, c);
  return r;
}

ExperimentResult run_stationary_check(const ExperimentConfig& c) {
  c.validate();
  const ModelParams p = model_params(c);
  if (p.model != Model::SavageHutter) throw ConfigError("stationary-check requires the Savage-Hutter model");
  const ConservedState s0 = initial_state(c, p);
  for (const Vec2& q : s0.q)
    if (q.x != 0.0 || q.y != 0.0) throw ConfigError("stationary-check requires u0 = 0");

  std::vector<double> defect;
  try {
    defect = stationary_defect(s0.h, p, s0.grid);
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  const double max_stat = max_of(defect);
  const bool defect_zero = max_stat <= c.checks.stationary_defect * p.d / (2.0 * p.a);
  prepare_output(c);

  const auto states = advance(s0, c.solver, p);
  double max_u = 0.0, max_dh = 0.0;
  for (const auto& s : states) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      max_u = std::max(max_u, norm(cell_velocity(s.h[i], s.q[i], c.solver.height_floor)));
      max_dh = std::max(max_dh, std::abs(s.h[i] - s0.h[i]));
    }
  }
  ExperimentResult r;
  r.series = series_from_states(states, p, form_of(c), false);
  write_series_csv(c.output_dir / "series.csv", r.series);

  const bool still = max_u <= c.checks.stationary_velocity;
  common_header(r.summary, c, p);
  add(r.summary, "max_stationary_defect", max_stat);
  add(r.summary, "defect_zero", defect_zero ? std::string("yes") : std::string("no"));
  add(r.summary, "t_end", states.back().t);
  add(r.summary, "max_velocity", max_u);
  add(r.summary, "max_height_change", max_dh);
  add(r.summary, "verdict", still ? std::string("stationary") : std::string("not stationary"));
  const bool ok = !defect_zero || still;
  if (!ok) r.notes.push_back("zero stationary defect but the pile moved: max|u| " + format_double(max_u));
  if (!still && !defect_zero) r.notes.push_back("not stationary");
  r.status = ok ? kExitPass : kExitCheckFailed;
  finish(r, c);
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::Simulate: return run_simulate(config);
    case Experiment::Deposition: return run_deposition(config);
    case Experiment::WeakStrong: return run_weak_strong(config);
    case Experiment::YoungAnalyze: return run_young_analyze(config);
    case Experiment::StationaryCheck: return run_stationary_check(config);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace mvs
