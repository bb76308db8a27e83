#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mvs/config.hpp"
#include "mvs/experiments.hpp"
#include "mvs/io.hpp"
#include "mvs/solver.hpp"

using namespace mvs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(testing::TempDir()) / ("mvs_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MVS_LAB_EXE) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string lookup(const Summary& s, const std::string& key) {
  for (const auto& [k, v] : s)
    if (k == key) return v;
  return "<missing " + key + ">";
}

ExperimentConfig parse(const std::string& text, Experiment e = Experiment::Simulate) {
  std::istringstream in(text);
  return parse_config(in, default_config(e));
}

}  // namespace

TEST(Config, PrintedConfigParsesBack) {
  for (Experiment e : {Experiment::Simulate, Experiment::Deposition, Experiment::WeakStrong,
                       Experiment::YoungAnalyze, Experiment::StationaryCheck}) {
    const ExperimentConfig c = default_config(e);
    const std::string text = config_to_text(c);
    const ExperimentConfig back = parse(text, Experiment::Simulate);
    EXPECT_EQ(config_to_text(back), text);
    EXPECT_EQ(back.experiment, e);
    EXPECT_NO_THROW(back.validate());
  }
}

TEST(Config, ParsesSections) {
  const auto c = parse(
      "[model]\ntype = euler\ngamma = 1.4\n[grid]\ndim = 2\nnx = 32\nny = 16\n"
      "[solver]\nt_end = 0.5\n[force]\nkind = constant\nfx = 0.1\n[young]\nlevels = 1, 2.5\n"
      "[weak_strong]\nresolutions = 16,32\n");
  EXPECT_EQ(c.params.model, Model::Euler);
  EXPECT_EQ(c.params.gamma, 1.4);
  EXPECT_EQ(c.grid(), TorusGrid(32, 16));
  EXPECT_EQ(c.solver.t_end, 0.5);
  EXPECT_EQ(c.young.levels, (std::vector<double>{1.0, 2.5}));
  EXPECT_EQ(c.weak_strong.resolutions, (std::vector<std::size_t>{16, 32}));
  EXPECT_NEAR(c.force.build().sup_norm, 0.1, 1e-15);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse("[model]\ncolour = red\n"), ConfigError);
  EXPECT_THROW(parse("[grid]\nnx = many\n"), ConfigError);
  EXPECT_THROW(parse("[grid]\nnx = 2.5\n"), ConfigError);
  EXPECT_THROW(parse("[experiment]\nname = fly\n"), ConfigError);
  EXPECT_THROW(parse("[solver]\ncfl = 1.5\n").validate(), ConfigError);
  EXPECT_THROW(parse("[initial]\npreset = volcano\n").validate(), ConfigError);
  EXPECT_THROW(parse("[model]\nd = 0\n").validate(), ConfigError);
  EXPECT_THROW(parse("[grid]\ndim = 3\n").validate(), ConfigError);
  EXPECT_THROW(parse("[force]\nkind = magnetic\n").validate(), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/mvs.ini", default_config(Experiment::Simulate)), ConfigError);
}

TEST(Io, SeriesRoundTripIsLossless) {
  DiagnosticsSeries s;
  s.times = {0.0, 0.1, 1.0 / 3.0};
  s.energy = {2.5, 2.4999999999999996, 1e-300};
  s.momentum = {0.0, 0.123456789012345678, 5e-17};
  s.comparison = {std::nan(""), 1.0, 0.0};
  s.defect = {0.0, 0.0, 1e-20};
  s.relative_energy = {0.0, 1e-11, 3.0};
  std::stringstream buf;
  write_series_csv(buf, s);
  const auto back = read_series_csv(buf);
  EXPECT_EQ(back.times, s.times);
  EXPECT_EQ(back.energy, s.energy);
  EXPECT_EQ(back.momentum, s.momentum);
  EXPECT_TRUE(std::isnan(back.comparison[0]));
  EXPECT_EQ(back.comparison[1], 1.0);
  EXPECT_EQ(back.defect, s.defect);
  EXPECT_EQ(back.relative_energy, s.relative_energy);
  EXPECT_EQ(back.E0, 2.5);

  std::istringstream bad("t,E,M\n0,1,2\n");
  EXPECT_THROW(read_series_csv(bad), std::runtime_error);
}

TEST(Io, YoungMeasureRoundTrip) {
  YoungMeasureField f(TorusGrid(3, 2), 0.25, {1.4, 2.0});
  f.cells[0].atoms = {{0.5, 1.0 / 3.0, {0.1, -0.2}}, {0.5, 2.0, {}}};
  f.cells[4].atoms = {{1.0, 0.7, {0.3, 0.0}}};
  f.cells[4].conc_mass = 0.125;
  f.cells[4].sphere_atoms = {{1.0, 0.0, {1.0, 0.0}}};
  std::stringstream buf;
  write_young_measure(buf, f);
  const auto back = read_young_measure(buf);
  EXPECT_EQ(back.grid, f.grid);
  EXPECT_EQ(back.t, 0.25);
  EXPECT_EQ(back.exponents, f.exponents);
  for (std::size_t i = 0; i < f.cells.size(); ++i) {
    ASSERT_EQ(back.cells[i].atoms.size(), f.cells[i].atoms.size());
    for (std::size_t k = 0; k < f.cells[i].atoms.size(); ++k) {
      EXPECT_EQ(back.cells[i].atoms[k].l1, f.cells[i].atoms[k].l1);
      EXPECT_EQ(back.cells[i].atoms[k].lp, f.cells[i].atoms[k].lp);
    }
    EXPECT_EQ(back.cells[i].conc_mass, f.cells[i].conc_mass);
    EXPECT_EQ(back.cells[i].sphere_atoms.size(), f.cells[i].sphere_atoms.size());
  }
  EXPECT_EQ(young_measure_filename(0.5), "ym_0.500000.txt");
}

TEST(Experiments, DepositionRejectsStrongForce) {
  auto c = default_config(Experiment::Deposition);
  c.force.kind = "constant";
  c.force.fx = 1.0;
  c.output_dir = scratch("dep_reject");
  EXPECT_THROW(run_deposition(c), ConfigError);
  c.params.model = Model::Euler;
  c.force.kind = "zero";
  EXPECT_THROW(run_deposition(c), ConfigError);
}

TEST(Experiments, DepositionDamBreak) {
  auto c = default_config(Experiment::Deposition);
  c.output_dir = scratch("dep");
  const auto r = run_deposition(c);
  EXPECT_EQ(r.status, kExitPass);
  EXPECT_LE(std::stod(lookup(r.summary, "T_measured")), std::stod(lookup(r.summary, "T_bound")));
  const auto series = read_series_csv(c.output_dir / "series.csv");
  EXPECT_NO_THROW(series.validate());
  EXPECT_EQ(series.momentum, r.series.momentum);
  EXPECT_EQ(read_summary(c.output_dir / "summary.txt"), r.summary);
}

TEST(Experiments, DepositionOfARestingPileIsImmediate) {
  auto c = default_config(Experiment::Deposition);
  c.initial.preset = "stationary-pile";
  c.solver.t_end = 0.2;
  c.t_end_auto = false;
  c.output_dir = scratch("dep_rest");
  const auto r = run_deposition(c);
  EXPECT_EQ(r.status, kExitPass);
  EXPECT_EQ(std::stod(lookup(r.summary, "T_measured")), 0.0);
}

TEST(Experiments, WeakStrongConstantData) {
  for (Model m : {Model::Euler, Model::SavageHutter}) {
    auto c = default_config(Experiment::WeakStrong);
    c.params.model = m;
    c.weak_strong.strong = "constant";
    c.weak_strong.U0 = {0.4, 0.0};
    c.output_dir = scratch("ws_const");
    const auto r = run_weak_strong(c);
    EXPECT_EQ(r.status, kExitPass);
    EXPECT_EQ(lookup(r.summary, "E_rel_le_tolerance"), "pass");
    for (std::size_t n : c.weak_strong.resolutions) {
      const auto s = read_series_csv(c.output_dir / ("series_" + std::to_string(n) + ".csv"));
      for (double e : s.relative_energy) EXPECT_LE(e, 1e-10);
    }
  }
}

TEST(Experiments, WeakStrongPerturbedIsReportOnly) {
  auto c = default_config(Experiment::WeakStrong);
  c.weak_strong.perturbation = 0.1;
  c.weak_strong.resolutions = {32, 64};
  c.output_dir = scratch("ws_pert");
  const auto r = run_weak_strong(c);
  EXPECT_EQ(r.status, kExitPass);
  EXPECT_EQ(lookup(r.summary, "same_initial_data"), "no");
}

TEST(Experiments, YoungAnalyzeLevels) {
  auto c = default_config(Experiment::YoungAnalyze);
  c.young.ensemble = "levels";
  c.young.levels = {1.0, 3.0};
  c.young.samples = 5;
  c.solver.t_end = 0.1;
  c.nx = 20;
  c.output_dir = scratch("ya_levels");
  const auto r = run_young_analyze(c);
  EXPECT_EQ(r.status, kExitPass);
  EXPECT_DOUBLE_EQ(std::stod(lookup(r.summary, "h_bar_cell0")), 2.0);
  EXPECT_DOUBLE_EQ(std::stod(lookup(r.summary, "h_p_bar_cell0")), 5.0);
  EXPECT_TRUE(fs::exists(c.output_dir / "moments.csv"));
  EXPECT_TRUE(fs::exists(c.output_dir / young_measure_filename(0.1)));
}

TEST(Experiments, YoungAnalyzeIdenticalMembers) {
  auto c = default_config(Experiment::YoungAnalyze);
  c.young.ensemble = "random-perturbation";
  c.young.perturbation = 0.0;
  c.young.samples = 10;
  c.solver.t_end = 0.1;
  c.output_dir = scratch("ya_same");
  const auto r = run_young_analyze(c);
  EXPECT_EQ(r.status, kExitPass);
  EXPECT_EQ(std::stod(lookup(r.summary, "max_variance_h")), 0.0);
  EXPECT_EQ(std::stod(lookup(r.summary, "max_conc_mass")), 0.0);
}

TEST(Experiments, YoungAnalyzeLadderIsAdmissible) {
  auto c = default_config(Experiment::YoungAnalyze);
  c.output_dir = scratch("ya_ladder");
  const auto r = run_young_analyze(c);
  EXPECT_EQ(r.status, kExitPass);
  EXPECT_LE(std::stod(lookup(r.summary, "max_defect")), 1e-8 * r.series.E0);
}

TEST(Experiments, StationaryChecks) {
  auto c = default_config(Experiment::StationaryCheck);
  c.output_dir = scratch("stat");
  for (double slope : {-1.0, 0.2}) {
    c.initial.slope = slope;
    const auto r = run_stationary_check(c);
    EXPECT_EQ(r.status, kExitPass);
    EXPECT_EQ(lookup(r.summary, "verdict"), "stationary");
  }
  c.initial.preset = "constant";
  EXPECT_EQ(run_stationary_check(c).status, kExitPass);

  c.initial.preset = "stationary-pile";
  c.initial.slope = 0.8;
  const auto moving = run_stationary_check(c);
  EXPECT_EQ(moving.status, kExitPass);
  EXPECT_EQ(lookup(moving.summary, "defect_zero"), "no");
  EXPECT_EQ(lookup(moving.summary, "verdict"), "not stationary");

  c.initial.preset = "sine-perturbation";
  c.initial.u0 = {0.1, 0.0};
  EXPECT_THROW(run_stationary_check(c), ConfigError);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("exit");
  EXPECT_EQ(run_cli("stationary-check --out " + (dir / "a").string()), 0);
  EXPECT_EQ(run_cli("simulate --print-config"), 0);
  EXPECT_EQ(run_cli("teleport"), 2);
  EXPECT_EQ(run_cli(""), 2);

  write_file(dir / "bad.ini", "[model]\nflavour = vanilla\n");
  EXPECT_EQ(run_cli("simulate --config " + (dir / "bad.ini").string()), 2);
  write_file(dir / "force.ini", "[force]\nkind = constant\nfx = 1.0\n");
  EXPECT_EQ(run_cli("deposition --config " + (dir / "force.ini").string() + " --out " + (dir / "b").string()), 2);
  EXPECT_FALSE(fs::exists(dir / "b" / "series.csv"));

  write_file(dir / "negative.ini", "[checks]\nadmissibility_tolerance = -1\n");
  EXPECT_EQ(run_cli("simulate --config " + (dir / "negative.ini").string()), 2);

  // a moving pile declared stationary by a loose defect tolerance fails the check
  write_file(dir / "loose.ini", "[initial]\nslope = 0.8\n[checks]\nstationary_defect = 1e9\n");
  EXPECT_EQ(run_cli("stationary-check --config " + (dir / "loose.ini").string() + " --out " + (dir / "c").string()), 1);
}

TEST(Cli, PrintConfigRoundTrips) {
  const fs::path dir = scratch("print");
  const std::string cmd =
      std::string(MVS_LAB_EXE) + " weak-strong --seed 42 --print-config > " + (dir / "ws.ini").string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  const auto c = load_config(dir / "ws.ini", default_config(Experiment::Simulate));
  EXPECT_EQ(c.experiment, Experiment::WeakStrong);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(config_to_text(c), read_file(dir / "ws.ini"));
}

TEST(Cli, RunsAreBitReproducible) {
  const fs::path dir = scratch("repro");
  write_file(dir / "rp.ini",
             "[young]\nensemble = random-perturbation\nmembers = 3\nsamples = 20\n[solver]\nt_end = 0.2\n");
  for (const char* sub : {"a", "b"})
    ASSERT_EQ(run_cli("young-analyze --seed 7 --config " + (dir / "rp.ini").string() + " --out " +
                      (dir / sub).string()),
              0);
  for (const char* file : {"series.csv", "summary.txt", "moments.csv"})
    EXPECT_EQ(read_file(dir / "a" / file), read_file(dir / "b" / file)) << file;

  ASSERT_EQ(run_cli("young-analyze --seed 8 --config " + (dir / "rp.ini").string() + " --out " +
                    (dir / "c").string()),
            0);
  EXPECT_NE(read_file(dir / "a" / "moments.csv"), read_file(dir / "c" / "moments.csv"));
}

TEST(Cli, SimulateWritesOutputs) {
  const fs::path dir = scratch("sim");
  ASSERT_EQ(run_cli("simulate --out " + dir.string()), 0);
  const auto s = read_series_csv(dir / "series.csv");
  EXPECT_NO_THROW(s.validate());
  const auto summary = read_summary(dir / "summary.txt");
  EXPECT_EQ(lookup(summary, "status"), "pass");
  std::ifstream ym(dir / young_measure_filename(1.0));
  ASSERT_TRUE(ym.good());
  const auto field = read_young_measure(ym);
  EXPECT_NO_THROW(field.validate());
}
