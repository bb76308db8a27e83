#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvs/core.hpp"
#include "mvs/presets.hpp"
#include "mvs/solver.hpp"

namespace mvs {

/// Invalid or inconsistent configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { Simulate, Deposition, WeakStrong, YoungAnalyze, StationaryCheck };

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

/// Force field description: zero, constant (fx, fy) or sine (fx sin 2πx e_x).
struct ForceSpec {
  std::string kind = "zero";
  double fx = 0.0;
  double fy = 0.0;

  ForceField build() const;
};

struct YoungSpec {
  std::string ensemble = "viscosity-ladder";  // viscosity-ladder | random-perturbation | levels
  std::size_t members = 4;
  double viscosity0 = 1e-2;    // ladder: ε_k = viscosity0 / 2^k
  double perturbation = 0.05;  // random-perturbation: relative amplitude of the height noise
  std::vector<double> levels{1.0, 3.0};
  double cutoff = -1.0;        // <= 0 means 10 × the largest initial anisotropic radius
  std::size_t samples = 200;   // time samples for the admissibility series
  std::size_t snapshots = 3;   // ym_<t>.txt files written
};

struct WeakStrongSpec {
  std::string strong = "travelling-wave";  // constant | travelling-wave
  double H0 = 1.0;
  Vec2 U0;
  double amplitude = 0.2;
  double speed = 1.0;
  std::vector<std::size_t> resolutions{64, 128, 256};
  double perturbation = 0.0;  // > 0 perturbs the initial height: report only
  double tolerance = 1e-10;
};

struct CheckSpec {
  double momentum_tolerance = 1e-3;       // × M(0) in M(t) <= M̃(t) + tol
  double deposition_threshold = 1e-8;     // ε_M relative to M(0)
  double admissibility_tolerance = 1e-8;  // × E0
  double stationary_velocity = 1e-10;
  double stationary_defect = 1e-9;        // × d/(2a): defect counted as zero below this
  bool displayed_admissibility = false;   // SH work term multiplies f by d
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Simulate;
  ModelParams params;
  ForceSpec force;
  int dim = 1;
  std::size_t nx = 200;
  std::size_t ny = 1;
  SolverConfig solver;
  bool t_end_auto = false;  // deposition: run to 1.25 × the deposition bound
  InitialDataSpec initial;
  YoungSpec young;
  WeakStrongSpec weak_strong;
  CheckSpec checks;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;

  TorusGrid grid() const { return dim == 1 ? TorusGrid(nx) : TorusGrid(nx, ny); }

  /// Throws ConfigError on out-of-range values or unknown presets.
  void validate() const;
};

/// Defaults for one experiment (each experiment ships its own preset choices).
ExperimentConfig default_config(Experiment experiment);

/// Reads `[section]` / `key = value` text on top of `base`. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base);
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base);

/// Full configuration as parseable text.
std::string config_to_text(const ExperimentConfig& config);

}  // namespace mvs
