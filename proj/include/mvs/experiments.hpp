#pragma once

#include <string>
#include <vector>

#include "mvs/config.hpp"
#include "mvs/diagnostics.hpp"
#include "mvs/io.hpp"

namespace mvs {

/// Exit-status contract of the command line tool.
enum ExitStatus : int { kExitPass = 0, kExitCheckFailed = 1, kExitConfigError = 2 };

struct ExperimentResult {
  int status = kExitPass;
  Summary summary;
  DiagnosticsSeries series;       // main series (finest resolution for weak-strong)
  std::vector<std::string> notes;  // one line per failed or reported check
};

/// Free evolution from the configured preset; checks admissibility and mass conservation.
ExperimentResult run_simulate(const ExperimentConfig& config);

/// Momentum decay against the comparison solution and the deposition time bound.
/// Throws ConfigError unless the model is Savage-Hutter with ‖f‖∞ < d.
ExperimentResult run_deposition(const ExperimentConfig& config);

/// Runs from sampled strong data at each resolution and tracks the relative energy.
ExperimentResult run_weak_strong(const ExperimentConfig& config);

/// Empirical measure-valued solution of an ensemble: moments, concentration,
/// variance and the admissibility defect.
ExperimentResult run_young_analyze(const ExperimentConfig& config);

/// Stationary-pile check: zero stationary defect must keep the velocity at zero.
ExperimentResult run_stationary_check(const ExperimentConfig& config);

/// Dispatches on config.experiment. Creates the output directory first.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Energy, momentum and admissibility columns for a recorded run.
/// `comparison` fills M_tilde with the deposition comparison solution when set.
DiagnosticsSeries series_from_states(const std::vector<ConservedState>& states, const ModelParams& params,
                                     AdmissibilityForm form, bool comparison);

}  // namespace mvs
