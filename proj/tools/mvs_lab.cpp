#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "mvs/config.hpp"
#include "mvs/experiments.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool print_config = false;
};

int run(mvs::Experiment experiment, const Flags& flags) {
  mvs::ExperimentConfig config = mvs::default_config(experiment);
  if (!flags.config.empty()) config = mvs::load_config(flags.config, config);
  // the subcommand wins over an [experiment] name in the file
  config.experiment = experiment;
  if (!flags.out.empty()) config.output_dir = flags.out;
  if (flags.seed) config.seed = *flags.seed;
  config.validate();

  if (flags.print_config) {
    std::cout << mvs::config_to_text(config);
    return mvs::kExitPass;
  }
  const mvs::ExperimentResult result = mvs::run_experiment(config);
  for (const auto& [key, value] : result.summary) std::cout << key << ": " << value << '\n';
  for (const auto& note : result.notes) std::cerr << "note: " << note << '\n';
  return result.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure-valued shallow flow laboratory"};
  app.require_subcommand(1);

  Flags flags;
  std::optional<mvs::Experiment> chosen;
  for (mvs::Experiment e : {mvs::Experiment::Simulate, mvs::Experiment::Deposition, mvs::Experiment::WeakStrong,
                            mvs::Experiment::YoungAnalyze, mvs::Experiment::StationaryCheck}) {
    CLI::App* sub = app.add_subcommand(mvs::to_string(e));
    sub->add_option("--config", flags.config, "config file ([section] key = value)");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--seed", flags.seed, "seed for randomized ensembles");
    sub->add_flag("--print-config", flags.print_config, "print the effective config and exit");
    sub->callback([&chosen, e] { chosen = e; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mvs::kExitConfigError;
  }

  try {
    return run(*chosen, flags);
  } catch (const mvs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return mvs::kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return mvs::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mvs::kExitCheckFailed;
  }
}
