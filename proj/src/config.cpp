#include "mvs/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "mvs/io.hpp"

namespace mvs {

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Simulate: return "simulate";
    case Experiment::Deposition: return "deposition";
    case Experiment::WeakStrong: return "weak-strong";
    case Experiment::YoungAnalyze: return "young-analyze";
    case Experiment::StationaryCheck: return "stationary-check";
  }
  return "simulate";
}

Experiment experiment_from_string(const std::string& name) {
  for (Experiment e : {Experiment::Simulate, Experiment::Deposition, Experiment::WeakStrong,
                       Experiment::YoungAnalyze, Experiment::StationaryCheck})
    if (to_string(e) == name) return e;
  throw ConfigError("unknown experiment '" + name + "'");
}

ForceField ForceSpec::build() const {
  if (kind == "zero") return ForceField::zero();
  if (kind == "constant") return ForceField::constant({fx, fy});
  if (kind == "sine") {
    ForceField f;
    const double amp = fx;
    f.eval = [amp](double, const Vec2& x) { return Vec2{amp * std::sin(2.0 * std::numbers::pi * x.x), 0.0}; };
    f.sup_norm = std::abs(amp);
    f.description = "sine(" + format_double(amp) + ")";
    return f;
  }
  throw ConfigError("unknown force kind '" + kind + "'");
}

namespace {

double to_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("trailing characters in number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("not a number: '" + s + "'");
  }
}

std::size_t to_size(const std::string& s) {
  const double v = to_double(s);
  if (v < 0.0 || v != std::floor(v)) throw ConfigError("not a non-negative integer: '" + s + "'");
  return std::size_t(v);
}

// Shortest text that parses back to the same double; config files are read by people.
std::string short_double(double v) {
  char buf[32];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& s, F convert) {
  std::vector<T> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b == std::string::npos) continue;
    out.push_back(convert(item.substr(b, e - b + 1)));
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    if constexpr (std::is_floating_point_v<T>) s += short_double(v[i]);
    else s += std::to_string(v[i]);
  }
  return s;
}

struct Key {
  const char* section;
  const char* name;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define MVS_DOUBLE_KEY(sec, key, member)                                                    \
  Key {                                                                                     \
    sec, key, [](ExperimentConfig& c, const std::string& v) { c.member = to_double(v); },   \
        [](const ExperimentConfig& c) { return short_double(c.member); }                   \
  }
#define MVS_SIZE_KEY(sec, key, member)                                                      \
  Key {                                                                                     \
    sec, key, [](ExperimentConfig& c, const std::string& v) { c.member = to_size(v); },     \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }                  \
  }
#define MVS_STRING_KEY(sec, key, member)                                                    \
  Key {                                                                                     \
    sec, key, [](ExperimentConfig& c, const std::string& v) { c.member = v; },              \
        [](const ExperimentConfig& c) { return std::string(c.member); }                     \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table{
      {"experiment", "name",
       [](ExperimentConfig& c, const std::string& v) { c.experiment = experiment_from_string(v); },
       [](const ExperimentConfig& c) { return to_string(c.experiment); }},
      {"experiment", "seed", [](ExperimentConfig& c, const std::string& v) { c.seed = std::stoull(v); },
       [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      {"experiment", "output",
       [](ExperimentConfig& c, const std::string& v) { c.output_dir = v; },
       [](const ExperimentConfig& c) { return c.output_dir.string(); }},

      {"model", "type",
       [](ExperimentConfig& c, const std::string& v) {
         try {
           c.params.model = model_from_string(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what());
         }
       },
       [](const ExperimentConfig& c) { return to_string(c.params.model); }},
      MVS_DOUBLE_KEY("model", "gamma", params.gamma),
      MVS_DOUBLE_KEY("model", "kappa", params.kappa),
      MVS_DOUBLE_KEY("model", "a", params.a),
      MVS_DOUBLE_KEY("model", "d", params.d),

      MVS_STRING_KEY("force", "kind", force.kind),
      MVS_DOUBLE_KEY("force", "fx", force.fx),
      MVS_DOUBLE_KEY("force", "fy", force.fy),

      {"grid", "dim", [](ExperimentConfig& c, const std::string& v) { c.dim = int(to_size(v)); },
       [](const ExperimentConfig& c) { return std::to_string(c.dim); }},
      MVS_SIZE_KEY("grid", "nx", nx),
      MVS_SIZE_KEY("grid", "ny", ny),

      MVS_DOUBLE_KEY("solver", "cfl", solver.cfl),
      {"solver", "t_end",
       [](ExperimentConfig& c, const std::string& v) {
         c.t_end_auto = v == "auto";
         if (!c.t_end_auto) c.solver.t_end = to_double(v);
       },
       [](const ExperimentConfig& c) { return c.t_end_auto ? std::string("auto") : short_double(c.solver.t_end); }},
      MVS_DOUBLE_KEY("solver", "viscosity", solver.viscosity),
      {"solver", "flux",
       [](ExperimentConfig& c, const std::string& v) {
         if (v != "llf" && v != "local-lax-friedrichs") throw ConfigError("unknown flux '" + v + "'");
         c.solver.flux = FluxKind::LocalLaxFriedrichs;
       },
       [](const ExperimentConfig&) { return std::string("llf"); }},
      MVS_SIZE_KEY("solver", "record_every", solver.record_every),
      MVS_DOUBLE_KEY("solver", "height_floor", solver.height_floor),

      MVS_STRING_KEY("initial", "preset", initial.preset),
      MVS_DOUBLE_KEY("initial", "h0", initial.h0),
      MVS_DOUBLE_KEY("initial", "u0x", initial.u0.x),
      MVS_DOUBLE_KEY("initial", "u0y", initial.u0.y),
      MVS_DOUBLE_KEY("initial", "amplitude", initial.amplitude),
      MVS_DOUBLE_KEY("initial", "h_left", initial.h_left),
      MVS_DOUBLE_KEY("initial", "h_right", initial.h_right),
      MVS_DOUBLE_KEY("initial", "slope", initial.slope),
      MVS_STRING_KEY("initial", "file", initial.file),

      MVS_STRING_KEY("young", "ensemble", young.ensemble),
      MVS_SIZE_KEY("young", "members", young.members),
      MVS_DOUBLE_KEY("young", "viscosity0", young.viscosity0),
      MVS_DOUBLE_KEY("young", "perturbation", young.perturbation),
      {"young", "levels",
       [](ExperimentConfig& c, const std::string& v) { c.young.levels = to_list<double>(v, to_double); },
       [](const ExperimentConfig& c) { return join(c.young.levels); }},
      MVS_DOUBLE_KEY("young", "cutoff", young.cutoff),
      MVS_SIZE_KEY("young", "samples", young.samples),
      MVS_SIZE_KEY("young", "snapshots", young.snapshots),

      MVS_STRING_KEY("weak_strong", "strong", weak_strong.strong),
      MVS_DOUBLE_KEY("weak_strong", "H0", weak_strong.H0),
      MVS_DOUBLE_KEY("weak_strong", "U0x", weak_strong.U0.x),
      MVS_DOUBLE_KEY("weak_strong", "U0y", weak_strong.U0.y),
      MVS_DOUBLE_KEY("weak_strong", "amplitude", weak_strong.amplitude),
      MVS_DOUBLE_KEY("weak_strong", "speed", weak_strong.speed),
      {"weak_strong", "resolutions",
       [](ExperimentConfig& c, const std::string& v) {
         c.weak_strong.resolutions = to_list<std::size_t>(v, to_size);
       },
       [](const ExperimentConfig& c) { return join(c.weak_strong.resolutions); }},
      MVS_DOUBLE_KEY("weak_strong", "perturbation", weak_strong.perturbation),
      MVS_DOUBLE_KEY("weak_strong", "tolerance", weak_strong.tolerance),

      MVS_DOUBLE_KEY("checks", "momentum_tolerance", checks.momentum_tolerance),
      MVS_DOUBLE_KEY("checks", "deposition_threshold", checks.deposition_threshold),
      MVS_DOUBLE_KEY("checks", "admissibility_tolerance", checks.admissibility_tolerance),
      MVS_DOUBLE_KEY("checks", "stationary_velocity", checks.stationary_velocity),
      MVS_DOUBLE_KEY("checks", "stationary_defect", checks.stationary_defect),
      {"checks", "displayed_admissibility",
       [](ExperimentConfig& c, const std::string& v) { c.checks.displayed_admissibility = to_bool(v); },
       [](const ExperimentConfig& c) {
         return std::string(c.checks.displayed_admissibility ? "true" : "false");
       }},
  };
  return table;
}

#undef MVS_DOUBLE_KEY
#undef MVS_SIZE_KEY
#undef MVS_STRING_KEY

}  // namespace

void ExperimentConfig::validate() const {
  try {
    ModelParams p = params;
    p.force = force.build();
    p.validate();
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (dim != 1 && dim != 2) throw ConfigError("grid dim must be 1 or 2");
  if (nx == 0 || (dim == 2 && ny == 0)) throw ConfigError("grid needs at least one cell per axis");
  bool known = false;
  for (const auto& name : initial_presets()) known = known || name == initial.preset;
  if (!known) throw ConfigError("unknown initial data preset '" + initial.preset + "'");
  if (initial.preset == "file" && initial.file.empty()) throw ConfigError("file preset needs initial.file");

  if (young.ensemble != "viscosity-ladder" && young.ensemble != "random-perturbation" &&
      young.ensemble != "levels")
    throw ConfigError("unknown ensemble '" + young.ensemble + "'");
  if (young.ensemble == "levels" ? young.levels.empty() : young.members == 0)
    throw ConfigError("empty ensemble");
  if (young.samples < 2) throw ConfigError("young.samples must be >= 2");
  if (!(young.viscosity0 >= 0.0)) throw ConfigError("young.viscosity0 must be >= 0");

  if (weak_strong.strong != "constant" && weak_strong.strong != "travelling-wave")
    throw ConfigError("unknown strong solution '" + weak_strong.strong + "'");
  if (weak_strong.resolutions.empty()) throw ConfigError("weak_strong.resolutions is empty");
  for (std::size_t n : weak_strong.resolutions)
    if (n == 0) throw ConfigError("weak_strong.resolutions must be positive");
  if (!(weak_strong.H0 > std::abs(weak_strong.amplitude)))
    throw ConfigError("weak_strong.H0 must exceed |amplitude| so that H >= c > 0");
  if (!(checks.momentum_tolerance >= 0.0) || !(checks.deposition_threshold >= 0.0) ||
      !(checks.admissibility_tolerance >= 0.0) || !(checks.stationary_velocity >= 0.0) ||
      !(checks.stationary_defect >= 0.0))
    throw ConfigError("check tolerances must be >= 0");
}

ExperimentConfig default_config(Experiment experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  c.output_dir = "out/" + to_string(experiment);
  switch (experiment) {
    case Experiment::Simulate:
      c.initial.preset = "sine-perturbation";
      c.initial.amplitude = 0.2;
      c.initial.u0 = {0.5, 0.0};
      c.solver.t_end = 1.0;
      break;
    case Experiment::Deposition:
      c.initial.preset = "dam-break";
      c.t_end_auto = true;
      break;
    case Experiment::WeakStrong:
      c.params.model = Model::Euler;
      c.params.gamma = 2.0;
      c.solver.t_end = 1.0;
      break;
    case Experiment::YoungAnalyze:
      c.initial.preset = "dam-break";
      c.solver.t_end = 0.5;
      break;
    case Experiment::StationaryCheck:
      c.initial.preset = "stationary-pile";
      c.nx = 100;
      c.solver.t_end = 1.0;
      break;
  }
  return c;
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  for (const auto& [section, entries] : tree) {
    if (entries.empty()) throw ConfigError("key '" + section + "' outside of a section");
    for (const auto& [name, value] : entries) {
      const Key* match = nullptr;
      for (const Key& k : keys())
        if (section == k.section && name == k.name) match = &k;
      if (!match) throw ConfigError("unknown config key '" + section + "." + name + "'");
      match->set(base, value.get_value<std::string>());
    }
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  return parse_config(in, std::move(base));
}

std::string config_to_text(const ExperimentConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const Key& k : keys()) {
    if (section != k.section) {
      if (!section.empty()) out << '\n';
      section = k.section;
      out << '[' << section << "]\n";
    }
    out << k.name << " = " << k.get(config) << '\n';
  }
  return out.str();
}

}  // namespace mvs
