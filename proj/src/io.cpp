#include "mvs/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mvs {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("malformed number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

void write_series_csv(std::ostream& out, const DiagnosticsSeries& s) {
  const bool rel = !s.relative_energy.empty();
  out << "t,E,M,M_tilde,defect" << (rel ? ",E_rel" : "") << '\n';
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    out << format_double(s.times[k]) << ',' << format_double(s.energy[k]) << ','
        << format_double(s.momentum[k]) << ',' << format_double(s.comparison[k]) << ','
        << format_double(s.defect[k]);
    if (rel) out << ',' << format_double(s.relative_energy[k]);
    out << '\n';
  }
}

void write_series_csv(const std::filesystem::path& path, const DiagnosticsSeries& series) {
  auto out = open_out(path);
  write_series_csv(out, series);
}

DiagnosticsSeries read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty series file");
  const auto header = split(line, ',');
  const bool rel = header.size() == 6 && header[5] == "E_rel";
  if (!(header.size() == 5 || rel) || header[0] != "t" || header[1] != "E" || header[2] != "M" ||
      header[3] != "M_tilde" || header[4] != "defect")
    throw std::runtime_error("unexpected series header '" + line + "'");

  DiagnosticsSeries s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != header.size()) throw std::runtime_error("series row has wrong column count");
    s.times.push_back(parse_double(cols[0]));
    s.energy.push_back(parse_double(cols[1]));
    s.momentum.push_back(parse_double(cols[2]));
    s.comparison.push_back(parse_double(cols[3]));
    s.defect.push_back(parse_double(cols[4]));
    if (rel) s.relative_energy.push_back(parse_double(cols[5]));
  }
  if (!s.energy.empty()) s.E0 = s.energy.front();
  return s;
}

DiagnosticsSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  return read_series_csv(in);
}

void write_summary(const std::filesystem::path& path, const Summary& summary) {
  auto out = open_out(path);
  for (const auto& [k, v] : summary) out << k << ": " << v << '\n';
}

Summary read_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  Summary s;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find(": ");
    if (pos == std::string::npos) continue;
    s.emplace_back(line.substr(0, pos), line.substr(pos + 2));
  }
  return s;
}

void write_young_measure(std::ostream& out, const YoungMeasureField& field) {
  out << "# t=" << format_double(field.t) << " p=" << format_double(field.exponents.p)
      << " q=" << format_double(field.exponents.q) << " dim=" << field.grid.dim()
      << " nx=" << field.grid.nx() << " ny=" << field.grid.ny() << '\n';
  out << "# cell kind weight first second_x second_y conc_mass\n";
  for (std::size_t i = 0; i < field.cells.size(); ++i) {
    const auto& c = field.cells[i];
    const std::string m = format_double(c.conc_mass);
    for (const Atom& a : c.atoms)
      out << i << " atom " << format_double(a.weight) << ' ' << format_double(a.l1) << ' '
          << format_double(a.lp.x) << ' ' << format_double(a.lp.y) << ' ' << m << '\n';
    for (const SphereAtom& s : c.sphere_atoms)
      out << i << " sphere " << format_double(s.weight) << ' ' << format_double(s.b1) << ' '
          << format_double(s.bp.x) << ' ' << format_double(s.bp.y) << ' ' << m << '\n';
  }
}

void write_young_measure(const std::filesystem::path& path, const YoungMeasureField& field) {
  auto out = open_out(path);
  write_young_measure(out, field);
}

YoungMeasureField read_young_measure(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# t=", 0) != 0)
    throw std::runtime_error("missing Young measure header");
  double t = 0.0, p = 0.0, q = 0.0;
  int dim = 0;
  std::size_t nx = 0, ny = 0;
  for (const auto& tok : split(line.substr(2), ' ')) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "t") t = parse_double(val);
    else if (key == "p") p = parse_double(val);
    else if (key == "q") q = parse_double(val);
    else if (key == "dim") dim = std::stoi(val);
    else if (key == "nx") nx = std::stoul(val);
    else if (key == "ny") ny = std::stoul(val);
  }
  if (dim != 1 && dim != 2) throw std::runtime_error("bad grid dimension in Young measure header");
  const TorusGrid grid = dim == 1 ? TorusGrid(nx) : TorusGrid(nx, ny);
  YoungMeasureField field(grid, t, Exponents{p, q});
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split(line, ' ');
    if (cols.size() != 7) throw std::runtime_error("Young measure record has wrong column count");
    const std::size_t cell = std::stoul(cols[0]);
    if (cell >= grid.size()) throw std::runtime_error("Young measure cell index out of range");
    const double w = parse_double(cols[2]), first = parse_double(cols[3]);
    const Vec2 second{parse_double(cols[4]), parse_double(cols[5])};
    auto& c = field.cells[cell];
    c.conc_mass = parse_double(cols[6]);
    if (cols[1] == "atom") c.atoms.push_back({w, first, second});
    else if (cols[1] == "sphere") c.sphere_atoms.push_back({w, first, second});
    else throw std::runtime_error("unknown Young measure record kind '" + cols[1] + "'");
  }
  return field;
}

std::string young_measure_filename(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "ym_%.6f.txt", t);
  return buf;
}

}  // namespace mvs
