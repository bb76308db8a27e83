#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mvs/diagnostics.hpp"
#include "mvs/young.hpp"

namespace mvs {

/// Shortest round-trip text for a double (17 significant digits, "nan"/"inf" spelled out).
std::string format_double(double v);

/// series.csv: header `t,E,M,M_tilde,defect[,E_rel]`, one row per sample.
void write_series_csv(std::ostream& out, const DiagnosticsSeries& series);
void write_series_csv(const std::filesystem::path& path, const DiagnosticsSeries& series);

/// Parses a series.csv. E0 is recovered as E at the first row.
/// Throws std::runtime_error on a malformed header or row.
DiagnosticsSeries read_series_csv(std::istream& in);
DiagnosticsSeries read_series_csv(const std::filesystem::path& path);

/// Ordered `key: value` pairs of summary.txt.
using Summary = std::vector<std::pair<std::string, std::string>>;

void write_summary(const std::filesystem::path& path, const Summary& summary);
Summary read_summary(const std::filesystem::path& path);

/// Young measure text format, one record per line:
///   cell kind weight first second_x second_y conc_mass
/// kind ∈ {atom, sphere}; `first` is λ₁ or β₁, `second` is λ′ or β′.
/// A header comment records t, p, q and the grid shape.
void write_young_measure(std::ostream& out, const YoungMeasureField& field);
void write_young_measure(const std::filesystem::path& path, const YoungMeasureField& field);
YoungMeasureField read_young_measure(std::istream& in);

/// File name ym_<t>.txt with t printed to 6 decimals.
std::string young_measure_filename(double t);

}  // namespace mvs
