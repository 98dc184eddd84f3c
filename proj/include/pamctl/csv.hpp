#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pamctl/series.hpp"

namespace pamctl {

/// "%.9g": the fixed float format of every emitted file.
std::string format_number(double value);

/// t, theta_ref, theta_ref_d1, theta_ref_d2, theta, error, p_a, p_b,
/// pd_a, pd_b, u_a, u_b, kp_ratio_a, kp_ratio_b
const std::vector<std::string>& series_columns();

/// Header plus one row per sample; gains are written as kp / kp0.
std::string series_to_csv(const TimeSeries& series, double kp0);

/// Inverse of series_to_csv up to the 9-digit rounding. Throws AnalysisError
/// when the header differs from series_columns() or a row is malformed.
TimeSeries series_from_csv(std::string_view text, double kp0);

/// Numeric CSV with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Throws AnalysisError naming the missing column.
  std::vector<double> column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

/// Throws AnalysisError on ragged rows or non-numeric cells.
CsvTable parse_csv(std::string_view text);

/// IoError when the file cannot be read or written.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace pamctl
