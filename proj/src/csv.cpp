#include "pamctl/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pamctl/error.hpp"

namespace pamctl {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE) {
    throw AnalysisError("csv line " + std::to_string(line_no) + ": '" + cell +
                        "' is not a number");
  }
  return v;
}

} // namespace

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

const std::vector<std::string>& series_columns() {
  static const std::vector<std::string> columns{
      "t",   "theta_ref", "theta_ref_d1", "theta_ref_d2", "theta",      "error",     "p_a",
      "p_b", "pd_a",      "pd_b",         "u_a",          "u_b",        "kp_ratio_a", "kp_ratio_b"};
  return columns;
}

std::string series_to_csv(const TimeSeries& series, double kp0) {
  std::string out;
  const auto& cols = series_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += '\n';
  for (const auto& s : series.samples) {
    const double row[] = {s.t,   s.theta_ref, s.theta_ref_d1, s.theta_ref_d2, s.theta,
                          s.error, s.p_a,     s.p_b,          s.pd_a,         s.pd_b,
                          s.u_a, s.u_b,       s.kp_a / kp0,   s.kp_b / kp0};
    for (std::size_t i = 0; i < std::size(row); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_row(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw AnalysisError("csv line " + std::to_string(line_no) + ": " +
                          std::to_string(cells.size()) + " cells, header has " +
                          std::to_string(table.header.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c, line_no));
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw AnalysisError("csv input is empty");
  return table;
}

bool CsvTable::has_column(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw AnalysisError("csv has no column '" + name + "'");
  const auto idx = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[idx]);
  return out;
}

TimeSeries series_from_csv(std::string_view text, double kp0) {
  const CsvTable table = parse_csv(text);
  if (table.header != series_columns()) {
    throw AnalysisError("csv header does not match the run log columns");
  }
  TimeSeries series;
  series.samples.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    Sample s;
    s.t = r[0];
    s.theta_ref = r[1];
    s.theta_ref_d1 = r[2];
    s.theta_ref_d2 = r[3];
    s.theta = r[4];
    s.error = r[5];
    s.p_a = r[6];
    s.p_b = r[7];
    s.pd_a = r[8];
    s.pd_b = r[9];
    s.u_a = r[10];
    s.u_b = r[11];
    s.kp_a = r[12] * kp0;
    s.kp_b = r[13] * kp0;
    series.samples.push_back(s);
  }
  if (series.samples.size() > 1) {
    // Nominal step recovered from the span; exact for unjittered logs.
    series.dt_nominal = (series.samples.back().t - series.samples.front().t) /
                        static_cast<double>(series.samples.size() - 1);
  }
  return series;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

} // namespace pamctl
