#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pamctl/config_file.hpp"
#include "pamctl/hysteresis.hpp"
#include "pamctl/metrics.hpp"
#include "pamctl/simulation.hpp"

namespace pamctl {

struct ControllerRuns {
  ControllerKind kind = ControllerKind::PID;
  std::vector<RunResult> runs; // one per repeat
  ErrorMetrics mean;           // per-run metrics averaged over repeats
};

/// Every listed controller on the same reference, plant and seeds.
struct Comparison {
  std::vector<ControllerRuns> controllers; // in plan order
};

Comparison compare_controllers(const ExperimentPlan& plan);

struct SweepRow {
  double value = 0.0;                // deg or s
  std::vector<ErrorMetrics> metrics; // aligned with SweepTable::controllers
};

struct SweepTable {
  PlanKind kind = PlanKind::SweepAmplitude;
  std::vector<ControllerKind> controllers;
  std::vector<SweepRow> rows; // in plan order of sweep values
};

SweepTable run_sweep(const ExperimentPlan& plan);

struct HysteresisResult {
  ProtocolRecord record;
  std::vector<HysteresisLoop> loops;
  std::vector<DeadzoneReport> reports;
  std::vector<WidthSummary> trend;
};

/// Runs every protocol of the plan on its plant and analyses the loops.
std::vector<HysteresisResult> run_hysteresis(const ExperimentPlan& plan);

/// Loop analysis of an arbitrary (t, pressure, angle) log. Vertices are the
/// pressure turning points with at least `min_excursion` kPa of travel.
HysteresisResult analyze_log(const std::vector<double>& t, const std::vector<double>& pressure,
                             const std::vector<double>& angle, double min_excursion = 20.0,
                             const DeadzoneThresholds& thresholds = {});

// --- text outputs -----------------------------------------------------------

/// "mae,rmse,e_max,e_min,var" rows per controller.
std::string comparison_metrics_csv(const Comparison& comparison);

/// Aligned table. With all three controllers present each cell reads
/// "PID+AF (PID, PID+FF)"; otherwise one column per controller.
std::string comparison_metrics_text(const Comparison& comparison);

std::string sweep_metrics_csv(const SweepTable& table);
std::string sweep_metrics_text(const SweepTable& table);

/// Four stacked panels: angle and reference, error, chamber pressures,
/// gain amplification. `label` is printed as the title.
std::string series_svg(const TimeSeries& series, double kp0, const std::string& label);

// --- file emission ----------------------------------------------------------

/// File stem of a controller's run log: "pid", "pid_ff", "pid_af".
std::string controller_file_stem(ControllerKind kind);

/// Writes <stem>.csv, metrics.csv and metrics.txt (plus an SVG and an
/// envelope CSV per controller when `plots` is set). Returns written paths.
std::vector<std::filesystem::path> emit_comparison(const Comparison& comparison,
                                                   const std::filesystem::path& out_dir,
                                                   bool plots);

std::vector<std::filesystem::path> emit_sweep(const SweepTable& table,
                                              const std::filesystem::path& out_dir);

/// Per protocol p: hysteresis_p.csv (log), loops_p.csv (per-sample
/// gradient and flag), deadzones_p.json (summary), widths_p.csv.
std::vector<std::filesystem::path> emit_hysteresis(const std::vector<HysteresisResult>& results,
                                                   const std::filesystem::path& out_dir);

/// loops.csv, deadzones.json and widths.csv for an analysed external log.
std::vector<std::filesystem::path> emit_analysis(const HysteresisResult& result,
                                                 const std::filesystem::path& out_dir);

/// Creates the directory if needed; IoError when that fails.
void ensure_directory(const std::filesystem::path& dir);

} // namespace pamctl
