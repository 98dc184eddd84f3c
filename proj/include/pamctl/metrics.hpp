#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pamctl/series.hpp"

namespace pamctl {

/// Tracking-error summary over an analysis window. var is the population
/// variance, so rmse^2 == mean^2 + var.
struct ErrorMetrics {
  double mae = 0.0;
  double rmse = 0.0;
  double e_max = 0.0;
  double e_min = 0.0;
  double var = 0.0;
};

/// Throws AnalysisError on empty input.
ErrorMetrics compute_metrics(std::span<const double> errors);
ErrorMetrics compute_metrics(const TimeSeries& series);

/// Field-wise mean of per-run metrics.
ErrorMetrics average_metrics(std::span<const ErrorMetrics> runs);

enum class WindowProtocol {
  Demo3Cycle,   // reference played three times, middle cycle analysed
  Sweep7Period, // seven sinusoid periods, periods 2..6 analysed
};

/// Demo3Cycle -> [period, 2*period); Sweep7Period -> [period, 6*period).
/// Throws AnalysisError if the series does not cover the whole protocol.
TimeSeries analysis_window(const TimeSeries& series, WindowProtocol protocol, double period);

struct AggregateSeries {
  std::vector<double> t;
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
};

using FieldSelector = std::function<double(const Sample&)>;

/// Pointwise mean / min / max of one field across runs. Every run must carry
/// identical timestamps; throws AnalysisError otherwise.
AggregateSeries aggregate_runs(std::span<const TimeSeries> runs, const FieldSelector& field);

/// Linear interpolation of every field onto t = k * dt_nominal, for runs whose
/// timestamps were jittered. The result spans the same nominal step count.
TimeSeries resample_nominal(const TimeSeries& series);

} // namespace pamctl
