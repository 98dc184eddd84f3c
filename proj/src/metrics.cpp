#include "pamctl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pamctl/error.hpp"

namespace pamctl {

ErrorMetrics compute_metrics(std::span<const double> errors) {
  if (errors.empty()) throw AnalysisError("compute_metrics: empty error series");
  const double n = static_cast<double>(errors.size());
  double sum = 0.0;
  double sum_abs = 0.0;
  double sum_sq = 0.0;
  ErrorMetrics m;
  m.e_max = errors.front();
  m.e_min = errors.front();
  for (double e : errors) {
    sum += e;
    sum_abs += std::abs(e);
    sum_sq += e * e;
    m.e_max = std::max(m.e_max, e);
    m.e_min = std::min(m.e_min, e);
  }
  const double mean = sum / n;
  m.mae = sum_abs / n;
  m.rmse = std::sqrt(sum_sq / n);
  // Two-pass variance; the naive E[e^2] - mean^2 cancels badly.
  double acc = 0.0;
  for (double e : errors) acc += (e - mean) * (e - mean);
  m.var = acc / n;
  return m;
}

ErrorMetrics compute_metrics(const TimeSeries& series) {
  std::vector<double> errors;
  errors.reserve(series.size());
  for (const auto& s : series.samples) errors.push_back(s.error);
  return compute_metrics(errors);
}

ErrorMetrics average_metrics(std::span<const ErrorMetrics> runs) {
  if (runs.empty()) throw AnalysisError("average_metrics: no runs");
  ErrorMetrics avg;
  for (const auto& m : runs) {
    avg.mae += m.mae;
    avg.rmse += m.rmse;
    avg.e_max += m.e_max;
    avg.e_min += m.e_min;
    avg.var += m.var;
  }
  const double n = static_cast<double>(runs.size());
  avg.mae /= n;
  avg.rmse /= n;
  avg.e_max /= n;
  avg.e_min /= n;
  avg.var /= n;
  return avg;
}

TimeSeries analysis_window(const TimeSeries& series, WindowProtocol protocol, double period) {
  if (!(period > 0.0)) throw AnalysisError("analysis_window: period must be positive");
  const int cycles = protocol == WindowProtocol::Demo3Cycle ? 3 : 7;
  const double needed = cycles * period - 0.5 * series.dt_nominal;
  if (series.empty() || series.samples.back().t < needed) {
    throw AnalysisError("analysis_window: series of " +
                        std::to_string(series.empty() ? 0.0 : series.samples.back().t) +
                        " s is shorter than " + std::to_string(cycles) + " x " +
                        std::to_string(period) + " s");
  }
  const double t1 = protocol == WindowProtocol::Demo3Cycle ? 2.0 * period : 6.0 * period;
  return series_window(series, period, t1, true);
}

AggregateSeries aggregate_runs(std::span<const TimeSeries> runs, const FieldSelector& field) {
  if (runs.empty()) throw AnalysisError("aggregate_runs: no runs");
  const auto& first = runs.front().samples;
  for (const auto& run : runs) {
    if (run.samples.size() != first.size()) {
      throw AnalysisError("aggregate_runs: runs differ in length");
    }
    for (std::size_t k = 0; k < first.size(); ++k) {
      if (run.samples[k].t != first[k].t) {
        throw AnalysisError("aggregate_runs: timestamp mismatch at sample " +
                            std::to_string(k));
      }
    }
  }
  AggregateSeries agg;
  const std::size_t n = first.size();
  agg.t.resize(n);
  agg.mean.resize(n);
  agg.lower.resize(n);
  agg.upper.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    double lo = field(runs.front().samples[k]);
    double hi = lo;
    for (const auto& run : runs) {
      const double v = field(run.samples[k]);
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    agg.t[k] = first[k].t;
    // Clamp guards the last-ulp case where the rounded mean leaves [lo, hi].
    agg.mean[k] = std::clamp(sum / static_cast<double>(runs.size()), lo, hi);
    agg.lower[k] = lo;
    agg.upper[k] = hi;
  }
  return agg;
}

namespace {

Sample lerp(const Sample& a, const Sample& b, double w) {
  auto mix = [w](double x, double y) { return x + (y - x) * w; };
  Sample s;
  s.t = mix(a.t, b.t);
  s.theta_ref = mix(a.theta_ref, b.theta_ref);
  s.theta_ref_d1 = mix(a.theta_ref_d1, b.theta_ref_d1);
  s.theta_ref_d2 = mix(a.theta_ref_d2, b.theta_ref_d2);
  s.theta = mix(a.theta, b.theta);
  s.p_a = mix(a.p_a, b.p_a);
  s.p_b = mix(a.p_b, b.p_b);
  s.pd_a = mix(a.pd_a, b.pd_a);
  s.pd_b = mix(a.pd_b, b.pd_b);
  s.u_a = mix(a.u_a, b.u_a);
  s.u_b = mix(a.u_b, b.u_b);
  s.kp_a = mix(a.kp_a, b.kp_a);
  s.kp_b = mix(a.kp_b, b.kp_b);
  s.error = s.theta_ref - s.theta;
  return s;
}

} // namespace

TimeSeries resample_nominal(const TimeSeries& series) {
  TimeSeries out;
  out.dt_nominal = series.dt_nominal;
  const auto& in = series.samples;
  if (in.empty()) return out;
  out.samples.reserve(in.size());
  std::size_t j = 0;
  for (std::size_t k = 0; k < in.size(); ++k) {
    const double t = static_cast<double>(k) * series.dt_nominal;
    while (j + 1 < in.size() && in[j + 1].t <= t) ++j;
    Sample s;
    if (j + 1 >= in.size() || t <= in[j].t) {
      s = in[j];
    } else {
      s = lerp(in[j], in[j + 1], (t - in[j].t) / (in[j + 1].t - in[j].t));
    }
    s.t = t;
    s.error = s.theta_ref - s.theta;
    out.samples.push_back(s);
  }
  return out;
}

} // namespace pamctl
