#pragma once

#include <vector>

namespace pamctl {

// Unit conventions used across the library:
//   angles     degrees
//   pressures  kPa, gauge (0 = atmospheric)
//   valve      volts
//   time       simulated seconds; nothing here reads a wall clock

/// One logged control instant.
struct Sample {
  double t = 0.0;
  double theta_ref = 0.0;
  double theta_ref_d1 = 0.0; // deg/s
  double theta_ref_d2 = 0.0; // deg/s^2
  double theta = 0.0;        // measured
  double p_a = 0.0;          // measured
  double p_b = 0.0;
  double pd_a = 0.0;         // inner-loop pressure references
  double pd_b = 0.0;
  double u_a = 0.0;
  double u_b = 0.0;
  double kp_a = 0.0;         // live outer proportional gains, kPa/deg
  double kp_b = 0.0;
  double error = 0.0;        // theta_ref - theta
};

struct TimeSeries {
  std::vector<Sample> samples;
  double dt_nominal = 1.0 / 500.0;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
};

/// Samples with t0 <= t < t1, order preserved. Throws AnalysisError when
/// t0 >= t1, or when `mandatory` is set and the window is empty.
TimeSeries series_window(const TimeSeries& series, double t0, double t1,
                         bool mandatory = false);

/// Largest |t(k) - t(k-1) - dt_nominal| along the series (0 for < 2 samples).
double max_step_deviation(const TimeSeries& series);

} // namespace pamctl
