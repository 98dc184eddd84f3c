#include "pamctl/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pamctl/error.hpp"

namespace pamctl {

TimeSeries series_window(const TimeSeries& series, double t0, double t1,
                         bool mandatory) {
  if (!(t0 < t1)) {
    throw AnalysisError("series window requires t0 < t1 (got t0 = " +
                        std::to_string(t0) + ", t1 = " + std::to_string(t1) +
                        ")");
  }
  TimeSeries out;
  out.dt_nominal = series.dt_nominal;
  std::copy_if(series.samples.begin(), series.samples.end(),
               std::back_inserter(out.samples),
               [&](const Sample& s) { return s.t >= t0 && s.t < t1; });
  if (mandatory && out.empty()) {
    throw AnalysisError("analysis window [" + std::to_string(t0) + ", " +
                        std::to_string(t1) + ") contains no samples");
  }
  return out;
}

double max_step_deviation(const TimeSeries& series) {
  double worst = 0.0;
  for (std::size_t k = 1; k < series.samples.size(); ++k) {
    const double step = series.samples[k].t - series.samples[k - 1].t;
    worst = std::max(worst, std::abs(step - series.dt_nominal));
  }
  return worst;
}

} // namespace pamctl
