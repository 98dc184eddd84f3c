#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pamctl/metrics.hpp"
#include "pamctl/run_config.hpp"
#include "pamctl/series.hpp"

namespace pamctl {

struct RunResult {
  TimeSeries series;       // full log
  ErrorMetrics metrics;    // on the analysis window
  RunConfig config;        // reproduces `series` bit-exactly
  std::uint64_t seed = 0;  // same as config.noise_seed
};

/// Runs reference -> pseudo-differentiator -> controller -> plant in lockstep
/// at dt_nominal from atmospheric rest and logs one Sample per tick.
///
/// With jitter enabled the logged timestamps move by up to
/// +-jitter_fraction/2 * dt_nominal around k * dt_nominal, while the
/// reference advances one nominal tick per step. The differentiator and the
/// PIDs see the jittered timestamps; the plant integrates the true intervals.
///
/// Throws ConfigError for an invalid config and NumericalError (with the step
/// index and a state dump) if any logged quantity becomes non-finite.
RunResult run_experiment(const RunConfig& config);

/// Window used for `config`'s metrics; nullopt means the whole series.
struct WindowChoice {
  WindowProtocol protocol;
  double period;
};
std::optional<WindowChoice> resolve_analysis_window(const RunConfig& config);

/// Metrics of `series` on the window chosen for `config`.
ErrorMetrics windowed_metrics(const TimeSeries& series, const RunConfig& config);

/// Seed of repeat `index` (0-based) of a run whose base seed is `base`.
std::uint64_t repeat_seed(std::uint64_t base, int index);

/// `config.repeats` runs with repeat_seed(config.noise_seed, r).
std::vector<RunResult> run_repeats(const RunConfig& config);

} // namespace pamctl
