#pragma once

#include <cstdint>

#include "pamctl/adaptforward.hpp"
#include "pamctl/control.hpp"
#include "pamctl/plant.hpp"
#include "pamctl/signal.hpp"

namespace pamctl {

/// How a run's metrics window is chosen.
///   Auto:         7-cycle sinusoid -> Sweep7Period, 3-repeat compound -> Demo3Cycle,
///                 anything else -> Full
enum class AnalysisMode { Auto, Full, Demo3Cycle, Sweep7Period };

struct RunConfig {
  ReferenceSpec reference = Sinusoid{};
  ControllerKind controller_kind = ControllerKind::PID_AF;
  CascadeConfig cascade;
  AdaptiveParams adaptive;
  PlantParams plant;
  double duration = 56.0;         // s
  double dt_nominal = 1.0 / 500.0; // s
  double jitter_fraction = 0.0;   // timestamps move by up to +-jitter/2 * dt
  double diff_tau = 0.02;         // s, pseudo-differentiator low-pass
  std::uint64_t noise_seed = 1;
  int repeats = 5;
  AnalysisMode analysis = AnalysisMode::Auto;
};

/// Rig gains and tuned adaptive coefficients, default plant, 20 deg / 8 s
/// sinusoid centred at 30 deg for seven periods.
RunConfig default_run_config();

/// Returns `config` unchanged when every constraint holds; throws
/// ConfigError naming the first violated field otherwise.
const RunConfig& validate_config(const RunConfig& config);

/// Upper bound on |t(k) - t(k-1) - dt_nominal| for a run with this config.
double jitter_bound(const RunConfig& config);

} // namespace pamctl
