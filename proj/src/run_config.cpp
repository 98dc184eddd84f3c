#include "pamctl/run_config.hpp"

#include <cmath>
#include <string>

#include "pamctl/error.hpp"

namespace pamctl {

RunConfig default_run_config() { return RunConfig{}; }

const RunConfig& validate_config(const RunConfig& c) {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
  };
  require(c.duration > 0.0 && std::isfinite(c.duration),
          "duration must be positive (got " + std::to_string(c.duration) + ")");
  require(c.dt_nominal > 0.0, "dt_nominal must be positive (got " +
                                  std::to_string(c.dt_nominal) + ")");
  require(c.jitter_fraction >= 0.0 && c.jitter_fraction < 0.5,
          "jitter_fraction must lie in [0, 0.5) (got " + std::to_string(c.jitter_fraction) +
              ")");
  require(c.diff_tau >= 0.0, "tau_filter must be nonnegative (got " +
                                 std::to_string(c.diff_tau) + ")");
  require(c.repeats >= 1, "repeats must be >= 1 (got " + std::to_string(c.repeats) + ")");

  validate_adaptive(c.adaptive);
  validate_cascade(c.cascade);
  validate_plant(c.plant);

  require(c.adaptive.kp0 == c.cascade.outer_a.kp,
          "adaptive.kp0 must equal outer.kp (got " + std::to_string(c.adaptive.kp0) +
              " vs " + std::to_string(c.cascade.outer_a.kp) + ")");
  require(c.adaptive.k_ff == c.cascade.k_ff,
          "adaptive.k_ff must equal ff.k (got " + std::to_string(c.adaptive.k_ff) + " vs " +
              std::to_string(c.cascade.k_ff) + ")");
  require(c.plant.u_neutral == c.cascade.u_neutral,
          "plant.u_neutral must equal the controller's u_neutral");

  if (std::holds_alternative<TriangularPressure>(c.reference)) {
    throw ConfigError("reference: triangular pressure waveforms drive the hysteresis "
                      "protocols, not tracking runs");
  }
  validate_reference(c.reference, c.adaptive.theta_cap);
  return c;
}

double jitter_bound(const RunConfig& config) {
  return config.jitter_fraction * config.dt_nominal;
}

} // namespace pamctl
