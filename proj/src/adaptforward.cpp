#include "pamctl/adaptforward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pamctl/error.hpp"

namespace pamctl {

namespace {

void require(bool ok, const char* field, const char* rule, double value) {
  if (!ok) {
    throw ConfigError(std::string(field) + " must be " + rule + " (got " +
                      std::to_string(value) + ")");
  }
}

} // namespace

void validate_adaptive(const AdaptiveParams& p) {
  require(p.m1_star >= 0.0, "m1_star", "nonnegative", p.m1_star);
  require(p.m2_star >= 0.0, "m2_star", "nonnegative", p.m2_star);
  require(p.b1 > 0.0, "b1", "positive", p.b1);
  require(p.b2 > 0.0, "b2", "positive", p.b2);
  require(p.c1 > 0.0, "c1", "positive", p.c1);
  require(p.c2 > 0.0, "c2", "positive", p.c2);
  require(p.theta_cap > 0.0, "theta_cap", "positive", p.theta_cap);
  require(p.mu >= 0.0, "μ", "nonnegative", p.mu);
  require(p.velocity_deadband >= 0.0, "velocity_deadband", "nonnegative",
          p.velocity_deadband);
  require(p.kp0 >= 0.0, "kp0", "nonnegative", p.kp0);
}

double feedforward_delta(double rate, double k_ff) { return k_ff * rate; }

double direction_changer(double rate, double accel, double mu, double deadband) {
  if (std::abs(rate) <= deadband) return 0.0;
  const double prod = rate * accel;
  const double h = prod > 0.0 ? 1.0 : (prod < 0.0 ? -1.0 : 0.0);
  return -(1.0 + (1.0 + h) / 2.0 * mu) * h;
}

double gain_increment(double theta_ref, double rate, double accel,
                      const AdaptiveParams& p) {
  if (!(theta_ref >= 0.0 && theta_ref <= p.theta_cap)) {
    throw std::invalid_argument("gain_increment: theta_ref " + std::to_string(theta_ref) +
                                " outside [0, " + std::to_string(p.theta_cap) + "]");
  }
  if (accel == 0.0) return 0.0;
  const double d = direction_changer(rate, accel, p.mu, p.velocity_deadband);
  const double v = std::abs(rate);
  const double a = std::abs(accel);
  if (accel < 0.0) {
    return p.m1_star * theta_ref * a / ((p.b1 + v) * (p.c1 + a)) * d;
  }
  return p.m2_star * (p.theta_cap - theta_ref) * a / ((p.b2 + v) * (p.c2 + a)) * d;
}

CompensatorState update_gain(CompensatorState state, double delta, double kp0) {
  state.kp_current = std::max(kp0, state.kp_current + delta);
  return state;
}

CompensatorOutput compensator_step(const CompensatorState& state, double theta_ref,
                                   double rate, double accel,
                                   const AdaptiveParams& params) {
  CompensatorOutput out;
  out.dp_ff = feedforward_delta(rate, params.k_ff);
  out.state = update_gain(state, gain_increment(theta_ref, rate, accel, params), params.kp0);
  out.kp_live = out.state.kp_current;
  return out;
}

} // namespace pamctl
