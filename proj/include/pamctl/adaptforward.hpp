#pragma once

namespace pamctl {

/// Coefficients of the adaptive hysteresis compensator. Defaults are the
/// tuned values of the dual-PAM bending rig; both subsystems share one set.
struct AdaptiveParams {
  double m1_star = 6.0e-2;   // kPa/(deg*s), deceleration branch
  double m2_star = 9.6e-2;   // kPa/(deg*s), acceleration branch
  double b1 = 6.0;           // deg/s
  double b2 = 6.0;           // deg/s
  double c1 = 3.2e4;         // deg/s^2
  double c2 = 5.0e4;         // deg/s^2
  double theta_cap = 60.0;   // deg, working range of the reference
  double mu = 0.6;           // extra decay applied while the reference accelerates away
  double k_ff = 1.0e-2;      // kPa*s/deg, feedforward-D gain
  double kp0 = 8.0e-2;       // kPa/deg, baseline outer P gain
  double velocity_deadband = 0.5; // deg/s, |rate| below this counts as zero
};

/// Throws ConfigError naming the first violated constraint.
void validate_adaptive(const AdaptiveParams& params);

struct CompensatorState {
  double kp_current = 8.0e-2; // never below kp0
};

/// Pressure-reference increment from the reference rate: k_ff * rate.
double feedforward_delta(double rate, double k_ff);

/// Direction changer D = -(1 + mu * (1 + h) / 2) * h with
/// h = sign(rate * accel). |rate| <= deadband counts as rate = 0.
///   rate, accel same sign      -> -(1 + mu)
///   opposite signs             -> +1
///   either zero                -> 0
double direction_changer(double rate, double accel, double mu, double deadband);

/// Gain increment for one sample.
///   accel < 0: M1* * theta   * |a| / ((b1 + |v|)(c1 + |a|)) * D
///   accel > 0: M2* * (cap-theta) * |a| / ((b2 + |v|)(c2 + |a|)) * D
///   accel == 0: 0
/// Throws std::invalid_argument when theta_ref is outside [0, theta_cap].
double gain_increment(double theta_ref, double rate, double accel,
                      const AdaptiveParams& params);

/// kp <- max(kp0, kp + delta)
CompensatorState update_gain(CompensatorState state, double delta, double kp0);

struct CompensatorOutput {
  CompensatorState state;
  double dp_ff = 0.0;   // kPa
  double kp_live = 0.0; // kPa/deg
};

CompensatorOutput compensator_step(const CompensatorState& state, double theta_ref,
                                   double rate, double accel,
                                   const AdaptiveParams& params);

} // namespace pamctl
