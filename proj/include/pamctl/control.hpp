#pragma once

#include <optional>
#include <string>
#include <utility>

#include "pamctl/adaptforward.hpp"

namespace pamctl {

enum class ControllerKind { PID, PID_FF, PID_AF };

const char* to_string(ControllerKind kind);      // "pid", "pid-ff", "pid-af"
ControllerKind parse_controller_kind(const std::string& text);

/// Which loop a gain record belongs to. Inner gains map kPa -> V,
/// outer gains map deg -> kPa.
enum class LoopRole { Inner, Outer };

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  LoopRole role = LoopRole::Outer;
};

struct Limits {
  double low = 0.0;
  double high = 0.0;

  double clamp(double v) const { return v < low ? low : (v > high ? high : v); }
};

struct PidState {
  double integral = 0.0; // error * seconds, trapezoidal
  double prev_error = 0.0;
  double prev_time = 0.0;
  bool seeded = false;
  std::optional<Limits> output_limits;
};

struct PidResult {
  PidState state;
  double output = 0.0;
};

/// Positional PID: kp*e + ki*integral + kd*de/dt, clamped to output_limits.
/// The integral is clamped so that ki*integral stays inside the limits.
/// The first call seeds the state (no integral, no derivative).
/// Throws std::invalid_argument on non-increasing time.
PidResult pid_step(const PidState& state, const PidGains& gains, double error, double t);

/// Subsystem B runs with every outer gain and the feedforward gain negated.
std::pair<PidGains, double> mirror_gains(const PidGains& outer_a, double k_ff);

/// P_d(k) = clamp(P_d(k-1) + dP_fb(k) + dP_ff(k)).
double update_pressure_ref(double pd_prev, double dp_fb, double dp_ff, const Limits& limits);

struct CascadeConfig {
  PidGains outer_a{8.0e-2, 2.0e-5, 0.0, LoopRole::Outer};
  PidGains inner{4.0e-2, 2.0e-6, 0.0, LoopRole::Inner}; // shared by A and B
  double k_ff = 1.0e-2;                                  // kPa*s/deg
  Limits pd_limits{0.0, 500.0};                          // kPa
  Limits u_limits{0.0, 10.0};                            // V
  double u_neutral = 5.0;                                // V, valve closed
  double dp_fb_limit = 50.0; // kPa per step, bound on the outer PID output
};

void validate_cascade(const CascadeConfig& cfg);

/// Mutable state for both subsystems of one actuator.
struct ControllerContext {
  PidState outer_a, outer_b;
  PidState inner_a, inner_b;
  CompensatorState comp_a, comp_b;
  double pd_a = 0.0;
  double pd_b = 0.0;
};

ControllerContext make_controller_context(const CascadeConfig& cfg,
                                          const AdaptiveParams& adaptive);

struct ControllerInput {
  double theta_ref = 0.0;
  double theta_ref_d1 = 0.0;
  double theta_ref_d2 = 0.0;
  double theta_meas = 0.0;
  double p_a_meas = 0.0;
  double p_b_meas = 0.0;
  double t = 0.0;
};

struct SubsystemDiagnostics {
  double dp_fb = 0.0;
  double dp_ff = 0.0;
  double pd = 0.0;
  double kp = 0.0;
};

struct ControllerOutput {
  ControllerContext ctx;
  double u_a = 0.0;
  double u_b = 0.0;
  SubsystemDiagnostics a;
  SubsystemDiagnostics b;
};

/// One control tick of both cascaded subsystems.
///
/// Outer loop: PID on the angle error, used incrementally (its output is
/// dP_fb). The compensator contributes dP_ff and, for PID_AF, the live outer
/// P gain. P_d is integrated with update_pressure_ref. Inner loop: positional
/// PID on P_d - p_meas around u_neutral, clamped to u_limits.
ControllerOutput controller_step(const ControllerContext& ctx, const CascadeConfig& cfg,
                                 const AdaptiveParams& adaptive, ControllerKind kind,
                                 const ControllerInput& in);

} // namespace pamctl
