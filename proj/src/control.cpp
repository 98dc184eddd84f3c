#include "pamctl/control.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "pamctl/error.hpp"

namespace pamctl {

const char* to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::PID: return "pid";
    case ControllerKind::PID_FF: return "pid-ff";
    case ControllerKind::PID_AF: return "pid-af";
  }
  return "?";
}

ControllerKind parse_controller_kind(const std::string& text) {
  if (text == "pid") return ControllerKind::PID;
  if (text == "pid-ff" || text == "pid_ff") return ControllerKind::PID_FF;
  if (text == "pid-af" || text == "pid_af") return ControllerKind::PID_AF;
  throw ConfigError("unknown controller '" + text + "' (expected pid, pid-ff or pid-af)");
}

PidResult pid_step(const PidState& state, const PidGains& gains, double error, double t) {
  PidResult out{state, 0.0};
  double derivative = 0.0;
  if (state.seeded) {
    const double dt = t - state.prev_time;
    if (!(dt > 0.0)) {
      throw std::invalid_argument("pid_step: time must increase (" +
                                  std::to_string(state.prev_time) + " -> " +
                                  std::to_string(t) + ")");
    }
    out.state.integral += 0.5 * (error + state.prev_error) * dt;
    derivative = (error - state.prev_error) / dt;
  }
  out.state.seeded = true;
  out.state.prev_error = error;
  out.state.prev_time = t;

  if (state.output_limits && gains.ki != 0.0) {
    // ki may be negative on a mirrored loop, so order the bounds.
    const double a = state.output_limits->low / gains.ki;
    const double b = state.output_limits->high / gains.ki;
    out.state.integral = std::clamp(out.state.integral, std::min(a, b), std::max(a, b));
  }

  double output = gains.kp * error + gains.ki * out.state.integral + gains.kd * derivative;
  if (state.output_limits) output = state.output_limits->clamp(output);
  out.output = output;
  return out;
}

std::pair<PidGains, double> mirror_gains(const PidGains& outer_a, double k_ff) {
  PidGains b = outer_a;
  b.kp = -outer_a.kp;
  b.ki = -outer_a.ki;
  b.kd = -outer_a.kd;
  return {b, -k_ff};
}

double update_pressure_ref(double pd_prev, double dp_fb, double dp_ff, const Limits& limits) {
  return limits.clamp(pd_prev + dp_fb + dp_ff);
}

void validate_cascade(const CascadeConfig& cfg) {
  if (cfg.outer_a.role != LoopRole::Outer) {
    throw ConfigError("outer gains carry an inner-loop unit tag");
  }
  if (cfg.inner.role != LoopRole::Inner) {
    throw ConfigError("inner gains carry an outer-loop unit tag");
  }
  if (!(cfg.pd_limits.low < cfg.pd_limits.high)) {
    throw ConfigError("pd_limits must satisfy low < high");
  }
  if (!(cfg.u_limits.low < cfg.u_limits.high)) {
    throw ConfigError("u_limits must satisfy low < high");
  }
  if (cfg.u_neutral < cfg.u_limits.low || cfg.u_neutral > cfg.u_limits.high) {
    throw ConfigError("u_neutral must lie inside u_limits (got " +
                      std::to_string(cfg.u_neutral) + ")");
  }
  if (!(cfg.dp_fb_limit > 0.0)) {
    throw ConfigError("dp_fb_limit must be positive (got " +
                      std::to_string(cfg.dp_fb_limit) + ")");
  }
}

ControllerContext make_controller_context(const CascadeConfig& cfg,
                                          const AdaptiveParams& adaptive) {
  ControllerContext ctx;
  const Limits dp_limits{-cfg.dp_fb_limit, cfg.dp_fb_limit};
  const Limits du_limits{cfg.u_limits.low - cfg.u_neutral, cfg.u_limits.high - cfg.u_neutral};
  ctx.outer_a.output_limits = dp_limits;
  ctx.outer_b.output_limits = dp_limits;
  ctx.inner_a.output_limits = du_limits;
  ctx.inner_b.output_limits = du_limits;
  ctx.comp_a.kp_current = adaptive.kp0;
  ctx.comp_b.kp_current = adaptive.kp0;
  ctx.pd_a = cfg.pd_limits.clamp(0.0);
  ctx.pd_b = cfg.pd_limits.clamp(0.0);
  return ctx;
}

ControllerOutput controller_step(const ControllerContext& ctx, const CascadeConfig& cfg,
                                 const AdaptiveParams& adaptive, ControllerKind kind,
                                 const ControllerInput& in) {
  ControllerOutput out;
  out.ctx = ctx;

  double kp_a = cfg.outer_a.kp;
  double kp_b = cfg.outer_a.kp;
  double dp_ff_a = 0.0;
  double dp_ff_b = 0.0;
  const double k_ff_b = mirror_gains(cfg.outer_a, adaptive.k_ff).second;

  switch (kind) {
    case ControllerKind::PID:
      break;
    case ControllerKind::PID_FF:
      dp_ff_a = feedforward_delta(in.theta_ref_d1, adaptive.k_ff);
      dp_ff_b = feedforward_delta(in.theta_ref_d1, k_ff_b);
      break;
    case ControllerKind::PID_AF: {
      const auto ca = compensator_step(ctx.comp_a, in.theta_ref, in.theta_ref_d1,
                                       in.theta_ref_d2, adaptive);
      const auto cb = compensator_step(ctx.comp_b, in.theta_ref, in.theta_ref_d1,
                                       in.theta_ref_d2, adaptive);
      out.ctx.comp_a = ca.state;
      out.ctx.comp_b = cb.state;
      kp_a = ca.kp_live;
      kp_b = cb.kp_live;
      dp_ff_a = ca.dp_ff;
      dp_ff_b = feedforward_delta(in.theta_ref_d1, k_ff_b);
      break;
    }
  }

  PidGains outer_a = cfg.outer_a;
  outer_a.kp = kp_a;
  PidGains outer_b_src = cfg.outer_a;
  outer_b_src.kp = kp_b;
  const PidGains outer_b = mirror_gains(outer_b_src, adaptive.k_ff).first;

  const double angle_error = in.theta_ref - in.theta_meas;
  const auto fb_a = pid_step(ctx.outer_a, outer_a, angle_error, in.t);
  const auto fb_b = pid_step(ctx.outer_b, outer_b, angle_error, in.t);
  out.ctx.outer_a = fb_a.state;
  out.ctx.outer_b = fb_b.state;

  out.ctx.pd_a = update_pressure_ref(ctx.pd_a, fb_a.output, dp_ff_a, cfg.pd_limits);
  out.ctx.pd_b = update_pressure_ref(ctx.pd_b, fb_b.output, dp_ff_b, cfg.pd_limits);

  const auto in_a = pid_step(ctx.inner_a, cfg.inner, out.ctx.pd_a - in.p_a_meas, in.t);
  const auto in_b = pid_step(ctx.inner_b, cfg.inner, out.ctx.pd_b - in.p_b_meas, in.t);
  out.ctx.inner_a = in_a.state;
  out.ctx.inner_b = in_b.state;
  out.u_a = cfg.u_limits.clamp(cfg.u_neutral + in_a.output);
  out.u_b = cfg.u_limits.clamp(cfg.u_neutral + in_b.output);

  out.a = {fb_a.output, dp_ff_a, out.ctx.pd_a, kp_a};
  out.b = {fb_b.output, dp_ff_b, out.ctx.pd_b, kp_b};
  return out;
}

} // namespace pamctl
