#include "pamctl/simulation.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "pamctl/error.hpp"

namespace pamctl {

namespace {

constexpr std::uint64_t kJitterStream = 0x9E3779B97F4A7C15ULL;

bool all_finite(const Sample& s) {
  for (double v : {s.t, s.theta_ref, s.theta_ref_d1, s.theta_ref_d2, s.theta, s.p_a, s.p_b,
                   s.pd_a, s.pd_b, s.u_a, s.u_b, s.kp_a, s.kp_b, s.error}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

[[noreturn]] void numerical_abort(std::size_t step, const Sample& s, const PlantState& plant) {
  std::ostringstream msg;
  msg.precision(9);
  msg << "non-finite value at step " << step << ": t=" << s.t << " theta_ref=" << s.theta_ref
      << " d1=" << s.theta_ref_d1 << " d2=" << s.theta_ref_d2 << " theta=" << s.theta
      << " p_a=" << s.p_a << " p_b=" << s.p_b << " pd_a=" << s.pd_a << " pd_b=" << s.pd_b
      << " u_a=" << s.u_a << " u_b=" << s.u_b << " kp_a=" << s.kp_a << " kp_b=" << s.kp_b
      << " | plant p_a=" << plant.p_a << " p_b=" << plant.p_b
      << " theta_true=" << plant.theta_true << " theta_hyst=" << plant.theta_hyst;
  throw NumericalError(msg.str());
}

} // namespace

std::optional<WindowChoice> resolve_analysis_window(const RunConfig& config) {
  switch (config.analysis) {
    case AnalysisMode::Full:
      return std::nullopt;
    case AnalysisMode::Sweep7Period:
      if (const auto* s = std::get_if<Sinusoid>(&config.reference)) {
        return WindowChoice{WindowProtocol::Sweep7Period, s->period};
      }
      throw ConfigError("analysis = sweep_7period needs a sinusoid reference");
    case AnalysisMode::Demo3Cycle:
      if (const auto* c = std::get_if<Compound>(&config.reference)) {
        return WindowChoice{WindowProtocol::Demo3Cycle, compound_cycle_length(*c)};
      }
      if (const auto* s = std::get_if<Sinusoid>(&config.reference)) {
        return WindowChoice{WindowProtocol::Demo3Cycle, s->period};
      }
      throw ConfigError("analysis = demo_3cycle needs a sinusoid or compound reference");
    case AnalysisMode::Auto:
      if (const auto* s = std::get_if<Sinusoid>(&config.reference); s && s->cycles == 7) {
        return WindowChoice{WindowProtocol::Sweep7Period, s->period};
      }
      if (const auto* c = std::get_if<Compound>(&config.reference); c && c->repeat == 3) {
        return WindowChoice{WindowProtocol::Demo3Cycle, compound_cycle_length(*c)};
      }
      return std::nullopt;
  }
  return std::nullopt;
}

ErrorMetrics windowed_metrics(const TimeSeries& series, const RunConfig& config) {
  const auto window = resolve_analysis_window(config);
  if (!window) return compute_metrics(series);
  return compute_metrics(analysis_window(series, window->protocol, window->period));
}

RunResult run_experiment(const RunConfig& input) {
  validate_config(input);
  RunResult result;
  result.config = input;
  result.seed = input.noise_seed;

  PlantParams plant_params = input.plant;
  plant_params.seed = input.noise_seed;
  PlantState plant = make_plant_state(plant_params);
  NoiseSource jitter_rng(input.noise_seed ^ kJitterStream);

  const double dt = input.dt_nominal;
  const auto steps = static_cast<std::size_t>(std::llround(input.duration / dt)) + 1;
  const double half_jitter = 0.5 * input.jitter_fraction * dt;
  auto timestamp = [&](std::size_t k) {
    const double nominal = static_cast<double>(k) * dt;
    if (k == 0 || half_jitter == 0.0) return nominal;
    return nominal + half_jitter * (2.0 * jitter_rng.uniform() - 1.0);
  };

  ControllerContext ctx = make_controller_context(input.cascade, input.adaptive);
  Diff2State diff = make_diff2_state(input.diff_tau);
  Measurement meas = measure(plant, plant_params);

  TimeSeries& series = result.series;
  series.dt_nominal = dt;
  series.samples.reserve(steps);

  double t = timestamp(0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double theta_ref = gen_reference(input.reference, static_cast<double>(k) * dt);
    const auto d = pseudo_diff2_step(diff, theta_ref, t);
    diff = d.state;

    const ControllerInput in{theta_ref, d.rate, d.rate2, meas.theta, meas.p_a, meas.p_b, t};
    const auto out = controller_step(ctx, input.cascade, input.adaptive,
                                     input.controller_kind, in);
    ctx = out.ctx;

    Sample s;
    s.t = t;
    s.theta_ref = theta_ref;
    s.theta_ref_d1 = d.rate;
    s.theta_ref_d2 = d.rate2;
    s.theta = meas.theta;
    s.p_a = meas.p_a;
    s.p_b = meas.p_b;
    s.pd_a = out.a.pd;
    s.pd_b = out.b.pd;
    s.u_a = out.u_a;
    s.u_b = out.u_b;
    s.kp_a = out.a.kp;
    s.kp_b = out.b.kp;
    s.error = theta_ref - meas.theta;
    if (!all_finite(s)) numerical_abort(k, s, plant);
    series.samples.push_back(s);

    if (k + 1 < steps) {
      const double t_next = timestamp(k + 1);
      meas = plant_step(plant, plant_params, out.u_a, out.u_b, t_next - t);
      t = t_next;
    }
  }

  result.metrics = windowed_metrics(series, input);
  return result;
}

std::uint64_t repeat_seed(std::uint64_t base, int index) {
  return base * 1000ULL + static_cast<std::uint64_t>(index);
}

std::vector<RunResult> run_repeats(const RunConfig& config) {
  validate_config(config);
  std::vector<RunResult> runs;
  runs.reserve(static_cast<std::size_t>(config.repeats));
  for (int r = 0; r < config.repeats; ++r) {
    RunConfig one = config;
    one.noise_seed = repeat_seed(config.noise_seed, r);
    one.repeats = 1;
    runs.push_back(run_experiment(one));
  }
  return runs;
}

} // namespace pamctl
