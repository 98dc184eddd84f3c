#include "pamctl/plant.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pamctl/error.hpp"

namespace pamctl {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

} // namespace

void validate_plant(const PlantParams& p) {
  require(p.k_valve > 0.0, "plant.k_valve must be positive (got " +
                               std::to_string(p.k_valve) + ")");
  require(p.p_limits.low < p.p_limits.high, "plant.p_limits must satisfy low < high");
  require(!p.play_radii.empty(), "plant.play_radii must not be empty");
  require(p.play_radii.size() == p.play_weights.size(),
          "plant.play_radii and plant.play_weights must have the same length");
  require(p.play_radii.front() == 0.0, "plant.play_radii must start at 0 (got " +
                                           std::to_string(p.play_radii.front()) + ")");
  for (std::size_t j = 1; j < p.play_radii.size(); ++j) {
    require(p.play_radii[j] > p.play_radii[j - 1],
            "plant.play_radii must be strictly increasing (at index " + std::to_string(j) +
                ")");
  }
  bool any_positive = false;
  for (double w : p.play_weights) {
    require(w >= 0.0, "plant.play_weights must be nonnegative (got " + std::to_string(w) + ")");
    any_positive = any_positive || w > 0.0;
  }
  require(any_positive, "plant.play_weights needs at least one positive weight");
  require(p.tau_theta >= 0.0, "plant.tau_theta must be nonnegative (got " +
                                  std::to_string(p.tau_theta) + ")");
  require(p.noise_sigma_theta >= 0.0, "plant.noise_sigma_theta must be nonnegative");
  require(p.noise_sigma_p >= 0.0, "plant.noise_sigma_p must be nonnegative");
  const double full = measure_static_gain(p, 420.0);
  require(full >= 50.0 && full <= 62.0,
          "plant static gain at 420 kPa must lie in [50, 62] deg (got " +
              std::to_string(full) + ")");
}

double NoiseSource::uniform() {
  // 53 random mantissa bits, shifted into (0, 1].
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double NoiseSource::gaussian() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

PlantState make_plant_state(const PlantParams& params) {
  PlantState s{0.0, 0.0, std::vector<double>(params.play_radii.size(), 0.0), 0.0, 0.0,
               NoiseSource(params.seed)};
  return s;
}

double play_operator_step(double z_prev, double input, double radius) {
  return std::max(input - radius, std::min(input + radius, z_prev));
}

double hysteretic_angle(const PlantParams& params, const std::vector<double>& play_states) {
  double theta = 0.0;
  for (std::size_t j = 0; j < play_states.size(); ++j) {
    theta += params.play_weights[j] * play_states[j];
  }
  return theta;
}

void advance_play_bank(PlantState& state, const PlantParams& params, double dp) {
  for (std::size_t j = 0; j < state.play_states.size(); ++j) {
    state.play_states[j] = play_operator_step(state.play_states[j], dp, params.play_radii[j]);
    assert(std::abs(state.play_states[j] - dp) <= params.play_radii[j] + 1e-9);
  }
  state.theta_hyst = hysteretic_angle(params, state.play_states);
}

Measurement measure(PlantState& state, const PlantParams& params) {
  const double n_theta = state.rng.gaussian();
  const double n_a = state.rng.gaussian();
  const double n_b = state.rng.gaussian();
  return {state.theta_true + params.noise_sigma_theta * n_theta,
          state.p_a + params.noise_sigma_p * n_a, state.p_b + params.noise_sigma_p * n_b};
}

Measurement plant_step(PlantState& state, const PlantParams& params, double u_a, double u_b,
                       double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("plant_step: dt must be positive (got " + std::to_string(dt) +
                                ")");
  }
  state.p_a = params.p_limits.clamp(state.p_a + params.k_valve * (u_a - params.u_neutral) * dt);
  state.p_b = params.p_limits.clamp(state.p_b + params.k_valve * (u_b - params.u_neutral) * dt);
  advance_play_bank(state, params, state.p_a - state.p_b);
  const double blend = params.tau_theta > 0.0 ? std::min(1.0, dt / params.tau_theta) : 1.0;
  state.theta_true += (state.theta_hyst - state.theta_true) * blend;
  return measure(state, params);
}

double measure_static_gain(const PlantParams& params, double dp) {
  double theta = 0.0;
  for (std::size_t j = 0; j < params.play_radii.size(); ++j) {
    theta += params.play_weights[j] * std::max(dp - params.play_radii[j], 0.0);
  }
  return theta;
}

} // namespace pamctl
