#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pamctl/control.hpp"

namespace pamctl {

/// Simulated dual-PAM bending actuator.
///
///   valves:     dp/dt = k_valve * (u - u_neutral), per chamber, clamped to p_limits
///   hysteresis: a weighted bank of play operators driven by p_a - p_b
///   bending:    first-order lag of the hysteretic angle, time constant tau_theta
///   sensors:    additive zero-mean Gaussian noise from a seeded generator
///
/// Defaults: one fully pressurised chamber (420 kPa) bends the actuator by
/// 57 deg. The narrow operators carry about 0.1 deg/kPa around mid-stroke;
/// the wide one only engages on excursions beyond 250 kPa.
struct PlantParams {
  double k_valve = 400.0; // kPa/(s*V)
  double u_neutral = 5.0; // V
  Limits p_limits{0.0, 500.0};
  std::vector<double> play_radii{0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 250.0}; // kPa
  std::vector<double> play_weights{0.0009783, 0.003913, 0.006848, 0.009783, 0.01272,
                                   0.01565,   0.01859,  0.02152,  0.1387}; // deg/kPa
  double tau_theta = 0.06;          // s
  double noise_sigma_theta = 0.05;  // deg
  double noise_sigma_p = 0.5;       // kPa
  std::uint64_t seed = 1;
};

/// Throws ConfigError naming the first violated constraint (including the
/// 420 kPa static calibration window [50, 62] deg).
void validate_plant(const PlantParams& params);

/// Seeded Gaussian source. Box-Muller over mt19937_64 so the stream does
/// not depend on the standard library's distribution implementation.
class NoiseSource {
public:
  explicit NoiseSource(std::uint64_t seed = 1) : engine_(seed) {}

  double uniform();  // (0, 1]
  double gaussian(); // N(0, 1)

private:
  std::mt19937_64 engine_;
};

struct PlantState {
  double p_a = 0.0;
  double p_b = 0.0;
  std::vector<double> play_states;
  double theta_hyst = 0.0;
  double theta_true = 0.0;
  NoiseSource rng;
};

struct Measurement {
  double theta = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;
};

/// Atmospheric rest: both chambers at 0 kPa, play states 0, theta 0.
PlantState make_plant_state(const PlantParams& params);

/// max(input - radius, min(input + radius, z_prev))
double play_operator_step(double z_prev, double input, double radius);

/// Weighted sum of the play states.
double hysteretic_angle(const PlantParams& params, const std::vector<double>& play_states);

/// Advance every play operator with the given differential pressure and
/// refresh theta_hyst (does not touch theta_true).
void advance_play_bank(PlantState& state, const PlantParams& params, double dp);

/// Noisy reading of the current state.
Measurement measure(PlantState& state, const PlantParams& params);

/// Advance the plant by dt seconds under valve commands u_a, u_b and
/// return the noisy measurement of the new state.
Measurement plant_step(PlantState& state, const PlantParams& params, double u_a, double u_b,
                       double dt);

/// Ascending-branch angle from a virgin state: sum_j w_j * max(dp - r_j, 0).
double measure_static_gain(const PlantParams& params, double dp);

} // namespace pamctl
