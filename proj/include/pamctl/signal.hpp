#pragma once

#include <utility>
#include <variant>
#include <vector>

namespace pamctl {

// ---------------------------------------------------------------------------
// Reference trajectories
// ---------------------------------------------------------------------------

/// centroid + amplitude * sin(2*pi*t/period + phase), for `cycles` periods.
struct Sinusoid {
  double centroid = 30.0;
  double amplitude = 20.0;
  double period = 8.0;
  int cycles = 7;
  double phase = 0.0; // radians
};

struct Ramp {
  double from = 0.0;
  double to = 0.0;
  double duration = 1.0;
};

struct Hold {
  double value = 0.0;
  double duration = 1.0;
};

struct SineTerm {
  double amplitude = 0.0;
  double period = 1.0;
  double phase = 0.0;
};

/// centroid + sum of sine terms, over a fixed duration.
struct SineSum {
  double centroid = 0.0;
  std::vector<SineTerm> terms;
  double duration = 1.0;
};

using Segment = std::variant<Sinusoid, Ramp, Hold, SineSum>;

/// Pieces played back to back; the whole sequence is played `repeat` times.
struct Compound {
  std::vector<Segment> segments;
  int repeat = 1;
};

struct Constant {
  double value = 0.0;
};

/// Piecewise-linear pressure command: start, then straight lines at
/// `slope` kPa/s through every vertex in order.
struct TriangularPressure {
  double start = 0.0;
  std::vector<double> vertices;
  double slope = 10.0;
};

using ReferenceSpec = std::variant<Sinusoid, Compound, Constant, TriangularPressure>;

/// Reference value at time t (degrees, or kPa for TriangularPressure).
/// Past the end of the trajectory the final value is held.
double gen_reference(const ReferenceSpec& spec, double t);

/// Length of one full playback. Constant references are unbounded (+inf).
double reference_duration(const ReferenceSpec& spec);

/// Conservative [min, max] of the reference over its whole playback.
std::pair<double, double> reference_bounds(const ReferenceSpec& spec);

/// Throws ConfigError when the reference is malformed or leaves [0, theta_cap]
/// (the range check does not apply to TriangularPressure).
void validate_reference(const ReferenceSpec& spec, double theta_cap);

/// Times at which a TriangularPressure command sits on start and on each vertex.
std::vector<double> triangular_vertex_times(const TriangularPressure& spec);

/// Length of one repetition of a Compound (sum of segment durations).
double compound_cycle_length(const Compound& spec);

/// Artifact-defined demonstration references, each cycled three times.
Compound demo_mixed_sinusoids();
Compound demo_ramp_hold();
Compound demo_compound();

// ---------------------------------------------------------------------------
// Pseudo-differentiation: backward difference followed by a first-order
// low-pass, alpha = dt / (tau_filter + dt). tau_filter == 0 gives the raw
// backward difference.
// ---------------------------------------------------------------------------

struct DiffState {
  double prev_value = 0.0;
  double prev_time = 0.0;
  double filtered_rate = 0.0;
  double tau_filter = 0.02;
  bool seeded = false;
};

struct DiffResult {
  DiffState state;
  double rate = 0.0;
};

/// First call seeds the state and returns 0. Throws std::invalid_argument on
/// non-increasing timestamps.
DiffResult pseudo_diff_step(const DiffState& state, double value, double t);

struct Diff2State {
  DiffState first;
  DiffState second;
};

struct Diff2Result {
  Diff2State state;
  double rate = 0.0;
  double rate2 = 0.0;
};

Diff2State make_diff2_state(double tau_filter);

/// Cascade: the second stage differentiates the first stage's output.
Diff2Result pseudo_diff2_step(const Diff2State& state, double value, double t);

} // namespace pamctl
