#include "pamctl/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pamctl/error.hpp"

namespace pamctl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double sinusoid_at(const Sinusoid& s, double t) {
  return s.centroid + s.amplitude * std::sin(kTwoPi * t / s.period + s.phase);
}

double sine_sum_at(const SineSum& s, double t) {
  double v = s.centroid;
  for (const auto& term : s.terms) {
    v += term.amplitude * std::sin(kTwoPi * t / term.period + term.phase);
  }
  return v;
}

double segment_duration(const Segment& seg) {
  return std::visit(Overloaded{
                        [](const Sinusoid& s) { return s.cycles * s.period; },
                        [](const Ramp& r) { return r.duration; },
                        [](const Hold& h) { return h.duration; },
                        [](const SineSum& s) { return s.duration; },
                    },
                    seg);
}

// Local time is clamped to [0, duration] so the end value is held.
double segment_at(const Segment& seg, double t) {
  const double local = std::clamp(t, 0.0, segment_duration(seg));
  return std::visit(Overloaded{
                        [&](const Sinusoid& s) { return sinusoid_at(s, local); },
                        [&](const Ramp& r) {
                          return r.from + (r.to - r.from) * (local / r.duration);
                        },
                        [](const Hold& h) { return h.value; },
                        [&](const SineSum& s) { return sine_sum_at(s, local); },
                    },
                    seg);
}

std::pair<double, double> segment_bounds(const Segment& seg) {
  return std::visit(
      Overloaded{
          [](const Sinusoid& s) {
            const double a = std::abs(s.amplitude);
            return std::pair{s.centroid - a, s.centroid + a};
          },
          [](const Ramp& r) { return std::pair{std::min(r.from, r.to), std::max(r.from, r.to)}; },
          [](const Hold& h) { return std::pair{h.value, h.value}; },
          [](const SineSum& s) {
            double a = 0.0;
            for (const auto& term : s.terms) a += std::abs(term.amplitude);
            return std::pair{s.centroid - a, s.centroid + a};
          },
      },
      seg);
}

double compound_at(const Compound& c, double t) {
  const double cycle = compound_cycle_length(c);
  double local = t;
  if (t >= cycle * c.repeat) {
    local = cycle; // final hold
  } else if (t >= cycle) {
    local = std::fmod(t, cycle);
  }
  for (const auto& seg : c.segments) {
    const double d = segment_duration(seg);
    if (local < d) return segment_at(seg, local);
    local -= d;
  }
  return segment_at(c.segments.back(), segment_duration(c.segments.back()));
}

double triangular_at(const TriangularPressure& tp, double t) {
  double value = tp.start;
  double elapsed = 0.0;
  for (double vertex : tp.vertices) {
    const double leg = std::abs(vertex - value) / tp.slope;
    if (t < elapsed + leg) {
      const double dir = vertex >= value ? 1.0 : -1.0;
      return value + dir * tp.slope * (t - elapsed);
    }
    elapsed += leg;
    value = vertex;
  }
  return value;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

} // namespace

double compound_cycle_length(const Compound& spec) {
  double total = 0.0;
  for (const auto& seg : spec.segments) total += segment_duration(seg);
  return total;
}

std::vector<double> triangular_vertex_times(const TriangularPressure& spec) {
  std::vector<double> times{0.0};
  double value = spec.start;
  double elapsed = 0.0;
  for (double vertex : spec.vertices) {
    elapsed += std::abs(vertex - value) / spec.slope;
    times.push_back(elapsed);
    value = vertex;
  }
  return times;
}

double gen_reference(const ReferenceSpec& spec, double t) {
  return std::visit(Overloaded{
                        [&](const Sinusoid& s) {
                          return sinusoid_at(s, std::min(t, s.cycles * s.period));
                        },
                        [&](const Compound& c) { return compound_at(c, t); },
                        [](const Constant& c) { return c.value; },
                        [&](const TriangularPressure& tp) { return triangular_at(tp, t); },
                    },
                    spec);
}

double reference_duration(const ReferenceSpec& spec) {
  return std::visit(Overloaded{
                        [](const Sinusoid& s) { return s.cycles * s.period; },
                        [](const Compound& c) { return compound_cycle_length(c) * c.repeat; },
                        [](const Constant&) { return std::numeric_limits<double>::infinity(); },
                        [](const TriangularPressure& tp) {
                          return triangular_vertex_times(tp).back();
                        },
                    },
                    spec);
}

std::pair<double, double> reference_bounds(const ReferenceSpec& spec) {
  return std::visit(Overloaded{
                        [](const Sinusoid& s) { return segment_bounds(Segment{s}); },
                        [](const Compound& c) {
                          double lo = std::numeric_limits<double>::infinity();
                          double hi = -lo;
                          for (const auto& seg : c.segments) {
                            const auto [a, b] = segment_bounds(seg);
                            lo = std::min(lo, a);
                            hi = std::max(hi, b);
                          }
                          return std::pair{lo, hi};
                        },
                        [](const Constant& c) { return std::pair{c.value, c.value}; },
                        [](const TriangularPressure& tp) {
                          double lo = tp.start;
                          double hi = tp.start;
                          for (double v : tp.vertices) {
                            lo = std::min(lo, v);
                            hi = std::max(hi, v);
                          }
                          return std::pair{lo, hi};
                        },
                    },
                    spec);
}

void validate_reference(const ReferenceSpec& spec, double theta_cap) {
  auto check_sinusoid = [](const Sinusoid& s) {
    require(s.period > 0.0, "reference.period must be positive (got " +
                                std::to_string(s.period) + ")");
    require(s.cycles >= 1, "reference.cycles must be >= 1 (got " +
                               std::to_string(s.cycles) + ")");
  };

  if (const auto* tp = std::get_if<TriangularPressure>(&spec)) {
    require(tp->slope > 0.0,
            "triangular slope must be positive (got " + std::to_string(tp->slope) + ")");
    require(!tp->vertices.empty(), "triangular waveform needs at least one vertex");
    double prev = tp->start;
    int prev_dir = 0;
    for (double v : tp->vertices) {
      const int dir = v > prev ? 1 : (v < prev ? -1 : 0);
      require(dir != 0 && dir != prev_dir,
              "triangular vertices must alternate in direction (at " +
                  std::to_string(v) + " kPa)");
      prev_dir = dir;
      prev = v;
    }
    return;
  }

  if (const auto* s = std::get_if<Sinusoid>(&spec)) check_sinusoid(*s);
  if (const auto* c = std::get_if<Compound>(&spec)) {
    require(!c->segments.empty(), "compound reference has no segments");
    require(c->repeat >= 1, "compound repeat must be >= 1");
    for (const auto& seg : c->segments) {
      if (const auto* s = std::get_if<Sinusoid>(&seg)) check_sinusoid(*s);
      require(segment_duration(seg) > 0.0, "compound segment duration must be positive");
    }
  }

  const auto [lo, hi] = reference_bounds(spec);
  require(lo >= 0.0, "reference dips below 0 deg (min " + std::to_string(lo) + ")");
  require(hi <= theta_cap, "reference exceeds theta_cap " + std::to_string(theta_cap) +
                               " deg (max " + std::to_string(hi) + ")");
}

Compound demo_mixed_sinusoids() {
  Compound c;
  c.segments = {Sinusoid{30.0, 10.0, 4.0, 1, 0.0}, Sinusoid{30.0, 20.0, 6.0, 1, 0.0},
                Sinusoid{30.0, 25.0, 8.0, 1, 0.0}};
  c.repeat = 3;
  return c;
}

Compound demo_ramp_hold() {
  Compound c;
  c.segments = {Hold{10.0, 2.0}, Ramp{10.0, 50.0, 4.0}, Hold{50.0, 3.0},
                Ramp{50.0, 20.0, 3.0}, Hold{20.0, 2.0}, Ramp{20.0, 10.0, 1.0}};
  c.repeat = 3;
  return c;
}

Compound demo_compound() {
  Compound c;
  c.segments = {SineSum{30.0, {SineTerm{15.0, 6.0, 0.0}, SineTerm{8.0, 3.0, 0.0}}, 6.0},
                Ramp{30.0, 50.0, 2.0}, Hold{50.0, 2.0}, Ramp{50.0, 30.0, 3.0},
                Hold{30.0, 1.0}};
  c.repeat = 3;
  return c;
}

DiffResult pseudo_diff_step(const DiffState& state, double value, double t) {
  DiffResult out{state, 0.0};
  if (!state.seeded) {
    out.state.prev_value = value;
    out.state.prev_time = t;
    out.state.filtered_rate = 0.0;
    out.state.seeded = true;
    return out;
  }
  const double dt = t - state.prev_time;
  if (!(dt > 0.0)) {
    throw std::invalid_argument("pseudo-differentiator: timestamps must increase (" +
                                std::to_string(state.prev_time) + " -> " +
                                std::to_string(t) + ")");
  }
  const double raw = (value - state.prev_value) / dt;
  const double alpha = dt / (state.tau_filter + dt);
  out.rate = (1.0 - alpha) * state.filtered_rate + alpha * raw;
  out.state.prev_value = value;
  out.state.prev_time = t;
  out.state.filtered_rate = out.rate;
  return out;
}

Diff2State make_diff2_state(double tau_filter) {
  Diff2State s;
  s.first.tau_filter = tau_filter;
  s.second.tau_filter = tau_filter;
  return s;
}

Diff2Result pseudo_diff2_step(const Diff2State& state, double value, double t) {
  const auto first = pseudo_diff_step(state.first, value, t);
  const auto second = pseudo_diff_step(state.second, first.rate, t);
  return {Diff2State{first.state, second.state}, first.rate, second.rate};
}

} // namespace pamctl
