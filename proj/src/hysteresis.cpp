#include "pamctl/hysteresis.hpp"

#include <algorithm>
#include <cmath>

#include "pamctl/error.hpp"

namespace pamctl {

namespace {

constexpr double kMinGradientSpread = 0.1; // kPa

std::size_t index_at(const std::vector<double>& t, double time) {
  const auto it = std::lower_bound(t.begin(), t.end(), time);
  if (it == t.end()) return t.size() - 1;
  const auto i = static_cast<std::size_t>(it - t.begin());
  if (i > 0 && time - t[i - 1] < t[i] - time) return i - 1;
  return i;
}

} // namespace

const char* to_string(HysteresisProtocol protocol) {
  return protocol == HysteresisProtocol::A ? "a" : "b";
}

HysteresisProtocol parse_hysteresis_protocol(const std::string& text) {
  if (text == "a" || text == "A") return HysteresisProtocol::A;
  if (text == "b" || text == "B") return HysteresisProtocol::B;
  throw ConfigError("unknown hysteresis protocol '" + text + "' (expected a or b)");
}

TriangularPressure protocol_waveform(HysteresisProtocol protocol) {
  if (protocol == HysteresisProtocol::A) {
    return TriangularPressure{0.0, {400.0, 0.0, 320.0, 0.0, 240.0, 0.0, 160.0, 0.0, 80.0, 0.0},
                              10.0};
  }
  return TriangularPressure{
      0.0, {420.0, 20.0, 420.0, 100.0, 420.0, 180.0, 420.0, 260.0, 420.0, 340.0, 420.0}, 10.0};
}

ProtocolRecord run_hysteresis_protocol(const PlantParams& plant, HysteresisProtocol protocol,
                                       const CascadeConfig& cascade,
                                       const ProtocolOptions& options) {
  validate_plant(plant);
  validate_cascade(cascade);
  if (!(options.dt > 0.0) || options.record_every < 1) {
    throw ConfigError("hysteresis protocol needs dt > 0 and record_every >= 1");
  }

  const TriangularPressure command = protocol_waveform(protocol);
  const std::vector<double> vertex_times = triangular_vertex_times(command);
  // Protocol B records from the end of the pressurisation leg.
  const std::size_t first_vertex = protocol == HysteresisProtocol::A ? 0 : 1;
  const double record_start = vertex_times[first_vertex];
  const double settle = 1.0; // s of final hold after the last vertex
  const double end = vertex_times.back() + settle;

  PlantState state = make_plant_state(plant);
  const Limits du{cascade.u_limits.low - cascade.u_neutral,
                  cascade.u_limits.high - cascade.u_neutral};
  PidState inner_a;
  PidState inner_b;
  inner_a.output_limits = du;
  inner_b.output_limits = du;

  ProtocolRecord rec;
  rec.protocol = protocol;
  for (std::size_t i = first_vertex; i < vertex_times.size(); ++i) {
    rec.vertex_times.push_back(vertex_times[i] - record_start);
    rec.vertex_pressures.push_back(i == 0 ? command.start : command.vertices[i - 1]);
  }

  const auto steps = static_cast<std::size_t>(std::llround(end / options.dt)) + 1;
  const auto start_step = static_cast<std::size_t>(std::llround(record_start / options.dt));
  Measurement meas = measure(state, plant);
  double acc_t = 0.0, acc_pa = 0.0, acc_pb = 0.0, acc_theta = 0.0;
  int acc_n = 0;

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * options.dt;
    if (k >= start_step) {
      acc_t += t - record_start;
      acc_pa += meas.p_a;
      acc_pb += meas.p_b;
      acc_theta += meas.theta;
      if (++acc_n == options.record_every) {
        rec.t.push_back(acc_t / acc_n);
        rec.pressure.push_back(acc_pa / acc_n);
        rec.pressure_b.push_back(acc_pb / acc_n);
        rec.angle.push_back(acc_theta / acc_n);
        acc_t = acc_pa = acc_pb = acc_theta = 0.0;
        acc_n = 0;
      }
    }
    const double pd = gen_reference(command, t);
    const auto a = pid_step(inner_a, cascade.inner, pd - meas.p_a, t);
    const auto b = pid_step(inner_b, cascade.inner, 0.0 - meas.p_b, t);
    inner_a = a.state;
    inner_b = b.state;
    const double u_a = cascade.u_limits.clamp(cascade.u_neutral + a.output);
    const double u_b = cascade.u_limits.clamp(cascade.u_neutral + b.output);
    meas = plant_step(state, plant, u_a, u_b, options.dt);
  }

  if (protocol == HysteresisProtocol::B && !rec.angle.empty()) {
    const double lowest = *std::min_element(rec.angle.begin(), rec.angle.end());
    for (double& a : rec.angle) a -= lowest;
  }
  return rec;
}

std::vector<HysteresisLoop> extract_loops(const std::vector<double>& t,
                                          const std::vector<double>& pressure,
                                          const std::vector<double>& angle,
                                          const std::vector<double>& vertex_times) {
  if (vertex_times.size() < 3) {
    throw AnalysisError("loop extraction needs at least 3 vertices (got " +
                        std::to_string(vertex_times.size()) + ")");
  }
  if (t.size() != pressure.size() || t.size() != angle.size() || t.empty()) {
    throw AnalysisError("loop extraction needs equally sized, non-empty series");
  }
  // One sample interval of slack: logged samples may be block means whose
  // timestamps sit inside the block.
  const double slack = t.size() > 1 ? t[1] - t[0] : 0.0;
  for (std::size_t i = 0; i < vertex_times.size(); ++i) {
    const double v = vertex_times[i];
    if (v < t.front() - slack || v > t.back() + slack) {
      throw AnalysisError("vertex time " + std::to_string(v) + " s lies outside the series [" +
                          std::to_string(t.front()) + ", " + std::to_string(t.back()) + "]");
    }
    if (i > 0 && !(v > vertex_times[i - 1])) {
      throw AnalysisError("vertex times must increase");
    }
  }

  std::vector<HysteresisLoop> loops;
  for (std::size_t i = 0; i + 2 < vertex_times.size(); i += 2) {
    const double v0 = vertex_times[i], v1 = vertex_times[i + 1], v2 = vertex_times[i + 2];
    const double p0 = pressure[index_at(t, v0)];
    const double p1 = pressure[index_at(t, v1)];
    const double p2 = pressure[index_at(t, v2)];
    const SweepDirection first = p1 >= p0 ? SweepDirection::Ascending : SweepDirection::Descending;
    const SweepDirection second = p2 >= p1 ? SweepDirection::Ascending : SweepDirection::Descending;

    HysteresisLoop loop;
    loop.cycle_index = static_cast<int>(i / 2);
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (t[k] < v0 || t[k] > v2) continue;
      loop.pressure.push_back(pressure[k]);
      loop.angle.push_back(angle[k]);
      loop.direction.push_back(t[k] < v1 ? first : second);
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

std::vector<double> detect_pressure_vertices(const std::vector<double>& t,
                                             const std::vector<double>& pressure,
                                             double min_excursion) {
  if (t.size() != pressure.size() || t.empty()) {
    throw AnalysisError("vertex detection needs equally sized, non-empty series");
  }
  if (!(min_excursion > 0.0)) throw AnalysisError("vertex detection needs min_excursion > 0");

  std::vector<double> vertices{t.front()};
  double last_vertex = pressure.front();
  std::size_t extreme = 0;
  int dir = 0; // +1 rising, -1 falling, 0 undecided
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double p = pressure[k];
    if (dir == 0) {
      if (std::abs(p - last_vertex) >= min_excursion) {
        dir = p > last_vertex ? 1 : -1;
        extreme = k;
      }
      continue;
    }
    if ((dir > 0 && p > pressure[extreme]) || (dir < 0 && p < pressure[extreme])) {
      extreme = k;
    } else if (std::abs(p - pressure[extreme]) >= min_excursion) {
      vertices.push_back(t[extreme]);
      last_vertex = pressure[extreme];
      dir = -dir;
      extreme = k;
    }
  }
  if (dir != 0 && std::abs(pressure[extreme] - last_vertex) >= min_excursion &&
      t[extreme] > vertices.back()) {
    vertices.push_back(t[extreme]);
  }
  return vertices;
}

double sample_gradient(const HysteresisLoop& loop, std::size_t index, int half_window) {
  const std::size_t n = loop.pressure.size();
  if (n == 0 || index >= n) return 0.0;
  const auto w = static_cast<std::size_t>(std::max(half_window, 1));
  const std::size_t lo = index > w ? index - w : 0;
  const std::size_t hi = std::min(n - 1, index + w);

  double p_lo = loop.pressure[lo], p_hi = loop.pressure[lo];
  double mean_p = 0.0, mean_a = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) {
    p_lo = std::min(p_lo, loop.pressure[k]);
    p_hi = std::max(p_hi, loop.pressure[k]);
    mean_p += loop.pressure[k];
    mean_a += loop.angle[k];
  }
  if (p_hi - p_lo < kMinGradientSpread) return 0.0;
  const auto count = static_cast<double>(hi - lo + 1);
  mean_p /= count;
  mean_a /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) {
    const double dx = loop.pressure[k] - mean_p;
    sxy += dx * (loop.angle[k] - mean_a);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double DeadzoneReport::width(SweepDirection direction) const {
  double total = 0.0;
  for (const auto& run : runs) {
    if (run.direction == direction) total += run.width;
  }
  return total;
}

DeadzoneReport detect_deadzones(const HysteresisLoop& loop, const DeadzoneThresholds& th) {
  const std::size_t n = loop.pressure.size();
  const auto min_len = static_cast<std::size_t>(2 * std::max(th.half_window, 1) + 2);
  if (n < min_len) {
    throw AnalysisError("loop " + std::to_string(loop.cycle_index) + " has " + std::to_string(n) +
                        " samples; detection needs at least " + std::to_string(min_len));
  }
  const auto [p_lo, p_hi] = std::minmax_element(loop.pressure.begin(), loop.pressure.end());
  const auto [a_lo, a_hi] = std::minmax_element(loop.angle.begin(), loop.angle.end());
  const double range = *p_hi - *p_lo;
  if (!(range > 0.0)) {
    throw AnalysisError("loop " + std::to_string(loop.cycle_index) + " has zero pressure range");
  }

  DeadzoneReport rep;
  rep.p_min = *p_lo;
  rep.p_max = *p_hi;
  rep.p_ave = 0.5 * (rep.p_max + rep.p_min);
  rep.grad_ave = (*a_hi - *a_lo) / range;
  rep.flags.assign(n, false);
  rep.gradients.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep.gradients[i] = sample_gradient(loop, i, th.half_window);
    const bool flat = std::abs(rep.gradients[i]) < th.gradient * rep.grad_ave;
    const bool outer = std::abs(loop.pressure[i] - rep.p_ave) / range > th.pressure;
    rep.flags[i] = flat && outer;
  }

  for (std::size_t i = 0; i < n;) {
    if (!rep.flags[i]) {
      ++i;
      continue;
    }
    DeadzoneRun run{loop.direction[i], i, i, 0.0};
    double lo = loop.pressure[i], hi = loop.pressure[i];
    std::size_t j = i + 1;
    while (j < n && rep.flags[j] && loop.direction[j] == run.direction) {
      lo = std::min(lo, loop.pressure[j]);
      hi = std::max(hi, loop.pressure[j]);
      ++j;
    }
    run.last = j - 1;
    run.width = hi - lo;
    rep.runs.push_back(run);
    i = j;
  }
  return rep;
}

double loop_amplitude(const HysteresisLoop& loop) {
  if (loop.pressure.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(loop.pressure.begin(), loop.pressure.end());
  return *hi - *lo;
}

std::vector<WidthSummary> deadzone_width_trend(const std::vector<DeadzoneReport>& reports,
                                               const std::vector<double>& loop_amplitudes) {
  if (reports.size() < 2) throw AnalysisError("width trend needs at least 2 loops");
  if (reports.size() != loop_amplitudes.size()) {
    throw AnalysisError("width trend: " + std::to_string(reports.size()) + " reports but " +
                        std::to_string(loop_amplitudes.size()) + " amplitudes");
  }
  std::vector<WidthSummary> out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out.push_back({static_cast<int>(i), loop_amplitudes[i],
                   reports[i].width(SweepDirection::Descending),
                   reports[i].width(SweepDirection::Ascending)});
  }
  std::stable_sort(out.begin(), out.end(), [](const WidthSummary& a, const WidthSummary& b) {
    return a.amplitude < b.amplitude;
  });
  return out;
}

} // namespace pamctl
