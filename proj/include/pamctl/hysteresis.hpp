#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pamctl/control.hpp"
#include "pamctl/plant.hpp"
#include "pamctl/signal.hpp"

namespace pamctl {

enum class HysteresisProtocol {
  A, // from atmospheric rest, diminishing positive triangle on PAM A
  B, // from 420 kPa in PAM A, diminishing negative triangle
};

const char* to_string(HysteresisProtocol protocol); // "a", "b"
HysteresisProtocol parse_hysteresis_protocol(const std::string& text);

/// Pressure command of a protocol. Protocol B includes the initial
/// pressurisation leg 0 -> 420 kPa, which is not recorded.
TriangularPressure protocol_waveform(HysteresisProtocol protocol);

struct ProtocolOptions {
  double dt = 1.0 / 500.0;  // control tick, s
  int record_every = 10;    // ticks averaged into one logged sample
};

/// Logged run of a protocol. Every logged sample is the mean of
/// `record_every` consecutive control ticks.
struct ProtocolRecord {
  HysteresisProtocol protocol = HysteresisProtocol::A;
  std::vector<double> t;          // s, from the start of the recording
  std::vector<double> pressure;   // measured PAM A, kPa
  std::vector<double> pressure_b; // measured PAM B, kPa
  std::vector<double> angle;      // measured, deg; protocol B is shifted so min == 0
  std::vector<double> vertex_times; // command vertices inside the recording, s
  std::vector<double> vertex_pressures;
};

/// Drives PAM A through the protocol's pressure command with the inner
/// pressure loop of `cascade` while PAM B is commanded to 0 kPa.
ProtocolRecord run_hysteresis_protocol(const PlantParams& plant, HysteresisProtocol protocol,
                                       const CascadeConfig& cascade = {},
                                       const ProtocolOptions& options = {});

enum class SweepDirection { Ascending, Descending };

struct HysteresisLoop {
  int cycle_index = 0;
  std::vector<double> pressure; // kPa
  std::vector<double> angle;    // deg
  std::vector<SweepDirection> direction;
};

/// One loop per vertex triple (v[0], v[1], v[2]), (v[2], v[3], v[4]), ...
/// A trailing pair is dropped. Each sample with v[i] <= t < v[i+1] belongs to
/// the first leg, v[i+1] <= t <= v[i+2] to the second. The direction of each
/// leg comes from the pressure at its end points.
/// Throws AnalysisError with fewer than three vertices, vertices outside the
/// series or non-increasing vertex times.
std::vector<HysteresisLoop> extract_loops(const std::vector<double>& t,
                                          const std::vector<double>& pressure,
                                          const std::vector<double>& angle,
                                          const std::vector<double>& vertex_times);

/// Times of the pressure turning points of a measured log: the first
/// sample, every extremum followed by at least `min_excursion` kPa of travel
/// the other way, and the last sample if it lies `min_excursion` past the
/// previous vertex.
std::vector<double> detect_pressure_vertices(const std::vector<double>& t,
                                             const std::vector<double>& pressure,
                                             double min_excursion);

/// Least-squares slope of angle against pressure over
/// [index - half_window, index + half_window] clipped to the loop.
/// 0 when the pressure spread inside the window is below 0.1 kPa.
double sample_gradient(const HysteresisLoop& loop, std::size_t index, int half_window);

struct DeadzoneRun {
  SweepDirection direction = SweepDirection::Ascending;
  std::size_t first = 0; // sample indices, inclusive
  std::size_t last = 0;
  double width = 0.0; // pressure extent, kPa
};

struct DeadzoneReport {
  std::vector<bool> flags;
  std::vector<double> gradients;
  double grad_ave = 0.0; // deg/kPa
  double p_ave = 0.0;    // kPa
  double p_min = 0.0;
  double p_max = 0.0;
  std::vector<DeadzoneRun> runs;

  /// Summed width of flagged runs on one side. Descending runs are the
  /// pressurise -> depressurise transition.
  double width(SweepDirection direction) const;
};

struct DeadzoneThresholds {
  double gradient = 0.3;
  double pressure = 0.2;
  int half_window = 10;
};

/// Flags sample i iff
///   |grad_i| < gradient * grad_ave   and   |P_i - P_ave| / (P_max - P_min) > pressure
/// with grad_ave = (theta_max - theta_min) / (P_max - P_min), P_ave the
/// mid-range pressure. Runs are maximal stretches of flagged samples sharing
/// a direction tag.
/// Throws AnalysisError for a loop shorter than 2 * half_window + 2 samples
/// or with zero pressure range.
DeadzoneReport detect_deadzones(const HysteresisLoop& loop, const DeadzoneThresholds& th = {});

struct WidthSummary {
  int cycle_index = 0;
  double amplitude = 0.0;        // kPa
  double descending_width = 0.0; // kPa
  double ascending_width = 0.0;  // kPa
};

/// Widths paired with loop amplitudes, ordered by increasing amplitude.
/// Throws AnalysisError with fewer than two loops or mismatched lengths.
std::vector<WidthSummary> deadzone_width_trend(const std::vector<DeadzoneReport>& reports,
                                               const std::vector<double>& loop_amplitudes);

/// Pressure range of a loop, kPa.
double loop_amplitude(const HysteresisLoop& loop);

} // namespace pamctl
