#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pamctl/hysteresis.hpp"
#include "pamctl/run_config.hpp"

namespace pamctl {

enum class PlanKind { Single, Compare, SweepAmplitude, SweepFrequency, Hysteresis };

const char* to_string(PlanKind kind); // "single", "compare", "sweep_amplitude", ...
PlanKind parse_plan_kind(const std::string& text);

struct ExperimentPlan {
  PlanKind kind = PlanKind::Compare;
  RunConfig base;
  std::vector<double> sweep_values; // deg for amplitude sweeps, s for frequency sweeps
  std::vector<ControllerKind> controllers{ControllerKind::PID, ControllerKind::PID_FF,
                                          ControllerKind::PID_AF};
  std::vector<HysteresisProtocol> protocols{HysteresisProtocol::A};
};

/// Default base config, compare plan over all three controllers.
ExperimentPlan default_plan();

/// Throws ConfigError when the base config is invalid, a sweep plan has no
/// values (or a non-sinusoid base), or the controller list is empty.
void validate_plan(const ExperimentPlan& plan);

/// Parses `key = value` lines; '#' starts a comment. Keys not present keep
/// their defaults. Unless `duration` is given, it follows the reference's
/// playback length. Throws ConfigError naming `origin` and the line.
ExperimentPlan parse_plan(std::string_view text, const std::string& origin = "<config>");

/// Reads and parses a file. IoError if it cannot be read.
ExperimentPlan load_plan(const std::filesystem::path& path);

/// Full key listing that parse_plan reads back to an identical plan
/// (doubles are written with 17 significant digits).
std::string format_plan(const ExperimentPlan& plan);

/// One cell of a sweep: 7-period sinusoid, period 8 s for amplitude sweeps,
/// amplitude 20 deg for frequency sweeps, analysed on periods 2..6.
RunConfig sweep_cell_config(const RunConfig& base, PlanKind kind, double value);

} // namespace pamctl
