// pamctl: run the dual-PAM controller experiments from the command line.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pamctl/config_file.hpp"
#include "pamctl/csv.hpp"
#include "pamctl/error.hpp"
#include "pamctl/harness.hpp"

namespace fs = std::filesystem;
using namespace pamctl;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;
constexpr int kExitAnalysis = 1;

struct CommonOptions {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> repeats;
  std::string controller;
  bool no_noise = false;
  std::optional<double> jitter;
  bool plots = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "key = value config file");
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", o.seed, "base noise seed");
  cmd->add_option("--repeats", o.repeats, "repeats per run");
  cmd->add_option("--controller", o.controller, "pid | pid-ff | pid-af");
  cmd->add_flag("--no-noise", o.no_noise, "zero sensor noise");
  cmd->add_option("--jitter", o.jitter, "timestamp jitter fraction of dt");
  cmd->add_flag("--plots", o.plots, "also write SVG panels and envelope CSVs");
}

ExperimentPlan build_plan(const CommonOptions& o) {
  ExperimentPlan plan = o.config.empty() ? default_plan() : load_plan(o.config);
  if (o.seed) plan.base.noise_seed = *o.seed;
  if (o.repeats) plan.base.repeats = *o.repeats;
  if (o.no_noise) {
    plan.base.plant.noise_sigma_p = 0.0;
    plan.base.plant.noise_sigma_theta = 0.0;
  }
  if (o.jitter) plan.base.jitter_fraction = *o.jitter;
  if (!o.controller.empty()) {
    plan.base.controller_kind = parse_controller_kind(o.controller);
    plan.controllers = {plan.base.controller_kind};
  }
  return plan;
}

void report(const std::vector<fs::path>& written) {
  for (const auto& p : written) std::cout << "wrote " << p.string() << '\n';
}

int cmd_simulate(const CommonOptions& o) {
  ExperimentPlan plan = build_plan(o);
  plan.kind = PlanKind::Single;
  plan.controllers = {plan.base.controller_kind};
  const Comparison c = compare_controllers(plan);
  std::cout << comparison_metrics_text(c);
  report(emit_comparison(c, o.out, o.plots));
  return 0;
}

int cmd_compare(const CommonOptions& o) {
  ExperimentPlan plan = build_plan(o);
  plan.kind = PlanKind::Compare;
  const Comparison c = compare_controllers(plan);
  std::cout << comparison_metrics_text(c);
  report(emit_comparison(c, o.out, o.plots));
  return 0;
}

int cmd_sweep(const CommonOptions& o, const std::string& mode, const std::vector<double>& values) {
  ExperimentPlan plan = build_plan(o);
  plan.kind = mode == "amplitude" ? PlanKind::SweepAmplitude : PlanKind::SweepFrequency;
  if (!values.empty()) {
    plan.sweep_values = values;
  } else if (plan.sweep_values.empty()) {
    plan.sweep_values = plan.kind == PlanKind::SweepAmplitude
                            ? std::vector<double>{10.0, 15.0, 20.0, 25.0, 30.0}
                            : std::vector<double>{10.0, 8.0, 6.0, 4.0, 2.0};
  }
  const SweepTable t = run_sweep(plan);
  std::cout << sweep_metrics_text(t);
  report(emit_sweep(t, o.out));
  return 0;
}

int cmd_hysteresis(const CommonOptions& o, const std::string& protocol) {
  ExperimentPlan plan = build_plan(o);
  plan.kind = PlanKind::Hysteresis;
  if (protocol == "both") {
    plan.protocols = {HysteresisProtocol::A, HysteresisProtocol::B};
  } else if (!protocol.empty()) {
    plan.protocols = {parse_hysteresis_protocol(protocol)};
  }
  const auto results = run_hysteresis(plan);
  for (const auto& r : results) {
    std::printf("protocol %s: %zu loops\n", to_string(r.record.protocol), r.loops.size());
    for (const auto& w : r.trend) {
      std::printf("  amplitude %7.1f kPa  descending %6.1f kPa  ascending %6.1f kPa\n",
                  w.amplitude, w.descending_width, w.ascending_width);
    }
  }
  report(emit_hysteresis(results, o.out));
  return 0;
}

std::vector<double> first_column(const CsvTable& table, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (table.has_column(n)) return table.column(n);
  }
  return table.column(*names.begin()); // throws naming the preferred column
}

int cmd_analyze(const CommonOptions& o, const std::string& input, double min_excursion) {
  const CsvTable table = parse_csv(read_text_file(input));
  const auto t = table.column("t");
  const auto pressure = first_column(table, {"pressure", "pressure_a", "p_a"});
  const auto angle = first_column(table, {"angle", "theta"});
  const HysteresisResult r = analyze_log(t, pressure, angle, min_excursion);
  std::printf("%zu loops\n", r.loops.size());
  for (std::size_t i = 0; i < r.reports.size(); ++i) {
    std::printf("  loop %d  amplitude %7.1f kPa  grad_ave %.4f deg/kPa  descending %6.1f  "
                "ascending %6.1f\n",
                r.loops[i].cycle_index, loop_amplitude(r.loops[i]), r.reports[i].grad_ave,
                r.reports[i].width(SweepDirection::Descending),
                r.reports[i].width(SweepDirection::Ascending));
  }
  report(emit_analysis(r, o.out));
  return 0;
}

int cmd_plant_describe(const CommonOptions& o, double step) {
  const ExperimentPlan plan = build_plan(o);
  if (!(step > 0.0)) throw ConfigError("--step must be positive");
  const auto& plant = plan.base.plant;
  std::string csv = "dp,theta\n";
  for (double dp = 0.0; dp <= plant.p_limits.high + 1e-9; dp += step) {
    csv += format_number(dp) + "," + format_number(measure_static_gain(plant, dp)) + "\n";
  }
  ensure_directory(o.out);
  const fs::path path = fs::path(o.out) / "plant_static.csv";
  write_text_file(path, csv);
  std::printf("static angle at 420 kPa: %.3f deg\n", measure_static_gain(plant, 420.0));
  report({path});
  return 0;
}

int cmd_plot(const CommonOptions& o, const std::string& input) {
  const ExperimentPlan plan = build_plan(o);
  const TimeSeries s = series_from_csv(read_text_file(input), plan.base.adaptive.kp0);
  ensure_directory(o.out);
  const fs::path path = fs::path(o.out) / (fs::path(input).stem().string() + ".svg");
  write_text_file(path, series_svg(s, plan.base.adaptive.kp0, fs::path(input).stem().string()));
  report({path});
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cascaded PID with adaptive hysteresis compensation for a dual-PAM actuator"};
  app.require_subcommand(1);

  CommonOptions o;
  std::string mode = "amplitude", protocol, input;
  std::vector<double> values;
  double min_excursion = 20.0, step = 5.0;

  auto* simulate = app.add_subcommand("simulate", "one controller, repeated runs");
  add_common(simulate, o);
  auto* compare = app.add_subcommand("compare", "PID, PID+FF and PID+AF on one reference");
  add_common(compare, o);
  auto* sweep = app.add_subcommand("sweep", "amplitude or period sweep of the sinusoid");
  add_common(sweep, o);
  sweep->add_option("--mode", mode, "amplitude | frequency")
      ->check(CLI::IsMember({"amplitude", "frequency"}))
      ->capture_default_str();
  sweep->add_option("--values", values, "amplitudes (deg) or periods (s)")->delimiter(',');
  auto* hyst = app.add_subcommand("hysteresis", "pressure protocol on PAM A and dead-zone scan");
  add_common(hyst, o);
  hyst->add_option("--protocol", protocol, "a | b | both (default: config, else a)")
      ->check(CLI::IsMember({"a", "b", "both"}))
      ->capture_default_str();
  auto* analyze = app.add_subcommand("analyze", "dead-zone scan of a (t, pressure, angle) CSV");
  add_common(analyze, o);
  analyze->add_option("--input", input, "CSV log")->required();
  analyze->add_option("--min-excursion", min_excursion, "kPa between turning points")
      ->capture_default_str();
  auto* plant = app.add_subcommand("plant", "plant utilities");
  plant->require_subcommand(1);
  auto* describe = plant->add_subcommand("describe", "static ascending curve as CSV");
  add_common(describe, o);
  describe->add_option("--step", step, "kPa between rows")->capture_default_str();
  auto* plot = app.add_subcommand("plot", "four-panel SVG of a run log CSV");
  add_common(plot, o);
  plot->add_option("--input", input, "run log CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(o);
    if (*compare) return cmd_compare(o);
    if (*sweep) return cmd_sweep(o, mode, values);
    if (*hyst) return cmd_hysteresis(o, protocol);
    if (*analyze) return cmd_analyze(o, input, min_excursion);
    if (*describe) return cmd_plant_describe(o, step);
    if (*plot) return cmd_plot(o, input);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const AnalysisError& e) {
    std::cerr << "analysis error: " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAnalysis;
  }
  return 0;
}
