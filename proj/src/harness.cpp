#include "pamctl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <system_error>

#include "json.hpp"
#include "pamctl/csv.hpp"
#include "pamctl/error.hpp"

namespace pamctl {

namespace {

ErrorMetrics mean_of(const std::vector<RunResult>& runs) {
  std::vector<ErrorMetrics> per_run;
  per_run.reserve(runs.size());
  for (const auto& r : runs) per_run.push_back(r.metrics);
  return average_metrics(per_run);
}

const char* display_name(ControllerKind kind) {
  switch (kind) {
  case ControllerKind::PID: return "PID";
  case ControllerKind::PID_FF: return "PID+FF";
  case ControllerKind::PID_AF: return "PID+AF";
  }
  return "?";
}

const char* direction_name(SweepDirection d) {
  return d == SweepDirection::Descending ? "descending" : "ascending";
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

struct MetricField {
  const char* name;
  double ErrorMetrics::*field;
};

constexpr MetricField kMetricFields[] = {
    {"mae", &ErrorMetrics::mae},     {"rmse", &ErrorMetrics::rmse},
    {"e_max", &ErrorMetrics::e_max}, {"e_min", &ErrorMetrics::e_min},
    {"var", &ErrorMetrics::var},
};

std::string metrics_row(const ErrorMetrics& m) {
  std::string row;
  for (const auto& f : kMetricFields) row += "," + format_number(m.*f.field);
  return row;
}

std::string metrics_header() {
  std::string h;
  for (const auto& f : kMetricFields) h += std::string(",") + f.name;
  return h;
}

int index_of(const std::vector<ControllerKind>& kinds, ControllerKind k) {
  const auto it = std::find(kinds.begin(), kinds.end(), k);
  return it == kinds.end() ? -1 : static_cast<int>(it - kinds.begin());
}

std::vector<HysteresisLoop> loops_or_throw(const ProtocolRecord& rec) {
  return extract_loops(rec.t, rec.pressure, rec.angle, rec.vertex_times);
}

void analyse_loops(HysteresisResult& result, const DeadzoneThresholds& th) {
  std::vector<double> amplitudes;
  for (const auto& loop : result.loops) {
    result.reports.push_back(detect_deadzones(loop, th));
    amplitudes.push_back(loop_amplitude(loop));
  }
  if (result.loops.size() >= 2) result.trend = deadzone_width_trend(result.reports, amplitudes);
}

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name,
                                 const std::string& content,
                                 std::vector<std::filesystem::path>& written) {
  const auto path = dir / name;
  write_text_file(path, content);
  written.push_back(path);
  return path;
}

std::string loops_csv(const HysteresisResult& r) {
  std::string out = "loop,index,pressure,angle,direction,gradient,flag\n";
  for (std::size_t l = 0; l < r.loops.size(); ++l) {
    const auto& loop = r.loops[l];
    const auto& rep = r.reports[l];
    for (std::size_t i = 0; i < loop.pressure.size(); ++i) {
      out += std::to_string(loop.cycle_index) + "," + std::to_string(i) + "," +
             format_number(loop.pressure[i]) + "," + format_number(loop.angle[i]) + "," +
             direction_name(loop.direction[i]) + "," + format_number(rep.gradients[i]) + "," +
             (rep.flags[i] ? "1" : "0") + "\n";
    }
  }
  return out;
}

std::string deadzones_json(const HysteresisResult& r) {
  nlohmann::json doc = nlohmann::json::array();
  for (std::size_t l = 0; l < r.loops.size(); ++l) {
    const auto& loop = r.loops[l];
    const auto& rep = r.reports[l];
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& run : rep.runs) {
      runs.push_back({{"direction", direction_name(run.direction)},
                      {"p_start", loop.pressure[run.first]},
                      {"p_end", loop.pressure[run.last]},
                      {"samples", run.last - run.first + 1},
                      {"width", run.width}});
    }
    doc.push_back({{"loop", loop.cycle_index},
                   {"amplitude", loop_amplitude(loop)},
                   {"grad_ave", rep.grad_ave},
                   {"p_ave", rep.p_ave},
                   {"p_min", rep.p_min},
                   {"p_max", rep.p_max},
                   {"descending_width", rep.width(SweepDirection::Descending)},
                   {"ascending_width", rep.width(SweepDirection::Ascending)},
                   {"runs", runs}});
  }
  return doc.dump(2) + "\n";
}

std::string widths_csv(const HysteresisResult& r) {
  std::string out = "loop,amplitude,descending_width,ascending_width\n";
  for (const auto& w : r.trend) {
    out += std::to_string(w.cycle_index) + "," + format_number(w.amplitude) + "," +
           format_number(w.descending_width) + "," + format_number(w.ascending_width) + "\n";
  }
  return out;
}

std::string envelope_csv(const std::vector<RunResult>& runs) {
  std::vector<TimeSeries> aligned;
  aligned.reserve(runs.size());
  for (const auto& r : runs) {
    aligned.push_back(r.config.jitter_fraction > 0.0 ? resample_nominal(r.series) : r.series);
  }
  const auto theta = aggregate_runs(aligned, [](const Sample& s) { return s.theta; });
  const auto error = aggregate_runs(aligned, [](const Sample& s) { return s.error; });
  std::string out = "t,theta_mean,theta_lower,theta_upper,error_mean,error_lower,error_upper\n";
  for (std::size_t i = 0; i < theta.t.size(); ++i) {
    const double row[] = {theta.t[i],     theta.mean[i],  theta.lower[i], theta.upper[i],
                          error.mean[i], error.lower[i], error.upper[i]};
    for (std::size_t c = 0; c < std::size(row); ++c) {
      if (c) out += ',';
      out += format_number(row[c]);
    }
    out += '\n';
  }
  return out;
}

} // namespace

Comparison compare_controllers(const ExperimentPlan& plan) {
  validate_plan(plan);
  Comparison out;
  for (ControllerKind kind : plan.controllers) {
    RunConfig cfg = plan.base;
    cfg.controller_kind = kind;
    ControllerRuns cr;
    cr.kind = kind;
    cr.runs = run_repeats(cfg);
    cr.mean = mean_of(cr.runs);
    out.controllers.push_back(std::move(cr));
  }
  return out;
}

SweepTable run_sweep(const ExperimentPlan& plan) {
  validate_plan(plan);
  if (plan.kind != PlanKind::SweepAmplitude && plan.kind != PlanKind::SweepFrequency) {
    throw ConfigError(std::string("plan.kind must be a sweep (got ") + to_string(plan.kind) + ")");
  }
  SweepTable table;
  table.kind = plan.kind;
  table.controllers = plan.controllers;
  for (double value : plan.sweep_values) {
    SweepRow row;
    row.value = value;
    for (ControllerKind kind : plan.controllers) {
      RunConfig cfg = sweep_cell_config(plan.base, plan.kind, value);
      cfg.controller_kind = kind;
      row.metrics.push_back(mean_of(run_repeats(cfg)));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<HysteresisResult> run_hysteresis(const ExperimentPlan& plan) {
  validate_plan(plan);
  ProtocolOptions options;
  options.dt = plan.base.dt_nominal;
  std::vector<HysteresisResult> out;
  for (HysteresisProtocol protocol : plan.protocols) {
    HysteresisResult r;
    r.record = run_hysteresis_protocol(plan.base.plant, protocol, plan.base.cascade, options);
    r.loops = loops_or_throw(r.record);
    analyse_loops(r, DeadzoneThresholds{});
    out.push_back(std::move(r));
  }
  return out;
}

HysteresisResult analyze_log(const std::vector<double>& t, const std::vector<double>& pressure,
                             const std::vector<double>& angle, double min_excursion,
                             const DeadzoneThresholds& thresholds) {
  if (t.size() != pressure.size() || t.size() != angle.size()) {
    throw AnalysisError("log columns differ in length");
  }
  HysteresisResult r;
  r.record.t = t;
  r.record.pressure = pressure;
  r.record.angle = angle;
  r.record.vertex_times = detect_pressure_vertices(t, pressure, min_excursion);
  for (double tv : r.record.vertex_times) {
    const auto it = std::lower_bound(t.begin(), t.end(), tv);
    r.record.vertex_pressures.push_back(pressure[static_cast<std::size_t>(it - t.begin())]);
  }
  r.loops = loops_or_throw(r.record);
  analyse_loops(r, thresholds);
  return r;
}

std::string comparison_metrics_csv(const Comparison& comparison) {
  std::string out = "controller" + metrics_header() + "\n";
  for (const auto& c : comparison.controllers) {
    out += std::string(to_string(c.kind)) + metrics_row(c.mean) + "\n";
  }
  return out;
}

std::string comparison_metrics_text(const Comparison& comparison) {
  std::vector<ControllerKind> kinds;
  for (const auto& c : comparison.controllers) kinds.push_back(c.kind);
  const int pid = index_of(kinds, ControllerKind::PID);
  const int ff = index_of(kinds, ControllerKind::PID_FF);
  const int af = index_of(kinds, ControllerKind::PID_AF);
  const std::size_t repeats =
      comparison.controllers.empty() ? 0 : comparison.controllers.front().runs.size();

  std::string out = "mean over " + std::to_string(repeats) + " repeat(s), deg (var deg^2)\n";
  if (pid >= 0 && ff >= 0 && af >= 0) {
    out += pad("", 6) + "  PID+AF (PID, PID+FF)\n";
    for (const auto& f : kMetricFields) {
      const auto v = [&](int i) { return comparison.controllers[i].mean.*f.field; };
      out += pad(f.name, 6) + "  " + fixed(v(af), 3) + " (" + fixed(v(pid), 3) + ", " +
             fixed(v(ff), 3) + ")\n";
    }
    return out;
  }
  out += pad("", 6);
  for (const auto& c : comparison.controllers) out += pad(display_name(c.kind), 10);
  out += '\n';
  for (const auto& f : kMetricFields) {
    out += pad(f.name, 6);
    for (const auto& c : comparison.controllers) out += pad(fixed(c.mean.*f.field, 3), 10);
    out += '\n';
  }
  return out;
}

std::string sweep_metrics_csv(const SweepTable& table) {
  std::string out = std::string(table.kind == PlanKind::SweepAmplitude ? "amplitude" : "period") +
                    ",controller" + metrics_header() + "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < table.controllers.size(); ++c) {
      out += format_number(row.value) + "," + to_string(table.controllers[c]) +
             metrics_row(row.metrics[c]) + "\n";
    }
  }
  return out;
}

std::string sweep_metrics_text(const SweepTable& table) {
  const bool amplitude = table.kind == PlanKind::SweepAmplitude;
  std::string out = amplitude ? "amplitude sweep, period 8 s; MAE / RMSE in deg\n"
                              : "period sweep, amplitude 20 deg; MAE / RMSE in deg\n";
  out += pad(amplitude ? "A deg" : "T s", 8);
  for (ControllerKind k : table.controllers) out += pad(display_name(k), 16);
  out += '\n';
  for (const auto& row : table.rows) {
    out += pad(fixed(row.value, 1), 8);
    for (const auto& m : row.metrics) {
      out += pad(fixed(m.mae, 3) + " / " + fixed(m.rmse, 3), 16);
    }
    out += '\n';
  }
  return out;
}

std::string series_svg(const TimeSeries& series, double kp0, const std::string& label) {
  constexpr double width = 900.0, panel_h = 160.0, left = 60.0, right = 20.0, top = 30.0,
                   gap = 30.0;
  constexpr std::size_t max_points = 1500;
  struct Trace {
    double (*get)(const Sample&, double);
    const char* colour;
  };
  struct Panel {
    const char* title;
    std::vector<Trace> traces;
  };
  const std::vector<Panel> panels{
      {"angle, deg (ref dashed)",
       {{[](const Sample& s, double) { return s.theta_ref; }, "#888888"},
        {[](const Sample& s, double) { return s.theta; }, "#1f5fbf"}}},
      {"error, deg", {{[](const Sample& s, double) { return s.error; }, "#c03030"}}},
      {"pressure, kPa (A blue, B orange)",
       {{[](const Sample& s, double) { return s.p_a; }, "#1f5fbf"},
        {[](const Sample& s, double) { return s.p_b; }, "#e08020"}}},
      {"kp / kp0 (A blue, B orange)",
       {{[](const Sample& s, double k) { return s.kp_a / k; }, "#1f5fbf"},
        {[](const Sample& s, double k) { return s.kp_b / k; }, "#e08020"}}},
  };

  const double height = top + panels.size() * (panel_h + gap) + 10.0;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width, 0) +
                    "\" height=\"" + fixed(height, 0) + "\" font-family=\"sans-serif\" " +
                    "font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fixed(left, 0) + "\" y=\"18\" font-size=\"14\">" + label + "</text>\n";
  if (series.empty()) return out + "</svg>\n";

  const std::size_t n = series.size();
  const std::size_t stride = std::max<std::size_t>(1, n / max_points);
  const double t0 = series.samples.front().t;
  const double t1 = std::max(series.samples.back().t, t0 + 1e-9);
  const double plot_w = width - left - right;

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const double y0 = top + p * (panel_h + gap);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& tr : panels[p].traces) {
      for (const auto& s : series.samples) {
        const double v = tr.get(s, kp0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (hi - lo < 1e-9) {
      lo -= 0.5;
      hi += 0.5;
    }
    out += "<rect x=\"" + fixed(left, 1) + "\" y=\"" + fixed(y0, 1) + "\" width=\"" +
           fixed(plot_w, 1) + "\" height=\"" + fixed(panel_h, 1) +
           "\" fill=\"none\" stroke=\"#444\"/>\n";
    out += "<text x=\"" + fixed(left + 4, 1) + "\" y=\"" + fixed(y0 + 12, 1) + "\">" +
           panels[p].title + "</text>\n";
    out += "<text x=\"4\" y=\"" + fixed(y0 + 10, 1) + "\">" + fixed(hi, 2) + "</text>\n";
    out += "<text x=\"4\" y=\"" + fixed(y0 + panel_h, 1) + "\">" + fixed(lo, 2) + "</text>\n";
    for (std::size_t k = 0; k < panels[p].traces.size(); ++k) {
      const auto& tr = panels[p].traces[k];
      out += "<polyline fill=\"none\" stroke=\"" + std::string(tr.colour) +
             "\" stroke-width=\"1\"" +
             (p == 0 && k == 0 ? " stroke-dasharray=\"4 3\"" : "") + " points=\"";
      for (std::size_t i = 0; i < n; i += stride) {
        const auto& s = series.samples[i];
        const double x = left + (s.t - t0) / (t1 - t0) * plot_w;
        const double y = y0 + panel_h - (tr.get(s, kp0) - lo) / (hi - lo) * panel_h;
        out += fixed(x, 1) + "," + fixed(y, 1) + " ";
      }
      out += "\"/>\n";
    }
  }
  out += "<text x=\"" + fixed(left, 0) + "\" y=\"" + fixed(height - 4, 0) + "\">t = " +
         fixed(t0, 1) + " .. " + fixed(t1, 1) + " s</text>\n";
  return out + "</svg>\n";
}

std::string controller_file_stem(ControllerKind kind) {
  switch (kind) {
  case ControllerKind::PID: return "pid";
  case ControllerKind::PID_FF: return "pid_ff";
  case ControllerKind::PID_AF: return "pid_af";
  }
  return "unknown";
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create directory " + dir.string() +
                  (ec ? ": " + ec.message() : std::string()));
  }
}

std::vector<std::filesystem::path> emit_comparison(const Comparison& comparison,
                                                   const std::filesystem::path& out_dir,
                                                   bool plots) {
  ensure_directory(out_dir);
  std::vector<std::filesystem::path> written;
  for (const auto& c : comparison.controllers) {
    if (c.runs.empty()) throw AnalysisError("controller has no runs to emit");
    const auto& first = c.runs.front();
    const double kp0 = first.config.adaptive.kp0;
    const std::string stem = controller_file_stem(c.kind);
    write_file(out_dir, stem + ".csv", series_to_csv(first.series, kp0), written);
    if (plots) {
      write_file(out_dir, stem + ".svg", series_svg(first.series, kp0, display_name(c.kind)),
                 written);
      write_file(out_dir, stem + "_envelope.csv", envelope_csv(c.runs), written);
    }
  }
  write_file(out_dir, "metrics.csv", comparison_metrics_csv(comparison), written);
  write_file(out_dir, "metrics.txt", comparison_metrics_text(comparison), written);
  return written;
}

std::vector<std::filesystem::path> emit_sweep(const SweepTable& table,
                                              const std::filesystem::path& out_dir) {
  ensure_directory(out_dir);
  std::vector<std::filesystem::path> written;
  const std::string stem = to_string(table.kind);
  write_file(out_dir, stem + ".csv", sweep_metrics_csv(table), written);
  write_file(out_dir, stem + ".txt", sweep_metrics_text(table), written);
  return written;
}

std::vector<std::filesystem::path> emit_hysteresis(const std::vector<HysteresisResult>& results,
                                                   const std::filesystem::path& out_dir) {
  ensure_directory(out_dir);
  std::vector<std::filesystem::path> written;
  for (const auto& r : results) {
    const std::string p = to_string(r.record.protocol);
    std::string log = "t,pressure_a,pressure_b,angle\n";
    for (std::size_t i = 0; i < r.record.t.size(); ++i) {
      log += format_number(r.record.t[i]) + "," + format_number(r.record.pressure[i]) + "," +
             format_number(r.record.pressure_b[i]) + "," + format_number(r.record.angle[i]) +
             "\n";
    }
    write_file(out_dir, "hysteresis_" + p + ".csv", log, written);
    write_file(out_dir, "loops_" + p + ".csv", loops_csv(r), written);
    write_file(out_dir, "deadzones_" + p + ".json", deadzones_json(r), written);
    write_file(out_dir, "widths_" + p + ".csv", widths_csv(r), written);
  }
  return written;
}

std::vector<std::filesystem::path> emit_analysis(const HysteresisResult& result,
                                                 const std::filesystem::path& out_dir) {
  ensure_directory(out_dir);
  std::vector<std::filesystem::path> written;
  write_file(out_dir, "loops.csv", loops_csv(result), written);
  write_file(out_dir, "deadzones.json", deadzones_json(result), written);
  write_file(out_dir, "widths.csv", widths_csv(result), written);
  return written;
}

} // namespace pamctl
