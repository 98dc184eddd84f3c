#include "pamctl/config_file.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "pamctl/error.hpp"

namespace pamctl {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

// std::invalid_argument carries only the offending text; parse_plan adds
// the line context.
double to_double(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    throw std::invalid_argument("'" + text + "' is not a finite number");
  }
  return v;
}

long long to_integer(const std::string& text) {
  const double v = to_double(text);
  if (v != std::floor(v)) throw std::invalid_argument("'" + text + "' is not an integer");
  return static_cast<long long>(v);
}

std::vector<double> to_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(item));
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string nums(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
  return out;
}

const char* analysis_name(AnalysisMode mode) {
  switch (mode) {
    case AnalysisMode::Auto: return "auto";
    case AnalysisMode::Full: return "full";
    case AnalysisMode::Demo3Cycle: return "demo_3cycle";
    case AnalysisMode::Sweep7Period: return "sweep_7period";
  }
  return "auto";
}

AnalysisMode parse_analysis(const std::string& text) {
  for (auto m : {AnalysisMode::Auto, AnalysisMode::Full, AnalysisMode::Demo3Cycle,
                 AnalysisMode::Sweep7Period}) {
    if (text == analysis_name(m)) return m;
  }
  throw std::invalid_argument("unknown analysis mode '" + text + "'");
}

// Compound segments: "sine C A P CYCLES PHASE", "ramp FROM TO DUR",
// "hold VALUE DUR", "sinesum C DUR A:P:PHASE ...", separated by ';'.
std::string format_segments(const Compound& c) {
  std::string out;
  for (std::size_t i = 0; i < c.segments.size(); ++i) {
    if (i) out += "; ";
    const auto& seg = c.segments[i];
    if (const auto* s = std::get_if<Sinusoid>(&seg)) {
      out += "sine " + num(s->centroid) + " " + num(s->amplitude) + " " + num(s->period) + " " +
             std::to_string(s->cycles) + " " + num(s->phase);
    } else if (const auto* r = std::get_if<Ramp>(&seg)) {
      out += "ramp " + num(r->from) + " " + num(r->to) + " " + num(r->duration);
    } else if (const auto* h = std::get_if<Hold>(&seg)) {
      out += "hold " + num(h->value) + " " + num(h->duration);
    } else if (const auto* m = std::get_if<SineSum>(&seg)) {
      out += "sinesum " + num(m->centroid) + " " + num(m->duration);
      for (const auto& term : m->terms) {
        out += " " + num(term.amplitude) + ":" + num(term.period) + ":" + num(term.phase);
      }
    }
  }
  return out;
}

std::vector<Segment> parse_segments(const std::string& text) {
  std::vector<Segment> out;
  for (const auto& piece : split(text, ';')) {
    std::istringstream in(piece);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    const std::string& kind = words.front();
    auto need = [&](std::size_t n) {
      if (words.size() != n) {
        throw std::invalid_argument("segment '" + piece + "' needs " + std::to_string(n - 1) +
                                    " values");
      }
    };
    if (kind == "sine") {
      need(6);
      out.emplace_back(Sinusoid{to_double(words[1]), to_double(words[2]), to_double(words[3]),
                                static_cast<int>(to_integer(words[4])), to_double(words[5])});
    } else if (kind == "ramp") {
      need(4);
      out.emplace_back(Ramp{to_double(words[1]), to_double(words[2]), to_double(words[3])});
    } else if (kind == "hold") {
      need(3);
      out.emplace_back(Hold{to_double(words[1]), to_double(words[2])});
    } else if (kind == "sinesum") {
      if (words.size() < 4) throw std::invalid_argument("segment '" + piece + "' has no terms");
      SineSum s{to_double(words[1]), {}, to_double(words[2])};
      for (std::size_t i = 3; i < words.size(); ++i) {
        const auto parts = split(words[i], ':');
        if (parts.size() != 3) {
          throw std::invalid_argument("sine term '" + words[i] + "' must be AMP:PERIOD:PHASE");
        }
        s.terms.push_back({to_double(parts[0]), to_double(parts[1]), to_double(parts[2])});
      }
      out.emplace_back(std::move(s));
    } else {
      throw std::invalid_argument("unknown segment kind '" + kind + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("compound reference has no segments");
  return out;
}

// Reference keys are collected first and assembled once all lines are read.
struct ReferenceDraft {
  std::string kind = "sinusoid";
  Sinusoid sine;
  double value = 0.0;
  int repeat = 3;
  std::vector<Segment> segments;
  bool has_segments = false;
};

ReferenceSpec build_reference(const ReferenceDraft& d) {
  if (d.kind == "sinusoid") return d.sine;
  if (d.kind == "constant") return Constant{d.value};
  if (d.kind == "demo_mixed") return demo_mixed_sinusoids();
  if (d.kind == "demo_ramp_hold") return demo_ramp_hold();
  if (d.kind == "demo_compound") return demo_compound();
  if (d.kind == "compound") {
    if (!d.has_segments) throw ConfigError("reference.kind = compound needs reference.segments");
    return Compound{d.segments, d.repeat};
  }
  throw ConfigError("unknown reference.kind '" + d.kind +
                    "' (expected sinusoid, constant, compound, demo_mixed, demo_ramp_hold or "
                    "demo_compound)");
}

struct Field {
  const char* key;
  std::function<std::string(const ExperimentPlan&)> get;
  std::function<void(ExperimentPlan&, const std::string&)> set;
};

std::vector<Field> plan_fields() {
  // Scalar double field bound to a member path.
  auto real = [](const char* key, auto accessor) {
    return Field{key,
                 [accessor](const ExperimentPlan& p) {
                   return num(accessor(const_cast<ExperimentPlan&>(p)));
                 },
                 [accessor](ExperimentPlan& p, const std::string& v) {
                   accessor(p) = to_double(v);
                 }};
  };
  std::vector<Field> f;
  f.push_back({"plan.kind", [](const ExperimentPlan& p) { return std::string(to_string(p.kind)); },
               [](ExperimentPlan& p, const std::string& v) { p.kind = parse_plan_kind(v); }});
  f.push_back({"plan.controllers",
               [](const ExperimentPlan& p) {
                 std::string out;
                 for (std::size_t i = 0; i < p.controllers.size(); ++i) {
                   out += (i ? ", " : "") + std::string(to_string(p.controllers[i]));
                 }
                 return out;
               },
               [](ExperimentPlan& p, const std::string& v) {
                 p.controllers.clear();
                 for (const auto& item : split(v, ',')) {
                   p.controllers.push_back(parse_controller_kind(item));
                 }
               }});
  f.push_back({"plan.sweep_values", [](const ExperimentPlan& p) { return nums(p.sweep_values); },
               [](ExperimentPlan& p, const std::string& v) { p.sweep_values = to_doubles(v); }});
  f.push_back({"hysteresis.protocol",
               [](const ExperimentPlan& p) {
                 std::string out;
                 for (std::size_t i = 0; i < p.protocols.size(); ++i) {
                   out += (i ? ", " : "") + std::string(to_string(p.protocols[i]));
                 }
                 return out;
               },
               [](ExperimentPlan& p, const std::string& v) {
                 p.protocols.clear();
                 for (const auto& item : split(v, ',')) {
                   p.protocols.push_back(parse_hysteresis_protocol(item));
                 }
               }});
  f.push_back({"controller",
               [](const ExperimentPlan& p) { return std::string(to_string(p.base.controller_kind)); },
               [](ExperimentPlan& p, const std::string& v) {
                 p.base.controller_kind = parse_controller_kind(v);
               }});
  f.push_back(real("duration", [](ExperimentPlan& p) -> double& { return p.base.duration; }));
  f.push_back(real("dt", [](ExperimentPlan& p) -> double& { return p.base.dt_nominal; }));
  f.push_back(real("jitter", [](ExperimentPlan& p) -> double& { return p.base.jitter_fraction; }));
  f.push_back(real("diff_tau", [](ExperimentPlan& p) -> double& { return p.base.diff_tau; }));
  f.push_back({"seed", [](const ExperimentPlan& p) { return std::to_string(p.base.noise_seed); },
               [](ExperimentPlan& p, const std::string& v) {
                 const long long s = to_integer(v);
                 if (s < 0) throw std::invalid_argument("seed must be nonnegative");
                 p.base.noise_seed = static_cast<std::uint64_t>(s);
               }});
  f.push_back({"repeats", [](const ExperimentPlan& p) { return std::to_string(p.base.repeats); },
               [](ExperimentPlan& p, const std::string& v) {
                 p.base.repeats = static_cast<int>(to_integer(v));
               }});
  f.push_back({"analysis",
               [](const ExperimentPlan& p) { return std::string(analysis_name(p.base.analysis)); },
               [](ExperimentPlan& p, const std::string& v) { p.base.analysis = parse_analysis(v); }});

  // Outer P doubles as the compensator's baseline gain, ff.k as its
  // feedforward gain: one key each, so they cannot disagree.
  f.push_back({"outer.kp", [](const ExperimentPlan& p) { return num(p.base.cascade.outer_a.kp); },
               [](ExperimentPlan& p, const std::string& v) {
                 p.base.cascade.outer_a.kp = p.base.adaptive.kp0 = to_double(v);
               }});
  f.push_back(real("outer.ki", [](ExperimentPlan& p) -> double& { return p.base.cascade.outer_a.ki; }));
  f.push_back(real("outer.kd", [](ExperimentPlan& p) -> double& { return p.base.cascade.outer_a.kd; }));
  f.push_back(real("inner.kp", [](ExperimentPlan& p) -> double& { return p.base.cascade.inner.kp; }));
  f.push_back(real("inner.ki", [](ExperimentPlan& p) -> double& { return p.base.cascade.inner.ki; }));
  f.push_back(real("inner.kd", [](ExperimentPlan& p) -> double& { return p.base.cascade.inner.kd; }));
  f.push_back({"ff.k", [](const ExperimentPlan& p) { return num(p.base.cascade.k_ff); },
               [](ExperimentPlan& p, const std::string& v) {
                 p.base.cascade.k_ff = p.base.adaptive.k_ff = to_double(v);
               }});
  f.push_back(real("limits.pd_low", [](ExperimentPlan& p) -> double& { return p.base.cascade.pd_limits.low; }));
  f.push_back(real("limits.pd_high", [](ExperimentPlan& p) -> double& { return p.base.cascade.pd_limits.high; }));
  f.push_back(real("limits.u_low", [](ExperimentPlan& p) -> double& { return p.base.cascade.u_limits.low; }));
  f.push_back(real("limits.u_high", [](ExperimentPlan& p) -> double& { return p.base.cascade.u_limits.high; }));
  f.push_back(real("limits.dp_fb", [](ExperimentPlan& p) -> double& { return p.base.cascade.dp_fb_limit; }));
  f.push_back({"valve.u_neutral", [](const ExperimentPlan& p) { return num(p.base.cascade.u_neutral); },
               [](ExperimentPlan& p, const std::string& v) {
                 p.base.cascade.u_neutral = p.base.plant.u_neutral = to_double(v);
               }});

  f.push_back(real("adaptive.m1_star", [](ExperimentPlan& p) -> double& { return p.base.adaptive.m1_star; }));
  f.push_back(real("adaptive.m2_star", [](ExperimentPlan& p) -> double& { return p.base.adaptive.m2_star; }));
  f.push_back(real("adaptive.b1", [](ExperimentPlan& p) -> double& { return p.base.adaptive.b1; }));
  f.push_back(real("adaptive.b2", [](ExperimentPlan& p) -> double& { return p.base.adaptive.b2; }));
  f.push_back(real("adaptive.c1", [](ExperimentPlan& p) -> double& { return p.base.adaptive.c1; }));
  f.push_back(real("adaptive.c2", [](ExperimentPlan& p) -> double& { return p.base.adaptive.c2; }));
  f.push_back(real("adaptive.theta_cap", [](ExperimentPlan& p) -> double& { return p.base.adaptive.theta_cap; }));
  f.push_back(real("adaptive.mu", [](ExperimentPlan& p) -> double& { return p.base.adaptive.mu; }));
  f.push_back(real("adaptive.velocity_deadband",
                   [](ExperimentPlan& p) -> double& { return p.base.adaptive.velocity_deadband; }));

  f.push_back(real("plant.k_valve", [](ExperimentPlan& p) -> double& { return p.base.plant.k_valve; }));
  f.push_back(real("plant.p_low", [](ExperimentPlan& p) -> double& { return p.base.plant.p_limits.low; }));
  f.push_back(real("plant.p_high", [](ExperimentPlan& p) -> double& { return p.base.plant.p_limits.high; }));
  f.push_back({"plant.radii", [](const ExperimentPlan& p) { return nums(p.base.plant.play_radii); },
               [](ExperimentPlan& p, const std::string& v) { p.base.plant.play_radii = to_doubles(v); }});
  f.push_back({"plant.weights", [](const ExperimentPlan& p) { return nums(p.base.plant.play_weights); },
               [](ExperimentPlan& p, const std::string& v) { p.base.plant.play_weights = to_doubles(v); }});
  f.push_back(real("plant.tau_theta", [](ExperimentPlan& p) -> double& { return p.base.plant.tau_theta; }));
  f.push_back(real("plant.sigma_theta", [](ExperimentPlan& p) -> double& { return p.base.plant.noise_sigma_theta; }));
  f.push_back(real("plant.sigma_p", [](ExperimentPlan& p) -> double& { return p.base.plant.noise_sigma_p; }));
  return f;
}

void reference_key(ReferenceDraft& d, const std::string& key, const std::string& value) {
  if (key == "reference.kind") d.kind = value;
  else if (key == "reference.centroid") d.sine.centroid = to_double(value);
  else if (key == "reference.amplitude") d.sine.amplitude = to_double(value);
  else if (key == "reference.period") d.sine.period = to_double(value);
  else if (key == "reference.cycles") d.sine.cycles = static_cast<int>(to_integer(value));
  else if (key == "reference.phase") d.sine.phase = to_double(value);
  else if (key == "reference.value") d.value = to_double(value);
  else if (key == "reference.repeat") d.repeat = static_cast<int>(to_integer(value));
  else if (key == "reference.segments") {
    d.segments = parse_segments(value);
    d.has_segments = true;
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

std::string format_reference(const ReferenceSpec& spec) {
  std::string out;
  auto line = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  if (const auto* s = std::get_if<Sinusoid>(&spec)) {
    line("reference.kind", "sinusoid");
    line("reference.centroid", num(s->centroid));
    line("reference.amplitude", num(s->amplitude));
    line("reference.period", num(s->period));
    line("reference.cycles", std::to_string(s->cycles));
    line("reference.phase", num(s->phase));
  } else if (const auto* c = std::get_if<Constant>(&spec)) {
    line("reference.kind", "constant");
    line("reference.value", num(c->value));
  } else if (const auto* m = std::get_if<Compound>(&spec)) {
    line("reference.kind", "compound");
    line("reference.repeat", std::to_string(m->repeat));
    line("reference.segments", format_segments(*m));
  } else {
    throw ConfigError("triangular pressure waveforms have no config representation");
  }
  return out;
}

} // namespace

const char* to_string(PlanKind kind) {
  switch (kind) {
    case PlanKind::Single: return "single";
    case PlanKind::Compare: return "compare";
    case PlanKind::SweepAmplitude: return "sweep_amplitude";
    case PlanKind::SweepFrequency: return "sweep_frequency";
    case PlanKind::Hysteresis: return "hysteresis";
  }
  return "compare";
}

PlanKind parse_plan_kind(const std::string& text) {
  for (auto k : {PlanKind::Single, PlanKind::Compare, PlanKind::SweepAmplitude,
                 PlanKind::SweepFrequency, PlanKind::Hysteresis}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("unknown plan.kind '" + text +
                    "' (expected single, compare, sweep_amplitude, sweep_frequency or hysteresis)");
}

ExperimentPlan default_plan() { return ExperimentPlan{}; }

RunConfig sweep_cell_config(const RunConfig& base, PlanKind kind, double value) {
  const auto* s = std::get_if<Sinusoid>(&base.reference);
  if (!s) throw ConfigError("sweeps need a sinusoid base reference");
  Sinusoid cell = *s;
  cell.cycles = 7;
  if (kind == PlanKind::SweepAmplitude) {
    cell.amplitude = value;
    cell.period = 8.0;
  } else if (kind == PlanKind::SweepFrequency) {
    cell.amplitude = 20.0;
    cell.period = value;
  } else {
    throw ConfigError(std::string("plan kind ") + to_string(kind) + " is not a sweep");
  }
  RunConfig c = base;
  c.reference = cell;
  c.duration = cell.period * cell.cycles;
  c.analysis = AnalysisMode::Sweep7Period;
  return c;
}

void validate_plan(const ExperimentPlan& plan) {
  validate_config(plan.base);
  switch (plan.kind) {
    case PlanKind::SweepAmplitude:
    case PlanKind::SweepFrequency:
      if (plan.sweep_values.empty()) {
        throw ConfigError(std::string(to_string(plan.kind)) + " needs plan.sweep_values");
      }
      for (double v : plan.sweep_values) validate_config(sweep_cell_config(plan.base, plan.kind, v));
      [[fallthrough]];
    case PlanKind::Single:
    case PlanKind::Compare:
      if (plan.controllers.empty()) throw ConfigError("plan.controllers is empty");
      break;
    case PlanKind::Hysteresis:
      if (plan.protocols.empty()) throw ConfigError("hysteresis.protocol is empty");
      break;
  }
}

ExperimentPlan parse_plan(std::string_view text, const std::string& origin) {
  static const std::vector<Field> fields = plan_fields();
  ExperimentPlan plan = default_plan();
  ReferenceDraft draft;
  bool duration_given = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key.rfind("reference.", 0) == 0) {
        reference_key(draft, key, value);
        continue;
      }
      const auto it = std::find_if(fields.begin(), fields.end(),
                                   [&](const Field& f) { return key == f.key; });
      if (it == fields.end()) throw ConfigError("unknown key '" + key + "'");
      it->set(plan, value);
      duration_given = duration_given || key == "duration";
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }

  try {
    plan.base.reference = build_reference(draft);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!duration_given) {
    const double d = reference_duration(plan.base.reference);
    if (!std::isfinite(d)) {
      throw ConfigError(origin + ": a constant reference needs an explicit duration");
    }
    plan.base.duration = d;
  }
  validate_plan(plan);
  return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_plan(text.str(), path.string());
}

std::string format_plan(const ExperimentPlan& plan) {
  std::string out;
  for (const auto& f : plan_fields()) {
    out += std::string(f.key) + " = " + f.get(plan) + "\n";
    if (std::string(f.key) == "analysis") out += format_reference(plan.base.reference);
  }
  return out;
}

} // namespace pamctl
