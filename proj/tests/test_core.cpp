#include "doctest.h"

#include <cmath>
#include <random>

#include "pamctl/csv.hpp"
#include "pamctl/error.hpp"
#include "pamctl/run_config.hpp"
#include "pamctl/series.hpp"

using namespace pamctl;

namespace {

TimeSeries ramp_series(double seconds, double dt = 1.0 / 500.0) {
  TimeSeries s;
  s.dt_nominal = dt;
  const auto n = static_cast<int>(std::lround(seconds / dt)) + 1;
  for (int k = 0; k < n; ++k) {
    Sample x;
    x.t = k * dt;
    x.theta_ref = 0.5 * x.t;
    x.theta = 0.4 * x.t;
    x.error = x.theta_ref - x.theta;
    s.samples.push_back(x);
  }
  return s;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("series_window keeps t0 <= t < t1 in order") {
  const TimeSeries s = ramp_series(10.0);
  const TimeSeries w = series_window(s, 2.0, 4.0);
  REQUIRE_FALSE(w.empty());
  CHECK(w.samples.front().t >= 2.0);
  CHECK(w.samples.back().t < 4.0);
  CHECK(w.size() == 1000);
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w.samples[i].t > w.samples[i - 1].t);
}

TEST_CASE("series_window covering everything is the identity") {
  const TimeSeries s = ramp_series(10.0);
  const TimeSeries w = series_window(s, s.samples.front().t, s.samples.back().t + 1e-6);
  REQUIRE(w.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(w.samples[i].t == s.samples[i].t);
}

TEST_CASE("series_window at the tail returns only the final samples") {
  const TimeSeries s = ramp_series(10.0);
  const TimeSeries w = series_window(s, 9.999, 10.2);
  // timestamps are k/500; only t = 10.0 satisfies t >= 9.999
  REQUIRE(w.size() == 1);
  CHECK(w.samples.front().t == doctest::Approx(10.0));
}

TEST_CASE("series_window rejects inverted or mandatory-empty windows") {
  const TimeSeries s = ramp_series(1.0);
  CHECK_THROWS_AS(series_window(s, 2.0, 1.0), AnalysisError);
  CHECK_THROWS_AS(series_window(s, 5.0, 6.0, true), AnalysisError);
  CHECK(series_window(s, 5.0, 6.0).empty());
}

TEST_CASE("max_step_deviation is zero on a uniform grid") {
  CHECK(max_step_deviation(ramp_series(2.0)) < 1e-12);
  TimeSeries one;
  one.samples.resize(1);
  CHECK(max_step_deviation(one) == 0.0);
}

TEST_CASE("default config validates") {
  const RunConfig c = default_run_config();
  CHECK_NOTHROW(validate_config(c));
  CHECK(&validate_config(c) == &c);
}

TEST_CASE("validate_config names the violated field") {
  RunConfig c = default_run_config();
  c.duration = 0.0;
  try {
    validate_config(c);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(contains(e.what(), "duration must be positive"));
  }

  c = default_run_config();
  c.adaptive.mu = -0.1;
  try {
    validate_config(c);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(contains(e.what(), "μ must be nonnegative"));
  }

  c = default_run_config();
  c.repeats = 0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c = default_run_config();
  c.jitter_fraction = 0.5;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c = default_run_config();
  c.dt_nominal = -1.0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
}

TEST_CASE("validate_config keeps the baseline gain and the outer P gain tied") {
  RunConfig c = default_run_config();
  c.adaptive.kp0 = 0.1;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c = default_run_config();
  c.adaptive.k_ff = 0.02;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
}

TEST_CASE("validate_config rejects mixed loop unit tags") {
  RunConfig c = default_run_config();
  c.cascade.outer_a.role = LoopRole::Inner;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c = default_run_config();
  c.cascade.inner.role = LoopRole::Outer;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
}

TEST_CASE("jitter_bound scales with the jitter fraction") {
  RunConfig c = default_run_config();
  CHECK(jitter_bound(c) == 0.0);
  c.jitter_fraction = 0.2;
  CHECK(jitter_bound(c) == doctest::Approx(0.2 * c.dt_nominal));
}

TEST_CASE("CSV round trip reproduces every field to 9 significant digits") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  TimeSeries s;
  for (int k = 0; k < 200; ++k) {
    Sample x;
    x.t = k * s.dt_nominal;
    x.theta_ref = u(rng);
    x.theta_ref_d1 = u(rng);
    x.theta_ref_d2 = u(rng) * 1e3;
    x.theta = u(rng);
    x.error = x.theta_ref - x.theta;
    x.p_a = u(rng);
    x.p_b = u(rng);
    x.pd_a = u(rng);
    x.pd_b = u(rng);
    x.u_a = u(rng) * 1e-3;
    x.u_b = u(rng) * 1e-3;
    x.kp_a = 0.08 * (1.0 + std::abs(u(rng)) * 1e-3);
    x.kp_b = 0.08;
    s.samples.push_back(x);
  }
  const TimeSeries back = series_from_csv(series_to_csv(s, 0.08), 0.08);
  REQUIRE(back.size() == s.size());
  const auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a));
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Sample& a = s.samples[i];
    const Sample& b = back.samples[i];
    CHECK(close(a.t, b.t));
    CHECK(close(a.theta_ref, b.theta_ref));
    CHECK(close(a.theta_ref_d1, b.theta_ref_d1));
    CHECK(close(a.theta_ref_d2, b.theta_ref_d2));
    CHECK(close(a.theta, b.theta));
    CHECK(close(a.error, b.error));
    CHECK(close(a.p_a, b.p_a));
    CHECK(close(a.p_b, b.p_b));
    CHECK(close(a.pd_a, b.pd_a));
    CHECK(close(a.pd_b, b.pd_b));
    CHECK(close(a.u_a, b.u_a));
    CHECK(close(a.u_b, b.u_b));
    CHECK(close(a.kp_a, b.kp_a));
    CHECK(close(a.kp_b, b.kp_b));
  }
  CHECK(back.dt_nominal == doctest::Approx(s.dt_nominal));
}

TEST_CASE("CSV header is the documented column list") {
  const std::string csv = series_to_csv(ramp_series(0.01), 0.08);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "t,theta_ref,theta_ref_d1,theta_ref_d2,theta,error,p_a,p_b,pd_a,pd_b,u_a,u_b,"
        "kp_ratio_a,kp_ratio_b");
}

TEST_CASE("CSV reader rejects malformed input") {
  CHECK_THROWS_AS(parse_csv(""), AnalysisError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), AnalysisError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,x\n"), AnalysisError);
  CHECK_THROWS_AS(series_from_csv("t,theta\n0,1\n", 0.08), AnalysisError);
  const CsvTable t = parse_csv("t, p ,angle\r\n0,1,2\r\n1,3,4\r\n");
  CHECK(t.has_column("p"));
  CHECK(t.column("angle") == std::vector<double>{2.0, 4.0});
  CHECK_THROWS_AS(t.column("missing"), AnalysisError);
}

TEST_CASE("format_number uses nine significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-1234567.891) == "-1234567.89");
}
