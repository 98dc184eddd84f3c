#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "pamctl/error.hpp"
#include "pamctl/metrics.hpp"

using namespace pamctl;

namespace {

TimeSeries timed(double seconds, double dt = 0.01) {
  TimeSeries s;
  s.dt_nominal = dt;
  const auto n = static_cast<int>(std::lround(seconds / dt));
  for (int k = 0; k <= n; ++k) {
    Sample x;
    x.t = k * dt;
    x.error = std::sin(x.t);
    x.theta = 2.0 * x.t;
    s.samples.push_back(x);
  }
  return s;
}

} // namespace

TEST_CASE("compute_metrics hand values") {
  const std::vector<double> a{1.0, -1.0, 1.0, -1.0};
  const ErrorMetrics m = compute_metrics(a);
  CHECK(m.mae == 1.0);
  CHECK(m.rmse == 1.0);
  CHECK(m.e_max == 1.0);
  CHECK(m.e_min == -1.0);
  CHECK(m.var == 1.0);

  const std::vector<double> z(7, 0.0);
  const ErrorMetrics mz = compute_metrics(z);
  CHECK(mz.mae == 0.0);
  CHECK(mz.rmse == 0.0);
  CHECK(mz.var == 0.0);

  const std::vector<double> b{3.0, -1.0, 2.0, 0.0};
  const ErrorMetrics mb = compute_metrics(b);
  CHECK(mb.mae == doctest::Approx(1.5));
  CHECK(mb.rmse == doctest::Approx(std::sqrt(3.5)));
  CHECK(mb.rmse == doctest::Approx(1.8708).epsilon(1e-4));
  CHECK(mb.e_max == 3.0);
  CHECK(mb.e_min == -1.0);
  // mean 1, mean square 3.5
  CHECK(mb.var == doctest::Approx(2.5));
}

TEST_CASE("compute_metrics rejects empty input") {
  CHECK_THROWS_AS(compute_metrics(std::vector<double>{}), AnalysisError);
}

TEST_CASE("metric invariants, scale equivariance and permutation invariance") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.3, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> e(1 + trial * 7);
    for (double& x : e) x = g(rng);
    const ErrorMetrics m = compute_metrics(e);
    CHECK(m.rmse >= m.mae);
    CHECK(m.mae >= 0.0);
    CHECK(m.e_max >= m.e_min);
    CHECK(m.var >= 0.0);
    double mean = 0.0;
    for (double x : e) mean += x;
    mean /= static_cast<double>(e.size());
    CHECK(std::abs(m.rmse * m.rmse - (mean * mean + m.var)) <= 1e-9 * m.rmse * m.rmse);

    std::vector<double> scaled = e;
    for (double& x : scaled) x *= 2.5;
    const ErrorMetrics s = compute_metrics(scaled);
    CHECK(s.mae == doctest::Approx(2.5 * m.mae));
    CHECK(s.rmse == doctest::Approx(2.5 * m.rmse));
    CHECK(s.e_max == doctest::Approx(2.5 * m.e_max));
    CHECK(s.e_min == doctest::Approx(2.5 * m.e_min));
    CHECK(s.var == doctest::Approx(6.25 * m.var));

    std::vector<double> shuffled = e;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const ErrorMetrics p = compute_metrics(shuffled);
    CHECK(p.mae == doctest::Approx(m.mae).epsilon(1e-12));
    CHECK(p.rmse == doctest::Approx(m.rmse).epsilon(1e-12));
    CHECK(p.var == doctest::Approx(m.var).epsilon(1e-9));
    CHECK(p.e_max == m.e_max);
    CHECK(p.e_min == m.e_min);
  }
}

TEST_CASE("average_metrics is the field-wise mean") {
  const std::vector<ErrorMetrics> runs{{1.0, 2.0, 3.0, -1.0, 4.0}, {3.0, 4.0, 5.0, -3.0, 6.0}};
  const ErrorMetrics m = average_metrics(runs);
  CHECK(m.mae == 2.0);
  CHECK(m.rmse == 3.0);
  CHECK(m.e_max == 4.0);
  CHECK(m.e_min == -2.0);
  CHECK(m.var == 5.0);
}

TEST_CASE("analysis windows") {
  const TimeSeries demo = timed(36.0);
  const TimeSeries mid = analysis_window(demo, WindowProtocol::Demo3Cycle, 12.0);
  CHECK(mid.samples.front().t == doctest::Approx(12.0));
  CHECK(mid.samples.back().t < 24.0);
  CHECK(mid.samples.back().t > 23.9);

  const TimeSeries sweep = timed(56.0);
  const TimeSeries central = analysis_window(sweep, WindowProtocol::Sweep7Period, 8.0);
  CHECK(central.samples.front().t == doctest::Approx(8.0));
  CHECK(central.samples.back().t < 48.0);
  CHECK(central.samples.back().t > 47.9);

  CHECK_THROWS_AS(analysis_window(timed(24.0), WindowProtocol::Demo3Cycle, 12.0), AnalysisError);
  CHECK_THROWS_AS(analysis_window(timed(40.0), WindowProtocol::Sweep7Period, 8.0), AnalysisError);
  CHECK_THROWS_AS(analysis_window(timed(55.9), WindowProtocol::Sweep7Period, 8.0), AnalysisError);
}

TEST_CASE("compute_metrics of a series reads the stored error") {
  const TimeSeries s = timed(2.0);
  std::vector<double> e;
  for (const auto& x : s.samples) e.push_back(x.error);
  const ErrorMetrics a = compute_metrics(s);
  const ErrorMetrics b = compute_metrics(e);
  CHECK(a.mae == b.mae);
  CHECK(a.rmse == b.rmse);
}

TEST_CASE("aggregate_runs: single run, symmetric pair, mismatched timestamps") {
  const TimeSeries s = timed(1.0);
  const std::vector<TimeSeries> one{s};
  const auto agg = aggregate_runs(one, [](const Sample& x) { return x.error; });
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(agg.mean[i] == s.samples[i].error);
    CHECK(agg.lower[i] == s.samples[i].error);
    CHECK(agg.upper[i] == s.samples[i].error);
  }

  TimeSeries neg = s;
  for (auto& x : neg.samples) x.error = -x.error;
  const std::vector<TimeSeries> pair{s, neg};
  const auto sym = aggregate_runs(pair, [](const Sample& x) { return x.error; });
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(sym.mean[i] == doctest::Approx(0.0));
    CHECK(sym.lower[i] == -std::abs(s.samples[i].error));
    CHECK(sym.upper[i] == std::abs(s.samples[i].error));
  }

  TimeSeries shifted = s;
  shifted.samples[3].t += 1e-4;
  const std::vector<TimeSeries> bad{s, shifted};
  CHECK_THROWS_AS(aggregate_runs(bad, [](const Sample& x) { return x.error; }), AnalysisError);
  CHECK_THROWS_AS(aggregate_runs(std::vector<TimeSeries>{}, [](const Sample& x) { return x.error; }),
                  AnalysisError);
}

TEST_CASE("resample_nominal puts jittered samples back on the grid") {
  TimeSeries s;
  s.dt_nominal = 0.01;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.002, 0.002);
  for (int k = 0; k < 200; ++k) {
    Sample x;
    x.t = k * 0.01 + (k > 0 && k < 199 ? u(rng) : 0.0);
    x.theta = 3.0 * x.t + 1.0;
    x.theta_ref = 4.0 * x.t;
    x.error = x.theta_ref - x.theta;
    s.samples.push_back(x);
  }
  const TimeSeries r = resample_nominal(s);
  REQUIRE(r.size() == s.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    CHECK(r.samples[k].t == doctest::Approx(k * 0.01));
    CHECK(r.samples[k].theta == doctest::Approx(3.0 * r.samples[k].t + 1.0));
    CHECK(r.samples[k].error == r.samples[k].theta_ref - r.samples[k].theta);
    CHECK(r.samples[k].error == doctest::Approx(r.samples[k].t - 1.0));
  }
}
