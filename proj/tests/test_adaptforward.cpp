#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "pamctl/adaptforward.hpp"
#include "pamctl/error.hpp"
#include "pamctl/signal.hpp"

using namespace pamctl;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDt = 1.0 / 500.0;

struct GainTrace {
  std::vector<double> t;
  std::vector<double> ratio;
};

// Compensator driven by the differentiated 30 +- 20 deg sinusoid.
GainTrace sinusoid_gain_trace(double period, int cycles) {
  const AdaptiveParams p;
  const Sinusoid ref{30.0, 20.0, period, cycles, 0.0};
  Diff2State diff = make_diff2_state(0.02);
  CompensatorState st{p.kp0};
  GainTrace tr;
  for (int k = 0; k * kDt <= period * cycles; ++k) {
    const double t = k * kDt;
    const double v = gen_reference(ref, t);
    const Diff2Result d = pseudo_diff2_step(diff, v, t);
    diff = d.state;
    const CompensatorOutput out = compensator_step(st, v, d.rate, d.rate2, p);
    st = out.state;
    tr.t.push_back(t);
    tr.ratio.push_back(out.kp_live / p.kp0);
  }
  return tr;
}

} // namespace

TEST_CASE("feedforward_delta is the proportional law") {
  CHECK(feedforward_delta(10.0, 0.01) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(feedforward_delta(0.0, 0.01) == 0.0);
  for (double r : {-7.0, 0.3, 55.0}) {
    CHECK(feedforward_delta(2.0 * r, 0.01) == doctest::Approx(2.0 * feedforward_delta(r, 0.01)));
  }
}

TEST_CASE("direction_changer hand values") {
  CHECK(direction_changer(5.0, 3.0, 0.6, 0.5) == doctest::Approx(-1.6).epsilon(1e-12));
  CHECK(direction_changer(-5.0, -3.0, 0.6, 0.5) == doctest::Approx(-1.6).epsilon(1e-12));
  for (double mu : {0.0, 0.6, 3.0}) {
    CHECK(direction_changer(5.0, -3.0, mu, 0.5) == 1.0);
    CHECK(direction_changer(-5.0, 3.0, mu, 0.5) == 1.0);
  }
  CHECK(direction_changer(0.0, 3.0, 0.6, 0.0) == 0.0);
  CHECK(direction_changer(0.4, 3.0, 0.6, 0.5) == 0.0);
  CHECK(direction_changer(-0.5, 3.0, 0.6, 0.5) == 0.0);
  CHECK(direction_changer(5.0, 0.0, 0.6, 0.5) == 0.0);
}

TEST_CASE("gain_increment hand values with the default coefficients") {
  const AdaptiveParams p;
  CHECK(gain_increment(30.0, 6.0, -3.2e4, p) == doctest::Approx(0.075).epsilon(1e-12));
  CHECK(gain_increment(30.0, 6.0, 5.0e4, p) == doctest::Approx(-0.192).epsilon(1e-12));
  CHECK(gain_increment(30.0, 6.0, 0.0, p) == 0.0);
}

TEST_CASE("gain_increment agrees with the restated law") {
  const AdaptiveParams p;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> th(0.0, 60.0), v(-80.0, 80.0), a(-1e5, 1e5);
  for (int i = 0; i < 20000; ++i) {
    const double x = th(rng), r = v(rng), acc = a(rng);
    const double expect = oracle::gain_law(x, r, acc, p.m1_star, p.m2_star, p.b1, p.b2, p.c1,
                                           p.c2, p.theta_cap, p.mu, p.velocity_deadband);
    CHECK(gain_increment(x, r, acc, p) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("gain_increment rejects references outside the working range") {
  const AdaptiveParams p;
  CHECK_THROWS_AS(gain_increment(-0.1, 1.0, 1.0, p), std::invalid_argument);
  CHECK_THROWS_AS(gain_increment(60.1, 1.0, 1.0, p), std::invalid_argument);
  CHECK_NOTHROW(gain_increment(0.0, 1.0, 1.0, p));
  CHECK_NOTHROW(gain_increment(60.0, 1.0, 1.0, p));
}

TEST_CASE("gain_increment vanishes at the range boundaries of each branch") {
  const AdaptiveParams p;
  CHECK(gain_increment(0.0, 6.0, -1e4, p) == 0.0);
  CHECK(gain_increment(p.theta_cap, 6.0, 1e4, p) == 0.0);
  CHECK(std::abs(gain_increment(1e-9, 6.0, -1e4, p)) < 1e-10);
}

TEST_CASE("update_gain floor and identity") {
  CHECK(update_gain({0.08}, 0.075, 0.08).kp_current == doctest::Approx(0.155));
  CHECK(update_gain({0.08}, -0.01, 0.08).kp_current == 0.08);
  CHECK(update_gain({0.123}, 0.0, 0.08).kp_current == 0.123);
}

TEST_CASE("compensator_step on a stationary reference") {
  const AdaptiveParams p;
  const CompensatorOutput out = compensator_step({0.1}, 30.0, 0.0, 0.0, p);
  CHECK(out.dp_ff == 0.0);
  CHECK(out.kp_live == 0.1);
  CHECK(out.state.kp_current == 0.1);
}

TEST_CASE("validate_adaptive constraints") {
  AdaptiveParams p;
  CHECK_NOTHROW(validate_adaptive(p));
  p.mu = -0.1;
  CHECK_THROWS_AS(validate_adaptive(p), ConfigError);
  p = AdaptiveParams{};
  p.b1 = 0.0;
  CHECK_THROWS_AS(validate_adaptive(p), ConfigError);
  p = AdaptiveParams{};
  p.c2 = -1.0;
  CHECK_THROWS_AS(validate_adaptive(p), ConfigError);
  p = AdaptiveParams{};
  p.m1_star = -1.0;
  CHECK_THROWS_AS(validate_adaptive(p), ConfigError);
  p = AdaptiveParams{};
  p.velocity_deadband = -1.0;
  CHECK_THROWS_AS(validate_adaptive(p), ConfigError);
}

TEST_CASE("floor, sign rule and bound on random inputs") {
  const AdaptiveParams p;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> th(0.0, 60.0), v(-200.0, 200.0), a(-2e5, 2e5),
      jump(-0.5, 0.5);
  CompensatorState st{p.kp0};
  const double bound1 = p.m1_star * p.theta_cap * (1.0 + p.mu) / p.b1;
  const double bound2 = p.m2_star * p.theta_cap * (1.0 + p.mu) / p.b2;
  for (int i = 0; i < 100000; ++i) {
    const double x = th(rng), r = v(rng), acc = a(rng);
    const double d = gain_increment(x, r, acc, p);
    if (std::abs(r) > p.velocity_deadband) {
      if (r * acc < 0.0) CHECK(d >= 0.0);
      if (r * acc > 0.0) CHECK(d <= 0.0);
    }
    CHECK(std::abs(d) <= (acc < 0.0 ? bound1 : bound2));
    st = update_gain(st, d + jump(rng), p.kp0);
    CHECK(st.kp_current >= p.kp0);
  }
}

TEST_CASE("one turning point: gain rises while decelerating and returns to the floor") {
  const AdaptiveParams p;
  // 8 s sinusoid from t = 0.5 s to 3.5 s passes the maximum at 2 s.
  const Sinusoid ref{30.0, 20.0, 8.0, 1, 0.0};
  Diff2State diff = make_diff2_state(0.02);
  CompensatorState st{p.kp0};
  double peak = p.kp0, t_peak = 0.0;
  for (int k = 0; k * kDt <= 3.5; ++k) {
    const double t = k * kDt;
    const double v = gen_reference(ref, t);
    const Diff2Result d = pseudo_diff2_step(diff, v, t);
    diff = d.state;
    const CompensatorOutput out = compensator_step(st, v, d.rate, d.rate2, p);
    st = out.state;
    if (out.kp_live > peak) {
      peak = out.kp_live;
      t_peak = t;
    }
  }
  CHECK(peak > p.kp0);
  CHECK(t_peak < 2.0 + 0.5);
  CHECK(t_peak > 2.0 - 0.5);
  CHECK(st.kp_current == p.kp0);
}

TEST_CASE("gain peaks sit within half a second of reference extrema") {
  const GainTrace tr = sinusoid_gain_trace(8.0, 5);
  // extrema at 2 + 4k s; every 4 s window around one holds its own peak
  for (int e = 0; e < 10; ++e) {
    const double te = 2.0 + 4.0 * e;
    double best = 0.0, t_best = -1.0;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
      if (tr.t[i] >= te - 2.0 && tr.t[i] < te + 2.0 && tr.ratio[i] > best) {
        best = tr.ratio[i];
        t_best = tr.t[i];
      }
    }
    CHECK(best > 1.0);
    CHECK(std::abs(t_best - te) <= 0.5);
  }
}

TEST_CASE("shorter periods give strictly larger gain peaks") {
  double prev = 0.0;
  for (double period : {10.0, 8.0, 6.0, 4.0}) {
    const GainTrace tr = sinusoid_gain_trace(period, 3);
    double peak = 0.0;
    for (double r : tr.ratio) peak = std::max(peak, r);
    CHECK(peak > prev);
    prev = peak;
  }
}
