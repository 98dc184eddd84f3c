#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "pamctl/error.hpp"
#include "pamctl/signal.hpp"

using namespace pamctl;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDt = 1.0 / 500.0;

double analytic_rate(double t) { return 20.0 * (2.0 * kPi / 8.0) * std::cos(2.0 * kPi * t / 8.0); }

// RMS deviation of the rate from the analytic derivative after 0.5 s,
// relative to the derivative's amplitude. The reference is sampled on the
// nominal grid while the differentiator sees the jittered timestamps.
double relative_rate_rms(double jitter, double tau, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DiffState st;
  st.tau_filter = tau;
  double sum = 0.0;
  int n = 0;
  for (int k = 0; k <= 8 * 500; ++k) {
    const double nominal = k * kDt;
    const double t = nominal + (k > 0 ? u(rng) * jitter * kDt / 2.0 : 0.0);
    const double value = 30.0 + 20.0 * std::sin(2.0 * kPi * nominal / 8.0);
    const DiffResult r = pseudo_diff_step(st, value, t);
    st = r.state;
    if (nominal > 0.5) {
      const double d = r.rate - analytic_rate(nominal);
      sum += d * d;
      ++n;
    }
  }
  return std::sqrt(sum / n) / (20.0 * 2.0 * kPi / 8.0);
}

} // namespace

TEST_CASE("sinusoid hand values") {
  const Sinusoid s{30.0, 20.0, 8.0, 7, 0.0};
  CHECK(gen_reference(s, 0.0) == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(gen_reference(s, 2.0) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(gen_reference(s, 6.0) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("sinusoid is periodic") {
  const Sinusoid s{30.0, 20.0, 8.0, 7, 0.3};
  for (double t = 0.0; t < 40.0; t += 0.37) {
    CHECK(std::abs(gen_reference(s, t) - gen_reference(s, t + 8.0)) < 1e-9);
  }
}

TEST_CASE("references hold their final value past the end") {
  const Sinusoid s{30.0, 20.0, 8.0, 2, kPi / 2.0};
  CHECK(reference_duration(s) == doctest::Approx(16.0));
  CHECK(gen_reference(s, 100.0) == doctest::Approx(gen_reference(s, 16.0)));

  const Compound c{{Ramp{0.0, 40.0, 4.0}, Hold{40.0, 2.0}}, 1};
  CHECK(reference_duration(c) == doctest::Approx(6.0));
  CHECK(gen_reference(c, 2.0) == doctest::Approx(20.0));
  CHECK(gen_reference(c, 5.0) == doctest::Approx(40.0));
  CHECK(gen_reference(c, 50.0) == doctest::Approx(40.0));

  CHECK(std::isinf(reference_duration(Constant{12.0})));
  CHECK(gen_reference(Constant{12.0}, 1e6) == 12.0);
}

TEST_CASE("compound repeats its cycle") {
  const Compound c{{Ramp{10.0, 30.0, 2.0}, Hold{30.0, 1.0}, Ramp{30.0, 10.0, 2.0}}, 3};
  CHECK(compound_cycle_length(c) == doctest::Approx(5.0));
  CHECK(reference_duration(c) == doctest::Approx(15.0));
  for (double t = 0.0; t < 5.0; t += 0.13) {
    CHECK(gen_reference(c, t) == doctest::Approx(gen_reference(c, t + 5.0)));
    CHECK(gen_reference(c, t) == doctest::Approx(gen_reference(c, t + 10.0)));
  }
}

TEST_CASE("demo references stay inside the working range and repeat three times") {
  for (const Compound& c : {demo_mixed_sinusoids(), demo_ramp_hold(), demo_compound()}) {
    CHECK(c.repeat == 3);
    CHECK_NOTHROW(validate_reference(c, 60.0));
    const auto [lo, hi] = reference_bounds(c);
    CHECK(lo >= 0.0);
    CHECK(hi <= 60.0);
    const double len = compound_cycle_length(c);
    for (double t = 0.0; t < 3.0 * len; t += 0.01) {
      const double v = gen_reference(c, t);
      CHECK(v >= lo - 1e-9);
      CHECK(v <= hi + 1e-9);
    }
  }
}

TEST_CASE("validate_reference enforces range and waveform shape") {
  CHECK_THROWS_AS(validate_reference(Sinusoid{10.0, 20.0, 8.0, 7, 0.0}, 60.0), ConfigError);
  CHECK_THROWS_AS(validate_reference(Sinusoid{50.0, 20.0, 8.0, 7, 0.0}, 60.0), ConfigError);
  CHECK_THROWS_AS(validate_reference(Sinusoid{30.0, 20.0, 0.0, 7, 0.0}, 60.0), ConfigError);
  CHECK_NOTHROW(validate_reference(Sinusoid{30.0, 30.0, 8.0, 7, 0.0}, 60.0));
  CHECK_THROWS_AS(validate_reference(TriangularPressure{0.0, {100.0, 200.0}, 10.0}, 60.0),
                  ConfigError);
  CHECK_THROWS_AS(validate_reference(TriangularPressure{0.0, {100.0, 0.0}, 0.0}, 60.0),
                  ConfigError);
  CHECK_NOTHROW(validate_reference(TriangularPressure{0.0, {400.0, 0.0, 300.0}, 10.0}, 60.0));
}

TEST_CASE("triangular pressure command passes through its vertices") {
  const TriangularPressure tp{0.0, {400.0, 0.0, 320.0, 0.0}, 10.0};
  const auto times = triangular_vertex_times(tp);
  REQUIRE(times.size() == 5);
  CHECK(times[0] == 0.0);
  CHECK(times[1] == doctest::Approx(40.0));
  CHECK(times[2] == doctest::Approx(80.0));
  CHECK(times[3] == doctest::Approx(112.0));
  CHECK(times[4] == doctest::Approx(144.0));
  CHECK(gen_reference(tp, 20.0) == doctest::Approx(200.0));
  CHECK(gen_reference(tp, 40.0) == doctest::Approx(400.0));
  CHECK(gen_reference(tp, 96.0) == doctest::Approx(160.0));
  CHECK(gen_reference(tp, 1000.0) == doctest::Approx(0.0));
}

TEST_CASE("pseudo_diff_step: first call seeds, constant input gives zero") {
  DiffState st;
  DiffResult r = pseudo_diff_step(st, 7.0, 0.0);
  CHECK(r.rate == 0.0);
  CHECK(r.state.seeded);
  for (int k = 1; k < 100; ++k) {
    r = pseudo_diff_step(r.state, 7.0, k * kDt);
    CHECK(r.rate == 0.0);
  }
}

TEST_CASE("pseudo_diff_step without filter is the raw backward difference") {
  DiffState st;
  st.tau_filter = 0.0;
  DiffResult r = pseudo_diff_step(st, 0.0, 0.0);
  r = pseudo_diff_step(r.state, 1.0, 0.002);
  CHECK(r.rate == doctest::Approx(500.0).epsilon(1e-12));
}

TEST_CASE("pseudo_diff_step filter blend") {
  DiffState st;
  st.tau_filter = 0.02;
  DiffResult r = pseudo_diff_step(st, 0.0, 0.0);
  r = pseudo_diff_step(r.state, 1.0, 0.002);
  const double alpha = 0.002 / (0.02 + 0.002);
  CHECK(r.rate == doctest::Approx(alpha * 500.0).epsilon(1e-12));
  const double prev = r.rate;
  r = pseudo_diff_step(r.state, 1.0, 0.004);
  CHECK(r.rate == doctest::Approx((1.0 - alpha) * prev).epsilon(1e-12));
}

TEST_CASE("pseudo_diff_step rejects non-increasing time") {
  DiffState st;
  DiffResult r = pseudo_diff_step(st, 0.0, 1.0);
  CHECK_THROWS_AS(pseudo_diff_step(r.state, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pseudo_diff_step(r.state, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("pseudo_diff_step is linear in its input") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01(0.0, 1.0);
  DiffState a, b;
  double t = 0.0;
  for (int k = 0; k < 500; ++k) {
    const double x = n01(rng);
    const DiffResult ra = pseudo_diff_step(a, x, t);
    const DiffResult rb = pseudo_diff_step(b, -3.5 * x, t);
    CHECK(rb.rate == doctest::Approx(-3.5 * ra.rate).epsilon(1e-9));
    a = ra.state;
    b = rb.state;
    t += kDt * (1.0 + 0.1 * n01(rng) * 0.1);
  }
}

TEST_CASE("filtered rate tracks the 8 s sinusoid within 2 percent RMS") {
  CHECK(relative_rate_rms(0.0, 0.02, 1) <= 0.02);
}

TEST_CASE("filter keeps jittered rate within 5 percent, raw difference does not") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    CHECK(relative_rate_rms(0.4, 0.02, seed) <= 0.05);
    CHECK(relative_rate_rms(0.4, 0.0, seed) > 0.05);
  }
}

TEST_CASE("second pseudo-derivative: constant and ramp inputs") {
  Diff2State st = make_diff2_state(0.0);
  for (int k = 0; k < 10; ++k) {
    const Diff2Result r = pseudo_diff2_step(st, 4.0, k * kDt);
    CHECK(r.rate2 == 0.0);
    st = r.state;
  }
  st = make_diff2_state(0.0);
  for (int k = 0; k < 10; ++k) {
    const Diff2Result r = pseudo_diff2_step(st, 3.0 * k * kDt, k * kDt);
    if (k >= 2) {
      CHECK(r.rate == doctest::Approx(3.0));
      CHECK(std::abs(r.rate2) < 1e-6);
    }
    st = r.state;
  }
}

TEST_CASE("second pseudo-derivative sign follows -sin after warm-up") {
  Diff2State st = make_diff2_state(0.02);
  int agree = 0, total = 0;
  for (int k = 0; k <= 16 * 500; ++k) {
    const double t = k * kDt;
    const double s = std::sin(2.0 * kPi * t / 8.0);
    const Diff2Result r = pseudo_diff2_step(st, 30.0 + 20.0 * s, t);
    st = r.state;
    if (t > 0.5 && std::abs(s) > 1e-9) {
      ++total;
      if ((r.rate2 < 0.0) == (s > 0.0)) ++agree;
    }
  }
  CHECK(static_cast<double>(agree) / total >= 0.95);
}
