#include <doctest.h>

#include <cmath>
#include <complex>

#include "arrival/deltakernel.hpp"
#include "arrival/errors.hpp"
#include "arrival/intensity.hpp"
#include "arrival/propagate.hpp"

using namespace arrival;

namespace {

ProfileOptions short_run(double t_max = 30.0) {
  ProfileOptions o;
  o.t_max = t_max;
  return o;
}

}  // namespace

TEST_CASE("delta finite profile reproduces a navg |f|^2 of an independent solve") {
  Scenario s;
  const IntensityProfile p = build_profile(s, short_run());
  const TimeGrid g(30.0, 1e-3);
  const ComplexSeries f = solve_renewal(gaussian_free_wave(s, g), DeltaParams(s.a, s.m).d());
  for (double t : {0.0, 4.0, 12.5, 20.0, 29.0}) {
    const std::size_t i = static_cast<std::size_t>(std::lround(t / g.dt));
    CHECK(p.omega(t) == doctest::Approx(s.a * s.navg * std::norm(f.values[i])).epsilon(1e-12));
  }
  // Superposition route at a few nodes.
  const TimeGrid coarse(20.0, 5.0);
  const auto sup = intensity_on_grid(s, coarse, DeltaRoute::superposition);
  for (std::size_t i = 1; i < coarse.size(); ++i)
    CHECK(sup[i] == doctest::Approx(p.omega(coarse.t(i))).epsilon(1e-5));
}

TEST_CASE("finite-width profile is navg gamma |h|^2") {
  Scenario s;
  s.eps = 0.5;
  const IntensityProfile p = build_profile(s, short_run());
  const TimeGrid g(30.0, 1e-3);
  const ComplexSeries h = solve_volterra(gaussian_overlap_h0(s, g), gaussian_kernel_g(s, g), s.gamma());
  for (double t : {3.0, 17.0, 26.0}) {
    const std::size_t i = static_cast<std::size_t>(std::lround(t / g.dt));
    CHECK(p.omega(t) == doctest::Approx(s.navg * s.gamma() * std::norm(h.values[i])).epsilon(1e-12));
  }
}

TEST_CASE("running integrals of a finite profile") {
  Scenario s;
  const IntensityProfile p = build_profile(s, short_run());
  for (double t : {2.0, 10.0, 21.3}) {
    const double h = 1e-3;
    CHECK((p.Omega(t + h) - p.Omega(t - h)) / (2.0 * h) == doctest::Approx(p.omega(t)).epsilon(1e-5));
  }
  // dOmega/dp0 against profiles rebuilt at p0 +- h.
  Scenario sp = s, sm = s;
  const double h = 1e-3;
  sp.p0 += h;
  sm.p0 -= h;
  ProfileOptions o = short_run();
  o.derivatives = false;
  const IntensityProfile pp = build_profile(sp, o), pm = build_profile(sm, o);
  for (double t : {8.0, 15.0, 25.0}) {
    const double fd = (pp.Omega(t) - pm.Omega(t)) / (2.0 * h);
    CHECK(p.dOmega(t) == doctest::Approx(fd).epsilon(1e-4));
    const double fdw = (pp.omega(t) - pm.omega(t)) / (2.0 * h);
    CHECK(std::fabs(p.domega(t) - fdw) <= 1e-4 * std::max(1e-3, std::fabs(fdw)) + 1e-7);
  }
  double prev = -1.0;
  for (double t = 0.0; t < 60.0; t += 0.5) {
    CHECK(p.dOmega2(t) >= prev);
    prev = p.dOmega2(t);
  }
}

TEST_CASE("finite profile tail and inversion") {
  Scenario s;
  s.navg = 10.0;
  const IntensityProfile p = build_profile(s, short_run(60.0));
  CHECK(p.Omega_inf() <= s.navg);
  CHECK(p.Omega_inf() >= p.Omega(p.t_end()));
  CHECK(p.Omega(1e6) <= p.Omega_inf());
  for (double u : {0.01, 0.2, 0.5 * p.Omega_inf(), 0.999 * p.Omega(p.t_end())}) {
    const double t = p.invert_Omega(u);
    CHECK(p.Omega(t) == doctest::Approx(u).epsilon(1e-12));
  }
  CHECK_THROWS_AS(p.invert_Omega(p.Omega_inf()), RangeError);
  CHECK_THROWS_AS(p.omega(-1.0), DomainError);
}

TEST_CASE("time-step halving moves the intensity maximum by < 0.5%") {
  Scenario s;
  ProfileOptions a = short_run(40.0), b = short_run(40.0);
  a.derivatives = b.derivatives = false;
  b.dt = 5e-4;
  const IntensityProfile pa = build_profile(s, a), pb = build_profile(s, b);
  double ma = 0.0, mb = 0.0;
  for (double t = 0.0; t <= 40.0; t += 0.01) {
    ma = std::max(ma, pa.omega(t));
    mb = std::max(mb, pb.omega(t));
  }
  CHECK(std::fabs(ma - mb) < 5e-3 * mb);
}

TEST_CASE("zero coupling gives zero intensity") {
  Scenario s;
  s.a = 0.0;
  const auto w = intensity_on_grid(s, TimeGrid(5.0, 0.01));
  for (double v : w) CHECK(v == 0.0);
}

TEST_CASE("beam profile agrees with direct evaluation") {
  const DeltaParams dp(0.1, 1.0);
  ProfileOptions o;
  o.beam_t_end = 500.0;
  const IntensityProfile p = build_beam_profile(1.0, 2.0, dp, o);
  for (double t : {1e-7, 0.013, 0.7, 5.0, 77.7, 499.0, 800.0}) {
    CHECK(p.omega(t) == doctest::Approx(beam_intensity(t, 1.0, 2.0, dp)).epsilon(1e-11));
    CHECK(p.domega(t) == doctest::Approx(beam_intensity_dp(t, 1.0, 2.0, dp)).epsilon(1e-9));
    if (t <= 499.0) CHECK(p.Omega(t) == doctest::Approx(beam_integrated_intensity(t, 1.0, 2.0, dp)).epsilon(1e-12));
  }
  const BeamAsymptotes as = beam_asymptotes(1.0, 2.0, dp);
  // Sub-linear remainder of Omega.
  CHECK(std::fabs(p.Omega(1e5) - as.omega_inf * 1e5) < 0.1);
  CHECK(std::isinf(p.Omega_inf()));
  const double u = 100.0;
  CHECK(p.Omega(p.invert_Omega(u)) == doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("beam density rescaling") {
  const DeltaParams dp(0.1, 1.0);
  ProfileOptions o;
  o.beam_t_end = 200.0;
  const IntensityProfile one = build_beam_profile(1.0, 1.0, dp, o);
  const IntensityProfile three = build_beam_profile(1.0, 3.0, dp, o);
  const IntensityProfile scaled = one.scaled(3.0);
  for (double t : {0.5, 50.0, 150.0, 1e4}) {
    CHECK(scaled.omega(t) == doctest::Approx(three.omega(t)).epsilon(1e-13));
    CHECK(scaled.Omega(t) == doctest::Approx(three.Omega(t)).epsilon(1e-13));
    CHECK(scaled.dOmega2(t) == doctest::Approx(three.dOmega2(t)).epsilon(1e-13));
  }
}

TEST_CASE("stationary synthetic profile") {
  const IntensityProfile p = make_stationary_profile(0.4, 0.1);
  CHECK(p.omega(123.0) == 0.4);
  CHECK(p.Omega(10.0) == doctest::Approx(4.0));
  CHECK(p.dOmega(10.0) == doctest::Approx(1.0));
  CHECK(p.dOmega2(10.0) == doctest::Approx(10.0 * 0.01 / 0.4));
  CHECK(p.invert_Omega(2.0) == doctest::Approx(5.0));
}
