#include <doctest.h>

#include <cmath>
#include <complex>

#include "arrival/deltakernel.hpp"
#include "arrival/errors.hpp"
#include "arrival/propagate.hpp"
#include "oracles/abel.hpp"

using namespace arrival;
using cd = std::complex<double>;

namespace {
const DeltaParams dp(0.1, 1.0);
const double sqrt_pi = std::sqrt(M_PI);
}  // namespace

TEST_CASE("parameters") {
  CHECK(dp.alpha() == doctest::Approx(0.05));
  CHECK(std::abs(dp.d() - cd(0.025, -0.025)) < 1e-17);
  CHECK_THROWS_AS(DeltaParams(0.0, 1.0), DomainError);
  CHECK(transmission_T(1.0, dp) == doctest::Approx(1.0 / 1.05));
  CHECK(transmission_T(-2.0, dp) == doctest::Approx(2.0 / 2.05));
}

TEST_CASE("kernel g solves the unit-drive renewal equation") {
  for (const DeltaParams& q : {dp, DeltaParams(4.0, 1.0)})
    for (double t : {0.3, 2.0, 9.0}) {
      const cd res = kernel_g(t, q) + q.d() / sqrt_pi * oracle::abel([&](double s) { return kernel_g(s, q); }, t) - 1.0;
      CHECK(std::abs(res) < 1e-12);
    }
  CHECK(std::abs(kernel_g(0.0, dp) - 1.0) < 1e-15);
}

TEST_CASE("monochromatic solution solves the renewal equation") {
  for (double p : {0.2, 1.0, 5.0})
    for (double t : {0.5, 4.0, 15.0}) {
      const cd drive = std::polar(1.0 / std::sqrt(2.0 * M_PI), -t * p * p / 2.0);
      const cd integral = oracle::abel([&](double s) { return f_p(p, s, dp); }, t, 4 + static_cast<int>(4 * p));
      const cd res = f_p(p, t, dp) + dp.d() / sqrt_pi * integral - drive;
      CHECK(std::abs(res) < 1e-6);
    }
}

TEST_CASE("remainder decays like t^{-3/2}") {
  for (double p : {0.5, 1.0}) {
    // Envelope over one oscillation period at t and 4t.
    auto envelope = [&](double t) {
      double m = 0.0;
      for (int k = 0; k < 200; ++k) m = std::max(m, std::abs(remainder_R(p, t + k * 4.0 * M_PI / (p * p) / 200, dp)));
      return m;
    };
    // Asymptotic once t >> 1 / alpha^2.
    const double ratio = envelope(64000.0) / envelope(256000.0);
    CHECK(ratio == doctest::Approx(8.0).epsilon(0.01));
  }
  CHECK(std::abs(remainder_R(1.0, 0.0, dp) - (1.0 - transmission_T(1.0, dp))) < 1e-12);
}

TEST_CASE("bracket stays bounded") {
  for (double p : {0.05, 0.3, 1.0, 3.0})
    for (double t = 0.0; t < 300.0; t += 0.71) CHECK(std::abs(transmission_T(p, dp) + remainder_R(p, t, dp)) <= 1.2);
}

TEST_CASE("superposition agrees with the renewal solve of the Gaussian wave") {
  Scenario s;
  const TimeGrid grid(25.0, 1e-3);
  const ComplexSeries f = solve_renewal(gaussian_free_wave(s, grid), dp.d());
  const MomentumState chi = gaussian_momentum_state(s.p0, s.x0, s.dp);
  for (double t : {10.0, 18.0, 25.0}) {
    const std::size_t i = static_cast<std::size_t>(std::lround(t / grid.dt));
    const cd v = f_superposition(chi, t, dp);
    CHECK(std::abs(v - f.values[i]) < 1e-6 * std::max(1e-3, std::abs(v)));
  }
}

TEST_CASE("beam intensity: small-t series and stationary limit") {
  const double r0 = 3.0;
  const BeamAsymptotes as = beam_asymptotes(1.0, r0, dp);
  CHECK(beam_intensity(0.0, 1.0, r0, dp) == doctest::Approx(dp.a * r0).epsilon(1e-14));
  const double t = 1e-6;
  const double series = as.omega_c0 + as.omega_c1 * std::sqrt(t) + as.omega_c2 * t;
  CHECK(std::fabs(beam_intensity(t, 1.0, r0, dp) - series) < 1e-11);
  CHECK(beam_intensity_dp(1e-4, 1.0, r0, dp) == doctest::Approx(as.domega_c32 * std::pow(1e-4, 1.5)).epsilon(1e-3));
  CHECK(beam_intensity(1e9, 1.0, r0, dp) == doctest::Approx(as.omega_inf).epsilon(1e-9));
  CHECK(beam_intensity_dp(1e12, 1.0, r0, dp) == doctest::Approx(as.domega_inf).epsilon(1e-3));
  CHECK(beam_asymptotes(1.0, 56.42, dp).omega_inf == doctest::Approx(5.12).epsilon(0.002));
}

TEST_CASE("beam derivative matches central differences") {
  for (double p0 : {0.6, 1.0, 2.0}) {
    double sup = 0.0, worst = 0.0;
    for (double t = 0.1; t <= 100.0; t *= 1.07) {
      const double h = 1e-5;
      const double fd = (beam_intensity(t, p0 + h, 1.0, dp) - beam_intensity(t, p0 - h, 1.0, dp)) / (2.0 * h);
      const double an = beam_intensity_dp(t, p0, 1.0, dp);
      sup = std::max(sup, std::fabs(an));
      worst = std::max(worst, std::fabs(an - fd));
    }
    CHECK(worst <= 1e-6 * sup);
  }
}

TEST_CASE("integrated beam intensity") {
  for (double t : {0.01, 3.0, 40.0}) {
    const double ref = oracle::gauss([](double s) { return beam_intensity(s * s, 1.0, 2.0, dp) * 2.0 * s; }, 0.0,
                                     std::sqrt(t), 64);
    CHECK(beam_integrated_intensity(t, 1.0, 2.0, dp) == doctest::Approx(ref).epsilon(1e-12));
  }
}
