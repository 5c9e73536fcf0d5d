#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "arrival/deltakernel.hpp"
#include "arrival/errors.hpp"
#include "arrival/intensity.hpp"
#include "arrival/process.hpp"
#include "arrival/rng.hpp"

using namespace arrival;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
const DeltaParams ref_dp(0.1, 1.0);
}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(PhiloxStream::philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(PhiloxStream::philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(PhiloxStream::philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniform stream lies in (0,1) and is reproducible") {
  PhiloxStream a(42, 7), b(42, 7), c(42, 8);
  double mean = 0.0;
  bool differs = false;
  for (int i = 0; i < 100000; ++i) {
    const double u = a.uniform();
    CHECK_FALSE(u <= 0.0);
    CHECK_FALSE(u >= 1.0);
    CHECK(u == b.uniform());
    differs = differs || u != c.uniform();
    mean += u;
  }
  CHECK(differs);
  CHECK(mean / 1e5 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("arrival kernel") {
  const auto coh = StateFamily::coherent(), qf = StateFamily::quasi_free();
  CHECK(std::exp(log_arrival_kernel(3, coh, 2.0)) == doctest::Approx(std::exp(-2.0) * 4.0 / 2.0));
  CHECK(std::exp(log_arrival_kernel(2, qf, 1.0)) == doctest::Approx(0.25));
  CHECK(arrival_kernel_mode(4, coh) == doctest::Approx(3.0));
  CHECK(arrival_kernel_mode(4, qf) == doctest::Approx(1.5));
  CHECK(arrival_kernel_mode(1, coh) == 0.0);
}

TEST_CASE("joint density") {
  const IntensityProfile p = make_stationary_profile(0.5, 0.0);
  const auto coh = StateFamily::coherent();
  CHECK(joint_density({1.0, 3.0}, coh, p) == doctest::Approx(0.25 * std::exp(-1.5)));
  CHECK(log_joint_density({1.0, 3.0}, coh, p) == doctest::Approx(std::log(0.25) - 1.5));
  CHECK_THROWS_AS(joint_density({3.0, 1.0}, coh, p), DomainError);
  CHECK_THROWS_AS(joint_density({0.0, 1.0}, coh, p), DomainError);
  CHECK_THROWS_AS(joint_density({}, coh, p), DomainError);
}

TEST_CASE("no-event closed forms") {
  const auto coh = StateFamily::coherent(10.0), qf = StateFamily::quasi_free(10.0), fock = StateFamily::fock(3);
  CHECK(no_event_prob(1, coh, 2.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(no_event_prob(2, qf, 2.0) == doctest::Approx(1.0 / 3.0 + 2.0 / 9.0));
  CHECK(no_event_prob(2, fock, 1.5) == doctest::Approx(0.125 + 3.0 * 0.25 * 0.5));
  CHECK(no_event_prob(4, fock, 2.0) == doctest::Approx(1.0));
  CHECK(no_event_prob(3, coh, inf) == 0.0);
  for (int n = 1; n <= 8; ++n) CHECK(total_prob_at(n, qf, inf) == 1.0);
}

TEST_CASE("normalization, recurrence and two-path agreement") {
  for (const auto& fam : {StateFamily::fock(10), StateFamily::coherent(10.0), StateFamily::quasi_free(10.0)})
    for (double W : {0.5, 3.0, 9.5}) {
      double prev = 1.0;
      for (int n = 1; n <= 8; ++n) {
        const double direct = total_prob_direct_at(n, fam, W);
        CHECK(std::fabs(direct + no_event_prob(n, fam, W) - 1.0) < 1e-8);
        CHECK(std::fabs(total_prob_at(n, fam, W) - direct) < 1e-6);
        if (n > 1) {
          const double step = fam.Fn(n - 1, W) * std::pow(W, n - 1) / std::tgamma(n);
          CHECK(std::fabs(direct - (prev - step)) < 1e-10);
        }
        CHECK(direct <= prev + 1e-15);
        prev = direct;
      }
    }
}

TEST_CASE("sampler marginals follow the closed-form laws") {
  const IntensityProfile p = build_beam_profile(1.0, 1.0, ref_dp);
  for (const auto& fam : {StateFamily::coherent(), StateFamily::quasi_free()}) {
    const std::size_t N = 20000;
    const SampleBatch b = sample_batch(3, fam, p, N, 99);
    for (int k = 1; k <= 3; ++k) {
      std::vector<double> x;
      for (const auto& r : b.records) {
        REQUIRE(r.times.size() == 3);
        x.push_back(r.times[k - 1]);
      }
      std::sort(x.begin(), x.end());
      double ks = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double F = 1.0 - no_event_prob(k, fam, p.Omega(x[i]));
        ks = std::max({ks, std::fabs(F - double(i) / N), std::fabs(F - double(i + 1) / N)});
      }
      CHECK(std::sqrt(double(N)) * ks < 1.95);
    }
  }
}

TEST_CASE("sampler: determinism and NO-event records") {
  Scenario s;
  s.navg = 3.0;
  ProfileOptions o;
  o.t_max = 40.0;
  o.derivatives = false;
  const IntensityProfile p = build_profile(s, o);
  const auto fam = StateFamily::coherent(3.0);
  const std::size_t N = 20000;
  const SampleBatch a = sample_batch(1, fam, p, N, 5), b = sample_batch(1, fam, p, N, 5);
  std::size_t terminated = 0;
  for (std::size_t i = 0; i < N; ++i) {
    CHECK(a.records[i].times == b.records[i].times);
    terminated += a.records[i].terminated;
  }
  const double q = no_event_prob(1, fam, p.Omega_inf());
  CHECK(std::fabs(terminated / double(N) - q) < 4.0 * std::sqrt(q * (1 - q) / N));
  // A Fock source of two particles never yields a third arrival.
  const auto fock = StateFamily::fock(2);
  Scenario s2 = s;
  s2.navg = 2.0;
  const IntensityProfile p2 = build_profile(s2, o);
  for (std::uint64_t i = 0; i < 200; ++i) {
    const ArrivalRecord r = sample_arrivals(3, fock, p2, 1, i);
    CHECK(r.terminated);
    CHECK(r.times.size() <= 2);
  }
}

TEST_CASE("spatial statistics") {
  const SpatialDensity g = SpatialDensity::gaussian(100.0, -20.0, std::sqrt(0.5));
  CHECK(g.mean_in(-200.0, 400.0) == doctest::Approx(100.0));
  CHECK(g.mean_in(-20.0, 200.0) == doctest::Approx(50.0));
  const SpatialDensity u = SpatialDensity::constant(2.5);
  CHECK(u.mean_in(3.0, 4.0) == doctest::Approx(10.0));
  const double s = 0.7;
  const std::complex<double> z = std::polar(1.0, s) - 1.0;
  CHECK(std::abs(spatial_char(4.0, StateFamily::coherent(), u)(s) - std::exp(10.0 * z)) < 1e-12);
  CHECK(std::abs(spatial_char(4.0, StateFamily::quasi_free(), u)(s) - 1.0 / (1.0 - 10.0 * z)) < 1e-12);
  const auto f = spatial_char(400.0, StateFamily::fock(100), g, -200.0);
  CHECK(std::abs(f(s) - std::polar(1.0, 100.0 * s)) < 1e-9);
}
