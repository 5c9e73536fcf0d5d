#include <doctest.h>

#include <cmath>

#include "arrival/errors.hpp"
#include "arrival/fisher.hpp"
#include "oracles/abel.hpp"

using namespace arrival;

namespace {
const DeltaParams ref_dp(0.1, 1.0);

ProfileTriple stationary_triple(double w, double dw, double h) {
  return {make_stationary_profile(w, dw), make_stationary_profile(w + h * dw, dw),
          make_stationary_profile(w - h * dw, dw), h};
}
}  // namespace

TEST_CASE("stationary constants") {
  for (int n = 1; n <= 10; ++n) {
    CHECK(std::fabs(stationary_constant(n, StateFamily::coherent()).C_n - n) < 1e-8);
    CHECK(std::fabs(stationary_constant(n, StateFamily::quasi_free()).C_n - n / (n + 2.0)) < 1e-8);
  }
  CHECK(stationary_constant(1, StateFamily::quasi_free()).C_n == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // Fock: polynomial integrand, exact Gauss quadrature as the oracle.
  const auto fock = StateFamily::fock(8);
  for (int n : {1, 3, 6}) {
    const double ref = oracle::gauss(
        [&](double u) {
          const double d = n - u * fock.Hn(n, u);
          return fock.Fn(n, u) * std::pow(u, n - 1) * d * d / std::tgamma(n);
        },
        0.0, 8.0, 4);
    CHECK(stationary_constant(n, fock).C_n == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("constant-rate model reproduces C_n (dw/w)^2") {
  const double w = 0.4, dw = 0.1;
  for (int n : {1, 4, 7}) {
    CHECK(fisher_info(n, StateFamily::coherent(), make_stationary_profile(w, dw)).I_n ==
          doctest::Approx(n * 0.0625).epsilon(1e-9));
    CHECK(fisher_info(n, StateFamily::quasi_free(), make_stationary_profile(w, dw)).I_n ==
          doctest::Approx(n / (n + 2.0) * 0.0625).epsilon(1e-9));
  }
}

TEST_CASE("sparse limit") {
  CHECK(I_infinity(1.0, ref_dp) == doctest::Approx(0.00907029).epsilon(1e-6));
  CHECK(sparse_limit_I(3, StateFamily::coherent(), 1.0, ref_dp) == doctest::Approx(3.0 * 0.00907029).epsilon(1e-6));
  CHECK(sparse_limit_I(3, StateFamily::quasi_free(), 1.0, ref_dp) == doctest::Approx(0.6 * 0.00907029).epsilon(1e-6));
  CHECK(sparse_limit_I(200, StateFamily::quasi_free(), 1.0, ref_dp) < I_infinity(1.0, ref_dp));
  // Vanishes like a^2 as the detector switches off.
  CHECK(sparse_limit_I(1, StateFamily::coherent(), 1.0, DeltaParams(1e-8, 1.0)) == doctest::Approx(1e-16).epsilon(1e-7));
  CHECK_THROWS_AS(sparse_limit_I(2, StateFamily::fock(5), 1.0, ref_dp), DomainError);
}

TEST_CASE("beam information: parts, conditional and growth in n") {
  const IntensityProfile p = build_beam_profile(1.0, 1.0, ref_dp);
  double prev = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const FisherReport r = fisher_info(n, StateFamily::coherent(), p);
    CHECK(r.p_n_tot == 1.0);
    CHECK(r.noevent_part == 0.0);
    CHECK(r.I_n_conditional == doctest::Approx(r.I_n).epsilon(1e-14));
    CHECK(r.I_n > prev);
    prev = r.I_n;
  }
}

TEST_CASE("density sweep") {
  const std::vector<double> r0s{0.0, 1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0};
  const auto coh = density_sweep({1, 2, 3}, r0s, StateFamily::coherent(), 1.0, ref_dp);
  REQUIRE(coh.size() == 21);
  CHECK(coh[0].I_n == doctest::Approx(sparse_limit_I(1, StateFamily::coherent(), 1.0, ref_dp)));
  // Row at the smallest positive density grows with n.
  CHECK(coh[4].I_n > coh[3].I_n);
  CHECK(coh[5].I_n > coh[4].I_n);
  // Each n has an interior maximum over r0 > 0.
  for (int n = 1; n <= 3; ++n) {
    double best = 0.0;
    std::size_t arg = 0;
    for (std::size_t j = 1; j < r0s.size(); ++j)
      if (coh[3 * j + n - 1].I_n > best) {
        best = coh[3 * j + n - 1].I_n;
        arg = j;
      }
    CHECK(arg > 1);
    CHECK(arg + 1 < r0s.size());
  }
  const auto qf = density_sweep({1, 4}, {0.0}, StateFamily::quasi_free(), 1.0, ref_dp);
  for (const auto& r : qf) CHECK(r.I_n < I_infinity(1.0, ref_dp));
}

TEST_CASE("finite source: decomposition and conditional identity") {
  Scenario s;
  s.navg = 30.0;
  const IntensityProfile p = build_profile(s, {});
  const auto fam = StateFamily::coherent(30.0);
  double peak = 0.0;
  int arg = 0;
  for (int n = 1; n <= 12; ++n) {
    const FisherReport r = fisher_info(n, fam, p);
    CHECK(r.I_n == r.detection_part + r.noevent_part);
    CHECK(r.detection_part >= 0.0);
    CHECK(r.noevent_part >= 0.0);
    const double q = 1.0 - r.p_n_tot;
    const double recomposed = r.p_n_tot * r.I_n_conditional + r.dp_n_tot * r.dp_n_tot / r.p_n_tot +
                              r.dp_n_tot * r.dp_n_tot / q;
    CHECK(recomposed == doctest::Approx(r.I_n).epsilon(1e-10));
    if (r.I_n > peak) {
      peak = r.I_n;
      arg = n;
    }
  }
  // Finite sources: information peaks at an intermediate n.
  CHECK(arg > 1);
  CHECK(arg < 12);
}

TEST_CASE("Monte Carlo score variance on a constant-rate model") {
  const ProfileTriple tr = stationary_triple(0.4, 0.1, 1e-3);
  const McEstimate e = mc_score_variance(4, StateFamily::coherent(), tr, 20000, 3);
  CHECK(std::fabs(e.variance - 4.0 * 0.0625) < 4.0 * e.std_error);
  CHECK(std::fabs(e.mean_score) < 4.0 * e.mean_se);
  CHECK(e.degenerate == 0);
  CHECK_THROWS_AS(mc_score_variance(1, StateFamily::coherent(), tr, 1, 3), DomainError);
}

TEST_CASE("Monte Carlo score variance on the beam") {
  Scenario beam;
  beam.mode = SourceMode::beam;
  beam.navg = std::numeric_limits<double>::infinity();
  beam.r0 = 1.0;
  const ProfileTriple tr = profiles_around(beam, 1e-3);
  const ProfileTriple half = profiles_around(beam, 5e-4);
  const double I = fisher_info(2, StateFamily::coherent(), tr.center).I_n;
  const McEstimate e = mc_score_variance(2, StateFamily::coherent(), tr, 20000, 11);
  const McEstimate e2 = mc_score_variance(2, StateFamily::coherent(), half, 20000, 11);
  CHECK(std::fabs(e.variance - I) < 3.5 * e.std_error);
  CHECK(std::fabs(e2.variance - e.variance) < e.std_error);
}

TEST_CASE("beam likelihood and golden section") {
  CHECK(golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, -1.0, 2.0, 1e-9) ==
        doctest::Approx(0.3).epsilon(1e-8));
  const IntensityProfile p = build_beam_profile(1.0, 1.0, ref_dp);
  const std::vector<double> times{0.7, 4.2, 19.5};
  for (const auto& fam : {StateFamily::coherent(), StateFamily::quasi_free()})
    CHECK(beam_log_likelihood(times, fam, 1.0, 1.0, ref_dp) ==
          doctest::Approx(log_joint_density(times, fam, p)).epsilon(1e-12));
}
