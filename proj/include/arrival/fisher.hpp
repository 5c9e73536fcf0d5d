#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "arrival/deltakernel.hpp"
#include "arrival/intensity.hpp"
#include "arrival/process.hpp"
#include "arrival/scenario.hpp"

namespace arrival {

/// Fisher information of p0 carried by n arrival times (units 1/p^2).
struct FisherReport {
  int n = 0;
  double I_n = 0.0;              ///< detection_part + noevent_part
  double detection_part = 0.0;
  double noevent_part = 0.0;     ///< (d p_n^tot / dp0)^2 / (1 - p_n^tot)
  double p_n_tot = 1.0;
  double dp_n_tot = 0.0;
  double I_n_conditional = 0.0;
};

struct FisherOptions {
  double max_du = 0.25;  ///< largest Omega increment integrated by a single quadrature panel
};

FisherReport fisher_info(int n, const StateFamily& family, const IntensityProfile& profile,
                         const FisherOptions& opt = {});

/// I_n^(c) = (I_n - (d p_n^tot)^2 / (p (1 - p))) / p.
double fisher_conditional(const FisherReport& report);

struct StationaryConstants {
  int n;
  double C_n;
};

/// (1/(n-1)!) int F_n(u) u^{n-1} (n - u H_n(u))^2 du by quadrature.
StationaryConstants stationary_constant(int n, const StateFamily& family);

/// (domega/omega)^2 of the stationary beam: a^2 m^2 / (p0^2 (p0 + a m / 2)^2).
double I_infinity(double p0, const DeltaParams& dp);

/// C_n I_inf for the coherent or quasi-free beam; Fock is rejected.
double sparse_limit_I(int n, const StateFamily& family, double p0, const DeltaParams& dp);

/// Profiles at p0 and p0 +- h for score evaluation.
struct ProfileTriple {
  IntensityProfile center;
  IntensityProfile plus;
  IntensityProfile minus;
  double h;
};
ProfileTriple profiles_around(const Scenario& scn, double h, const ProfileOptions& opt = {});

struct McEstimate {
  double variance = 0.0;     ///< sample variance of the score
  double std_error = 0.0;    ///< jackknife standard error of the variance
  double mean_score = 0.0;
  double mean_se = 0.0;
  std::size_t samples = 0;
  std::size_t degenerate = 0;  ///< records redrawn because a likelihood vanished
  std::size_t terminated = 0;  ///< NO-event records
};

/// Variance of the finite-difference score over records drawn from the center profile.
McEstimate mc_score_variance(int n, const StateFamily& family, const ProfileTriple& profiles,
                             std::size_t samples, std::uint64_t seed);

struct SweepRow {
  int n;
  double r0;
  double I_n;
};

/// Beam Fisher information over a grid of n and r0; r0 = 0 rows use sparse_limit_I.
std::vector<SweepRow> density_sweep(const std::vector<int>& n_list, const std::vector<double>& r0_list,
                                    const StateFamily& family, double p0, const DeltaParams& dp,
                                    const ProfileOptions& opt = {});

/// log-likelihood of complete beam records as a function of p0 (direct Omega quadrature).
double beam_log_likelihood(const std::vector<double>& times, const StateFamily& family, double p0, double r0,
                           const DeltaParams& dp);

/// Golden-section maximiser of a unimodal function on [lo, hi].
double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-6);

}  // namespace arrival
