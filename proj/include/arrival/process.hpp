#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "arrival/intensity.hpp"
#include "arrival/scenario.hpp"

namespace arrival {

/// Ordered arrival times, or the NO-event outcome after fewer than n arrivals.
struct ArrivalRecord {
  std::vector<double> times;
  bool terminated = false;
};

struct SampleBatch {
  std::vector<ArrivalRecord> records;
  std::uint64_t seed = 0;
  std::uint64_t scenario_hash = 0;
};

/// log of F_n(u) u^{n-1} / (n-1)!, the density of Omega(t_n) in the beam limit.
double log_arrival_kernel(int n, const StateFamily& family, double u);
/// Location of the maximum of F_n(u) u^{n-1} over u >= 0.
double arrival_kernel_mode(int n, const StateFamily& family);

/// p_n(t_1..t_n) = F_n(Omega(t_n)) prod omega(t_i), n = times.size() >= 1.
double joint_density(const std::vector<double>& times, const StateFamily& family, const IntensityProfile& profile);
double log_joint_density(const std::vector<double>& times, const StateFamily& family, const IntensityProfile& profile);

/// No-event mass 1 - p_n^tot = sum_{k<n} F_k(W) W^k / k! at W = Omega(inf); 0 for W = inf.
double no_event_prob(int n, const StateFamily& family, double Omega_inf);
/// Probability of at least n detections given Omega(inf) (closed form; direct u-integral
/// where the closed form would cancel, i.e. when the no-event mass exceeds 1/2).
double total_prob_at(int n, const StateFamily& family, double Omega_inf);
/// (1/(n-1)!) int_0^W F_n(u) u^{n-1} du.
double total_prob_direct_at(int n, const StateFamily& family, double Omega_inf);

double total_prob(int n, const StateFamily& family, const IntensityProfile& profile);
double total_prob_direct(int n, const StateFamily& family, const IntensityProfile& profile);
/// d p_n^tot / d p0 = dOmega(inf) F_n(W) W^{n-1} / (n-1)!; 0 in beam mode.
double total_prob_dp(int n, const StateFamily& family, const IntensityProfile& profile);

/// One record of up to n arrivals by time-change inversion; the stream is (seed, index).
ArrivalRecord sample_arrivals(int n, const StateFamily& family, const IntensityProfile& profile,
                              std::uint64_t seed, std::uint64_t index = 0);
SampleBatch sample_batch(int n, const StateFamily& family, const IntensityProfile& profile,
                         std::size_t count, std::uint64_t seed, std::uint64_t scenario_hash = 0);

/// Spatial particle density: Gaussian packet ( navg N(x0, 1/(2 dp)) ) or uniform beam r0.
struct SpatialDensity {
  bool uniform = false;
  double navg = 0.0;
  double x0 = 0.0;
  double sigma = 0.0;
  double r0 = 0.0;
  static SpatialDensity gaussian(double navg, double x0, double dp);
  static SpatialDensity constant(double r0);
  /// Expected particle number in [x_lo, x_lo + len].
  double mean_in(double x_lo, double len) const;
};

/// Characteristic function s -> E[exp(i s N(I))] of the particle number in
/// I = [x_lo, x_lo + len]. For a uniform density the Fock family takes its Poisson limit.
std::function<std::complex<double>(double)> spatial_char(double len, const StateFamily& family,
                                                         const SpatialDensity& r, double x_lo = 0.0);

}  // namespace arrival
