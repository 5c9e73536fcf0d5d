#include "arrival/process.hpp"

#include <cmath>
#include <limits>

#include "arrival/errors.hpp"
#include "arrival/parallel.hpp"
#include "arrival/quadrature.hpp"
#include "arrival/rng.hpp"

namespace arrival {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace

double log_arrival_kernel(int n, const StateFamily& family, double u) {
  const double lf = family.log_Fn(n, u);
  if (lf == -inf) return -inf;
  if (n == 1) return lf;
  if (u == 0.0) return -inf;
  return lf + (n - 1) * std::log(u) - std::lgamma(static_cast<double>(n));
}

double arrival_kernel_mode(int n, const StateFamily& family) {
  if (n <= 1) return 0.0;
  switch (family.kind()) {
    case FamilyKind::coherent: return n - 1.0;
    case FamilyKind::quasi_free: return 0.5 * (n - 1.0);
    case FamilyKind::fock: {
      const double N = static_cast<double>(family.particles());
      if (n >= family.particles()) return N;
      return N * (n - 1.0) / (N - 1.0);
    }
  }
  return 0.0;
}

double log_joint_density(const std::vector<double>& times, const StateFamily& family, const IntensityProfile& profile) {
  if (times.empty()) throw DomainError("joint_density: n >= 1 required");
  double prev = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (!(t > prev)) throw DomainError("joint_density: times must be positive and strictly increasing");
    prev = t;
    const double w = profile.omega(t);
    if (!(w > 0.0)) return -inf;
    acc += std::log(w);
  }
  const int n = static_cast<int>(times.size());
  return acc + family.log_Fn(n, profile.Omega(times.back()));
}

double joint_density(const std::vector<double>& times, const StateFamily& family, const IntensityProfile& profile) {
  return std::exp(log_joint_density(times, family, profile));
}

double no_event_prob(int n, const StateFamily& family, double W) {
  if (n < 1) throw DomainError("total_prob: n >= 1 required");
  if (!(W >= 0.0)) throw DomainError("total_prob: Omega(inf) must be nonnegative");
  if (std::isinf(W)) return 0.0;
  double q = 0.0;
  for (int k = 0; k < n; ++k) {
    const double lf = family.log_Fn(k, W);
    if (lf == -inf) continue;
    const double lp = k == 0 ? 0.0 : (W == 0.0 ? -inf : k * std::log(W));
    q += std::exp(lf + lp - std::lgamma(k + 1.0));
  }
  return q;
}

double total_prob_direct_at(int n, const StateFamily& family, double W) {
  if (n < 1) throw DomainError("total_prob: n >= 1 required");
  const double upper = std::min(W, family.domain_end());
  if (!(upper > 0.0)) return 0.0;
  return integrate_smooth([&](double u) { return std::exp(log_arrival_kernel(n, family, u)); }, 0.0, upper);
}

double total_prob_at(int n, const StateFamily& family, double W) {
  if (std::isinf(W)) return 1.0;
  const double q = no_event_prob(n, family, W);
  if (q <= 0.5) return 1.0 - q;
  return total_prob_direct_at(n, family, W);
}

double total_prob(int n, const StateFamily& family, const IntensityProfile& profile) {
  return total_prob_at(n, family, profile.Omega_inf());
}

double total_prob_direct(int n, const StateFamily& family, const IntensityProfile& profile) {
  return total_prob_direct_at(n, family, profile.Omega_inf());
}

double total_prob_dp(int n, const StateFamily& family, const IntensityProfile& profile) {
  if (n < 1) throw DomainError("total_prob_dp: n >= 1 required");
  const double W = profile.Omega_inf();
  if (std::isinf(W)) return 0.0;
  const double lk = log_arrival_kernel(n, family, W);
  if (lk == -inf) return 0.0;
  return profile.dOmega_inf() * std::exp(lk);
}

ArrivalRecord sample_arrivals(int n, const StateFamily& family, const IntensityProfile& profile,
                              std::uint64_t seed, std::uint64_t index) {
  if (n < 1) throw DomainError("sample_arrivals: n >= 1 required");
  PhiloxStream rng(seed, index);
  ArrivalRecord rec;
  const double W = profile.Omega_inf();
  double u = 0.0;
  for (int k = 0; k < n; ++k) {
    const double v = rng.uniform();
    if (family.kind() == FamilyKind::fock && k >= family.particles()) {
      rec.terminated = true;
      break;
    }
    // Survival of the next arrival in u: F_k(u) / F_k(u_k) = v.
    if (!std::isinf(W) && std::log(v) + family.log_Fn(k, u) <= family.log_Fn(k, W)) {
      rec.terminated = true;
      break;
    }
    switch (family.kind()) {
      case FamilyKind::coherent: u = u - std::log(v); break;
      case FamilyKind::quasi_free: u = (1.0 + u) * std::pow(v, -1.0 / (k + 1.0)) - 1.0; break;
      case FamilyKind::fock: {
        const double N = static_cast<double>(family.particles());
        u = N - (N - u) * std::pow(v, 1.0 / (N - k));
        break;
      }
    }
    if (u >= W) {
      rec.terminated = true;
      break;
    }
    double t = 0.0;
    try {
      t = profile.invert_Omega(u);
    } catch (const RangeError&) {
      rec.terminated = true;
      break;
    }
    rec.times.push_back(t);
  }
  return rec;
}

SampleBatch sample_batch(int n, const StateFamily& family, const IntensityProfile& profile, std::size_t count,
                         std::uint64_t seed, std::uint64_t scenario_hash) {
  SampleBatch batch;
  batch.seed = seed;
  batch.scenario_hash = scenario_hash;
  batch.records.resize(count);
  parallel_for(count, [&](std::size_t i) { batch.records[i] = sample_arrivals(n, family, profile, seed, i); });
  return batch;
}

SpatialDensity SpatialDensity::gaussian(double navg, double x0, double dp) {
  SpatialDensity r;
  r.navg = navg;
  r.x0 = x0;
  r.sigma = 1.0 / (2.0 * dp);
  return r;
}

SpatialDensity SpatialDensity::constant(double r0) {
  SpatialDensity r;
  r.uniform = true;
  r.r0 = r0;
  return r;
}

double SpatialDensity::mean_in(double x_lo, double len) const {
  if (uniform) return r0 * len;
  const double s = sigma * std::sqrt(2.0);
  const double a = (x_lo - x0) / s, b = (x_lo + len - x0) / s;
  // Difference of normal CDFs through erfc for accuracy in either tail.
  if (a >= 0.0) return 0.5 * navg * (std::erfc(a) - std::erfc(b));
  if (b <= 0.0) return 0.5 * navg * (std::erfc(-b) - std::erfc(-a));
  return 0.5 * navg * (2.0 - std::erfc(-a) - std::erfc(b));
}

std::function<std::complex<double>(double)> spatial_char(double len, const StateFamily& family,
                                                         const SpatialDensity& r, double x_lo) {
  if (!(len > 0.0)) throw DomainError("spatial_char: interval length must be positive");
  const double mu = r.mean_in(x_lo, len);
  const FamilyKind kind = (family.kind() == FamilyKind::fock && r.uniform) ? FamilyKind::coherent : family.kind();
  const double N = static_cast<double>(family.particles());
  return [=](double s) -> std::complex<double> {
    const std::complex<double> z = std::polar(1.0, s) - 1.0;
    switch (kind) {
      case FamilyKind::fock: return std::pow(1.0 + z * (mu / N), N);
      case FamilyKind::coherent: return std::exp(z * mu);
      case FamilyKind::quasi_free: return 1.0 / (1.0 - z * mu);
    }
    return 0.0;
  };
}

}  // namespace arrival
