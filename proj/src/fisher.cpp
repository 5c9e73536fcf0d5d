#include "arrival/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arrival/errors.hpp"
#include "arrival/parallel.hpp"
#include "arrival/quadrature.hpp"

namespace arrival {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double omega_floor = 1e-280;
// Panels whose largest arrival-kernel value is below e^{-700} contribute nothing.
constexpr double log_negligible = -700.0;

struct State {
  double Omega, omega, domega, dOmega, dOmega2;
  double phi_sq_extra = 0.0;  // oscillation-averaged excess of (domega/omega)^2
};

// F_n(Omega) omega Omega^{n-1} S_n / (n-1)! at one time.
double integrand(int n, const StateFamily& family, const State& s) {
  if (!(s.omega > omega_floor)) return 0.0;
  const double lk = log_arrival_kernel(n, family, s.Omega);
  if (lk == -inf) return 0.0;
  const double phi = s.domega / s.omega;
  double Phi = phi, Phit = phi * phi;
  if (s.Omega > 0.0) {
    Phi = s.dOmega / s.Omega;
    Phit = s.dOmega2 / s.Omega;
  }
  const double H = family.Hn(n, s.Omega);
  const double mean = (n - 1.0 - s.Omega * H) * Phi + phi;
  const double S = mean * mean + s.phi_sq_extra + (n - 1.0) * std::max(0.0, Phit - Phi * Phi);
  return std::exp(lk) * s.omega * S;
}

// Largest log kernel value over [u0, u1].
double max_log_kernel(int n, const StateFamily& family, double u0, double u1) {
  const double mode = arrival_kernel_mode(n, family);
  return log_arrival_kernel(n, family, std::clamp(mode, u0, std::min(u1, family.domain_end())));
}

// Omega increment over which the arrival kernel changes by O(1): 1/H_n, capped by 1 + Omega.
double kernel_scale(int n, const StateFamily& family, double u) {
  if (!(u < family.domain_end())) return 1.0;
  const double H = family.Hn(n, u);
  return H > 0.0 ? std::min(1.0 / H, 1.0 + u) : 1.0 + u;
}

double table_part(int n, const StateFamily& family, const IntensityProfile& prof, const FisherOptions& opt) {
  const ProfileTable& tb = prof.table();
  const ChebyshevPanel& cp = ChebyshevPanel::instance();
  const GaussRule& g = gauss_legendre_20();
  double total = 0.0;
  for (const auto& p : prof.panels()) {
    const std::size_t last = p.first + p.count() - 1;
    const double O0 = tb.Omega[p.first], O1 = tb.Omega[last];
    if (max_log_kernel(n, family, O0, O1) < log_negligible) continue;
    const double h = p.t1 - p.t0;
    const double du = opt.max_du * kernel_scale(n, family, O0);
    if (O1 - O0 <= du) {
      for (std::size_t j = 0; j < p.count(); ++j) {
        double w = 0.5 * h;
        if (p.kind == IntensityProfile::PanelKind::chebyshev) w = 0.5 * h * cp.weight(static_cast<int>(j));
        else if (p.kind == IntensityProfile::PanelKind::cusp) w = j == 0 ? h / 3.0 : 2.0 * h / 3.0;
        const std::size_t k = p.first + j;
        total += w * integrand(n, family, {tb.Omega[k], tb.omega[k], tb.domega[k], tb.dOmega[k], tb.dOmega2[k]});
      }
      continue;
    }
    const int pieces = static_cast<int>(std::ceil((O1 - O0) / du));
    for (int q = 0; q < pieces; ++q) {
      const double a = p.t0 + h * q / pieces, b = p.t0 + h * (q + 1) / pieces;
      const double c = 0.5 * (a + b), r = 0.5 * (b - a);
      double s = 0.0;
      for (std::size_t k = 0; k < g.x.size(); ++k) {
        const double t = c + r * g.x[k];
        s += g.w[k] * integrand(n, family, {prof.Omega(t), prof.omega(t), prof.domega(t), prof.dOmega(t), prof.dOmega2(t)});
      }
      total += s * r;
    }
  }
  return total;
}

double tail_part(int n, const StateFamily& family, const IntensityProfile& prof) {
  const TailModel& tl = prof.tail();
  if (tl.kind == TailModel::Kind::none) return 0.0;
  const double upper = std::min(prof.Omega_inf(), family.domain_end());
  if (!(upper > tl.Omega0)) return 0.0;
  if (max_log_kernel(n, family, tl.Omega0, upper) < log_negligible) return 0.0;
  if (tl.kind == TailModel::Kind::stationary) {
    const double w = tl.omega, dw = tl.domega;
    auto f = [&](double u) {
      const double s = (u - tl.Omega0) / w;
      const double t = tl.t0 + s;
      State st{u, w, dw, tl.dOmega0 + dw * s, tl.dOmega2_0 + dw * dw / w * s};
      if (tl.osc_sq > 0.0 && tl.t0 > 0.0) {
        st.dOmega2 += tl.osc_sq / w * std::log(t / tl.t0);
        st.phi_sq_extra = tl.osc_sq / (w * w * t);
      }
      return integrand(n, family, st) / w;
    };
    return integrate_smooth(f, tl.Omega0, upper);
  }
  // Power-law tail: rates keep the ratio domega/omega of the last node.
  const double span = prof.Omega_inf() - tl.Omega0;
  const double phi = tl.domega / tl.omega;
  auto f = [&](double u) {
    const double x = (u - tl.Omega0) / span;
    State st{u, tl.omega, tl.domega, tl.dOmega0 + (prof.dOmega_inf() - tl.dOmega0) * x,
             tl.dOmega2_0 + phi * phi * (u - tl.Omega0)};
    return integrand(n, family, st) / tl.omega;
  };
  return integrate_smooth(f, tl.Omega0, upper, std::min(0.5, 0.05 * (upper - tl.Omega0) + 1e-12));
}

}  // namespace

FisherReport fisher_info(int n, const StateFamily& family, const IntensityProfile& profile, const FisherOptions& opt) {
  if (n < 1) throw DomainError("fisher_info: n >= 1 required");
  if (!profile.has_derivatives()) throw DomainError("fisher_info: profile was built without p0-derivatives");
  FisherReport r;
  r.n = n;
  r.detection_part = table_part(n, family, profile, opt) + tail_part(n, family, profile);
  const double W = profile.Omega_inf();
  if (!std::isinf(W)) {
    r.p_n_tot = total_prob_at(n, family, W);
    r.dp_n_tot = total_prob_dp(n, family, profile);
    const double q = no_event_prob(n, family, W);
    r.noevent_part = q > 0.0 ? r.dp_n_tot * r.dp_n_tot / q : 0.0;
  }
  r.I_n = r.detection_part + r.noevent_part;
  r.I_n_conditional = r.p_n_tot > 0.0 ? fisher_conditional(r) : 0.0;
  return r;
}

double fisher_conditional(const FisherReport& r) {
  if (!(r.p_n_tot > 0.0)) throw DomainError("fisher_conditional: p_n_tot = 0");
  // Equal to (I_n - dp^2 / (p (1 - p))) / p without the cancellation.
  return (r.detection_part - r.dp_n_tot * r.dp_n_tot / r.p_n_tot) / r.p_n_tot;
}

StationaryConstants stationary_constant(int n, const StateFamily& family) {
  if (n < 1) throw DomainError("stationary_constant: n >= 1 required");
  auto f = [&](double u) {
    const double lk = log_arrival_kernel(n, family, u);
    if (lk == -inf) return 0.0;
    const double d = n - u * family.Hn(n, u);
    return std::exp(lk) * d * d;
  };
  return {n, integrate_smooth(f, 0.0, family.domain_end())};
}

double I_infinity(double p0, const DeltaParams& dp) {
  const double am = dp.a * dp.m;
  const double s = p0 * (p0 + 0.5 * am);
  return am * am / (s * s);
}

double sparse_limit_I(int n, const StateFamily& family, double p0, const DeltaParams& dp) {
  if (n < 1) throw DomainError("sparse_limit_I: n >= 1 required");
  double c = 0.0;
  switch (family.kind()) {
    case FamilyKind::coherent: c = n; break;
    case FamilyKind::quasi_free: c = n / (n + 2.0); break;
    case FamilyKind::fock: throw DomainError("sparse_limit_I: the Fock family has no beam limit of its own");
  }
  return c * I_infinity(p0, dp);
}

ProfileTriple profiles_around(const Scenario& scn, double h, const ProfileOptions& opt) {
  Scenario sp = scn, sm = scn;
  sp.p0 += h;
  sm.p0 -= h;
  return {build_profile(scn, opt), build_profile(sp, opt), build_profile(sm, opt), h};
}

McEstimate mc_score_variance(int n, const StateFamily& family, const ProfileTriple& pr, std::size_t samples,
                             std::uint64_t seed) {
  if (samples < 2) throw DomainError("mc_score_variance: at least two samples required");
  std::vector<double> score(samples, 0.0);
  std::vector<unsigned char> redraws(samples, 0), terminated(samples, 0);
  auto loglik = [&](const ArrivalRecord& rec, const IntensityProfile& p) {
    if (rec.terminated) return std::log(no_event_prob(n, family, p.Omega_inf()));
    return log_joint_density(rec.times, family, p);
  };
  parallel_for(samples, [&](std::size_t i) {
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
      const ArrivalRecord rec = sample_arrivals(n, family, pr.center, seed, i + (attempt << 40));
      const double lp = loglik(rec, pr.plus), lm = loglik(rec, pr.minus);
      if (std::isfinite(lp) && std::isfinite(lm)) {
        score[i] = (lp - lm) / (2.0 * pr.h);
        terminated[i] = rec.terminated;
        return;
      }
      ++redraws[i];
    }
    throw ToleranceError("mc_score_variance: repeated degenerate likelihoods", 0.0, 0.0);
  });
  McEstimate e;
  e.samples = samples;
  const double N = static_cast<double>(samples);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    s1 += score[i];
    s2 += score[i] * score[i];
    e.degenerate += redraws[i];
    e.terminated += terminated[i];
  }
  e.mean_score = s1 / N;
  e.variance = (s2 - s1 * s1 / N) / (N - 1.0);
  e.mean_se = std::sqrt(e.variance / N);
  // Delete-one jackknife of the sample variance.
  double jm = 0.0;
  std::vector<double> jack(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double a = s1 - score[i], b = s2 - score[i] * score[i];
    jack[i] = (b - a * a / (N - 1.0)) / (N - 2.0);
    jm += jack[i];
  }
  jm /= N;
  double acc = 0.0;
  for (double v : jack) acc += (v - jm) * (v - jm);
  e.std_error = std::sqrt((N - 1.0) / N * acc);
  return e;
}

std::vector<SweepRow> density_sweep(const std::vector<int>& n_list, const std::vector<double>& r0_list,
                                    const StateFamily& family, double p0, const DeltaParams& dp,
                                    const ProfileOptions& opt) {
  const IntensityProfile base = build_beam_profile(p0, 1.0, dp, opt);
  std::vector<SweepRow> rows;
  for (double r0 : r0_list) {
    if (r0 < 0.0) throw DomainError("density_sweep: r0 must be nonnegative");
    if (r0 == 0.0) {
      for (int n : n_list) rows.push_back({n, 0.0, sparse_limit_I(n, family, p0, dp)});
      continue;
    }
    const IntensityProfile prof = base.scaled(r0);
    for (int n : n_list) rows.push_back({n, r0, fisher_info(n, family, prof).I_n});
  }
  return rows;
}

double beam_log_likelihood(const std::vector<double>& times, const StateFamily& family, double p0, double r0,
                           const DeltaParams& dp) {
  if (times.empty()) throw DomainError("beam_log_likelihood: empty record");
  double acc = 0.0;
  for (double t : times) acc += std::log(beam_intensity(t, p0, r0, dp));
  return acc + family.log_Fn(static_cast<int>(times.size()), beam_integrated_intensity(times.back(), p0, r0, dp));
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d; d = c; fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace arrival
