#include "arrival/deltakernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <vector>

#include "arrival/erfc.hpp"
#include "arrival/errors.hpp"
#include "arrival/quadrature.hpp"

namespace arrival {

namespace {

using cd = std::complex<double>;
constexpr double pi = 3.14159265358979323846;
constexpr double inv_sqrt_pi = 0.56418958354775628694807945156077259;
const cd I(0.0, 1.0);

// Below this relative distance to alpha the divided difference is evaluated as the
// mean of q' over [alpha, |p|] (6-point Gauss), avoiding the cancellation.
constexpr double near_alpha = 1e-3;

cd kappa(double t, double m) { return std::polar(std::sqrt(t / (2.0 * m)), -0.25 * pi); }

struct Q {
  cd kap;
  cd q(double c) const { return c * erfcx_c(c * kap); }
  cd q1(double c) const {
    cd w[2];
    erfcx_derivatives(c * kap, 1, w);
    return w[0] + c * kap * w[1];
  }
  cd q2(double c) const {
    cd w[3];
    erfcx_derivatives(c * kap, 2, w);
    return 2.0 * kap * w[1] + c * kap * kap * w[2];
  }
};

const double gl6_x[6] = {0.033765242898423987, 0.16939530676686775, 0.38069040695840156,
                         0.61930959304159844, 0.83060469323313225, 0.96623475710157601};
const double gl6_w[6] = {0.085662246189585173, 0.18038078652406930, 0.23395696728634552,
                         0.23395696728634552, 0.18038078652406930, 0.085662246189585173};

// DD = (q(c) - q(alpha)) / (c - alpha) and optionally its c-derivative.
void divided_difference(const Q& qq, double c, double alpha, cd* dd, cd* ddd) {
  const double delta = c - alpha;
  if (std::fabs(delta) >= near_alpha * alpha) {
    const cd qc = qq.q(c);
    *dd = (qc - qq.q(alpha)) / delta;
    if (ddd) *ddd = (qq.q1(c) - *dd) / delta;
    return;
  }
  cd s0 = 0.0, s1 = 0.0;
  for (int k = 0; k < 6; ++k) {
    const double x = alpha + gl6_x[k] * delta;
    s0 += gl6_w[k] * qq.q1(x);
    if (ddd) s1 += gl6_w[k] * gl6_x[k] * qq.q2(x);
  }
  *dd = s0;
  if (ddd) *ddd = s1;
}

// Bracket S = T_p + R_p(t) and dS/dp for p >= 0.
void bracket(double p, double t, const DeltaParams& dp, cd* s, cd* ds) {
  const double alpha = dp.alpha();
  const double c = std::fabs(p);
  const double A = alpha / (c + alpha);
  const double T = c / (c + alpha);
  if (t == 0.0) {
    *s = 1.0;
    if (ds) *ds = 0.0;
    return;
  }
  const Q qq{kappa(t, dp.m)};
  cd dd, ddd;
  divided_difference(qq, c, alpha, &dd, ds ? &ddd : nullptr);
  const cd E = std::polar(1.0, c * c * t / (2.0 * dp.m));
  *s = T + A * E * dd;
  if (ds) {
    const double dA = -alpha / ((c + alpha) * (c + alpha));
    const double dT = alpha / ((c + alpha) * (c + alpha));
    *ds = dT + E * (dA * dd + A * (I * (c * t / dp.m)) * dd + A * ddd);
  }
}

}  // namespace

DeltaParams::DeltaParams(double a_, double m_) : a(a_), m(m_) {
  if (!(a > 0.0) || !(m > 0.0)) throw DomainError("DeltaParams: a and m must be positive");
}

cd DeltaParams::d() const { return (a * std::sqrt(m) / 4.0) * cd(1.0, -1.0); }

double transmission_T(double p, const DeltaParams& dp) {
  const double c = std::fabs(p);
  return c / (c + dp.alpha());
}

cd remainder_R(double p, double t, const DeltaParams& dp) {
  if (!(t >= 0.0)) throw DomainError("remainder_R: t must be nonnegative");
  cd s;
  bracket(p, t, dp, &s, nullptr);
  return s - transmission_T(p, dp);
}

cd f_p(double p, double t, const DeltaParams& dp) {
  if (!(t >= 0.0)) throw DomainError("f_p: t must be nonnegative");
  cd s;
  bracket(p, t, dp, &s, nullptr);
  return s * std::polar(1.0 / std::sqrt(2.0 * pi), -p * p * t / (2.0 * dp.m));
}

cd kernel_g(double t, const DeltaParams& dp) {
  if (!(t >= 0.0)) throw DomainError("kernel_g: t must be nonnegative");
  return erfcx_c(dp.d() * std::sqrt(t));
}

MomentumState gaussian_momentum_state(double p0, double x0, double dp) {
  if (!(dp > 0.0)) throw DomainError("gaussian_momentum_state: dp must be positive");
  const double norm = 1.0 / (std::sqrt(dp) * std::pow(2.0 * pi, 0.25));
  MomentumState s;
  s.amplitude = [=](double p) {
    const double g = (p - p0) / (2.0 * dp);
    return norm * std::exp(-g * g) * std::polar(1.0, -p * x0);
  };
  s.p_lo = p0 - 10.0 * dp;
  s.p_hi = p0 + 10.0 * dp;
  s.position = std::fabs(x0);
  return s;
}

cd f_superposition(const MomentumState& chi, double t, const DeltaParams& dp,
                   const SuperpositionOptions& opt) {
  if (!(t >= 0.0)) throw DomainError("f_superposition: t must be nonnegative");
  if (!(chi.p_hi > chi.p_lo)) return 0.0;
  std::vector<double> cuts{chi.p_lo, chi.p_hi};
  for (double b : {0.0, dp.alpha(), -dp.alpha()})
    if (b > chi.p_lo && b < chi.p_hi) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  const double pmax = std::max(std::fabs(chi.p_lo), std::fabs(chi.p_hi));
  const double rate = chi.position + t * pmax / dp.m;
  const double max_width = rate > 0.0 ? 2.0 * pi / rate : chi.p_hi - chi.p_lo;

  auto integrand = [&](double p) { return f_p(p, t, dp) * chi.amplitude(p); };
  cd total = 0.0;
  double err_total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width)));
    const double w = (hi - lo) / pieces;
    for (int j = 0; j < pieces; ++j) {
      double err = 0.0;
      const double a0 = lo + j * w, b0 = (j + 1 == pieces) ? hi : lo + (j + 1) * w;
      total += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
          integrand, a0, b0, 12, 0.1 * opt.rel_tol, &err);
      err_total += err * 0.5 * (b0 - a0);
    }
  }
  // The Kronrod-Gauss difference bounds the error of the lower-order rule, so the
  // achieved accuracy is far better than err_total; allow two digits of slack.
  if (err_total > 100.0 * std::max(opt.abs_tol, opt.rel_tol * std::abs(total)))
    throw ToleranceError("f_superposition: tolerance not reached", std::abs(total), err_total);
  return total;
}

BeamSample beam_sample(double t, double p0, double r0, const DeltaParams& dp) {
  if (!(t >= 0.0)) throw DomainError("beam intensity: t must be nonnegative");
  cd s, ds;
  bracket(p0, t, dp, &s, &ds);
  const double scale = dp.a * r0;
  return {scale * std::norm(s), 2.0 * scale * std::real(std::conj(s) * ds)};
}

double beam_intensity(double t, double p0, double r0, const DeltaParams& dp) {
  if (!(t >= 0.0)) throw DomainError("beam intensity: t must be nonnegative");
  cd s;
  bracket(p0, t, dp, &s, nullptr);
  return dp.a * r0 * std::norm(s);
}

double beam_intensity_dp(double t, double p0, double r0, const DeltaParams& dp) {
  return beam_sample(t, p0, r0, dp).domega;
}

double beam_integrated_intensity(double t, double p0, double r0, const DeltaParams& dp) {
  if (!(t >= 0.0)) throw DomainError("beam Omega: t must be nonnegative");
  if (t == 0.0) return 0.0;
  const GaussRule& g = gauss_legendre_20();
  // Panels double from the transient scale 8/(a^2 m) up to a quarter oscillation period.
  const double cap = pi * dp.m / (p0 * p0);
  double width = std::min(cap, 8.0 / (dp.a * dp.a * dp.m));
  double acc = 0.0;
  // First panel in sigma = sqrt(s): the sqrt-t cusp becomes analytic.
  double lo = std::min(t, width);
  const double sig1 = std::sqrt(lo);
  for (std::size_t k = 0; k < g.x.size(); ++k) {
    const double sig = 0.5 * sig1 * (g.x[k] + 1.0);
    acc += g.w[k] * 2.0 * sig * beam_intensity(sig * sig, p0, r0, dp);
  }
  acc *= 0.5 * sig1;
  while (lo < t) {
    width = std::min(cap, 2.0 * width);
    // Stretch the last panel rather than leave a sliver.
    const double hi = t - lo < 1.5 * width ? t : lo + width;
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t k = 0; k < g.x.size(); ++k) s += g.w[k] * beam_intensity(c + r * g.x[k], p0, r0, dp);
    acc += s * r;
    lo = hi;
  }
  return acc;
}

BeamAsymptotes beam_asymptotes(double p0, double r0, const DeltaParams& dp) {
  const double a = dp.a, m = dp.m, alpha = dp.alpha();
  const double ar0 = a * r0;
  BeamAsymptotes r{};
  r.omega_inf = ar0 * p0 * p0 / ((alpha + p0) * (alpha + p0));
  r.domega_inf = ar0 * a * m * p0 / std::pow(alpha + p0, 3);
  r.omega_c0 = ar0;
  r.omega_c1 = -ar0 * a * m / std::sqrt(m * pi);
  r.omega_c2 = ar0 * a * a * m / (2.0 * pi);
  r.domega_c32 = -ar0 * a * p0 / (3.0 * std::sqrt(pi * m));
  const double T = p0 / (p0 + alpha);
  r.domega_osc = ar0 * T * std::pow(2.0 * m, 1.5) * inv_sqrt_pi / (m * p0 * alpha);
  r.period = 4.0 * pi * m / (p0 * p0);
  return r;
}

}  // namespace arrival
