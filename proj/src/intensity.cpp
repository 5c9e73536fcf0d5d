#include "arrival/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arrival/errors.hpp"
#include "arrival/parallel.hpp"
#include "arrival/quadrature.hpp"

namespace arrival {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double omega_floor = 1e-280;

double ratio_sq(double dw, double w) { return w > omega_floor ? dw * dw / w : 0.0; }

// Mass beyond the last grid node from a power law fitted to ln omega over [T/2, T].
struct PowerTail {
  bool valid = false;
  double beta = 0.0;
  double mass = 0.0;
};

PowerTail fit_power_tail(const std::vector<double>& w, const TimeGrid& grid) {
  PowerTail r;
  const std::size_t n = w.size();
  if (n < 40) return r;
  const std::size_t lo = n / 2, step = std::max<std::size_t>(1, (n - lo) / 200);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = lo; i < n; i += step) {
    if (!(w[i] > omega_floor)) continue;
    const double x = std::log(grid.t(i)), y = std::log(w[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++count;
  }
  if (count < 10 || !(w[n - 1] > omega_floor)) return r;
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  r.beta = -slope;
  if (!(r.beta > 1.05)) return r;
  r.valid = true;
  r.mass = w[n - 1] * grid.t(n - 1) / (r.beta - 1.0);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// evaluation

std::size_t IntensityProfile::find_panel(double t) const {
  auto it = std::upper_bound(panels_.begin(), panels_.end(), t,
                             [](double v, const Panel& p) { return v < p.t0; });
  return it == panels_.begin() ? 0 : static_cast<std::size_t>(it - panels_.begin()) - 1;
}

double IntensityProfile::panel_value(const Panel& p, const std::vector<double>& f, double t) const {
  const double h = p.t1 - p.t0;
  switch (p.kind) {
    case PanelKind::chebyshev:
      return ChebyshevPanel::instance().interpolate(2.0 * (t - p.t0) / h - 1.0, &f[p.first]);
    case PanelKind::linear:
      return f[p.first] + (f[p.first + 1] - f[p.first]) * (t - p.t0) / h;
    case PanelKind::cusp:
      return f[p.first] + (f[p.first + 1] - f[p.first]) * std::sqrt((t - p.t0) / h);
  }
  return 0.0;
}

double IntensityProfile::panel_integral(const Panel& p, const std::vector<double>& f,
                                        const std::vector<double>& F, double t) const {
  const double h = p.t1 - p.t0, x = t - p.t0;
  switch (p.kind) {
    case PanelKind::chebyshev:
      return F[p.first] + 0.5 * h * ChebyshevPanel::instance().integral_to(2.0 * x / h - 1.0, &f[p.first]);
    case PanelKind::linear:
      return F[p.first] + 0.5 * x * (f[p.first] + panel_value(p, f, t));
    case PanelKind::cusp: {
      const double f0 = f[p.first], f1 = f[p.first + 1];
      return F[p.first] + f0 * x + (2.0 / 3.0) * (f1 - f0) * x * std::sqrt(x / h);
    }
  }
  return 0.0;
}

double IntensityProfile::omega(double t) const {
  if (!(t >= 0.0)) throw DomainError("omega: t must be nonnegative");
  if (t >= tail_.t0) {
    switch (tail_.kind) {
      case TailModel::Kind::none: return 0.0;
      case TailModel::Kind::stationary:
        return beam_params_ ? beam_intensity(t, beam_p0_, beam_r0_, *beam_params_) : tail_.omega;
      case TailModel::Kind::power_law: return tail_.omega * std::pow(t / tail_.t0, -tail_.beta);
    }
  }
  const Panel& p = panels_[find_panel(t)];
  return std::max(0.0, panel_value(p, table_.omega, t));
}

double IntensityProfile::domega(double t) const {
  if (!(t >= 0.0)) throw DomainError("domega: t must be nonnegative");
  if (t >= tail_.t0) {
    switch (tail_.kind) {
      case TailModel::Kind::none: return 0.0;
      case TailModel::Kind::stationary:
        return beam_params_ ? beam_intensity_dp(t, beam_p0_, beam_r0_, *beam_params_) : tail_.domega;
      case TailModel::Kind::power_law: return tail_.domega * std::pow(t / tail_.t0, -tail_.beta);
    }
  }
  return panel_value(panels_[find_panel(t)], table_.domega, t);
}

double IntensityProfile::Omega(double t) const {
  if (!(t >= 0.0)) throw DomainError("Omega: t must be nonnegative");
  if (t >= tail_.t0) {
    switch (tail_.kind) {
      case TailModel::Kind::none: return tail_.Omega0;
      case TailModel::Kind::stationary: return tail_.Omega0 + tail_.omega * (t - tail_.t0);
      case TailModel::Kind::power_law: {
        const double v = tail_.Omega0 + tail_.omega * tail_.t0 / (tail_.beta - 1.0) *
                                            (1.0 - std::pow(t / tail_.t0, 1.0 - tail_.beta));
        return std::min(v, Omega_inf_);
      }
    }
  }
  return panel_integral(panels_[find_panel(t)], table_.omega, table_.Omega, t);
}

double IntensityProfile::dOmega(double t) const {
  if (!(t >= 0.0)) throw DomainError("dOmega: t must be nonnegative");
  if (t >= tail_.t0) {
    switch (tail_.kind) {
      case TailModel::Kind::none: return tail_.dOmega0;
      case TailModel::Kind::stationary: return tail_.dOmega0 + tail_.domega * (t - tail_.t0);
      case TailModel::Kind::power_law:
        return tail_.dOmega0 + (dOmega_inf_ - tail_.dOmega0) * (1.0 - std::pow(t / tail_.t0, 1.0 - tail_.beta));
    }
  }
  return panel_integral(panels_[find_panel(t)], table_.domega, table_.dOmega, t);
}

double IntensityProfile::dOmega2(double t) const {
  if (!(t >= 0.0)) throw DomainError("dOmega2: t must be nonnegative");
  if (t >= tail_.t0) {
    switch (tail_.kind) {
      case TailModel::Kind::none: return tail_.dOmega2_0;
      case TailModel::Kind::stationary: {
        double v = tail_.dOmega2_0 + ratio_sq(tail_.domega, tail_.omega) * (t - tail_.t0);
        if (tail_.osc_sq > 0.0 && tail_.t0 > 0.0) v += tail_.osc_sq / tail_.omega * std::log(t / tail_.t0);
        return v;
      }
      case TailModel::Kind::power_law:
        return tail_.dOmega2_0 + ratio_sq(tail_.domega, tail_.omega) * (Omega(t) - tail_.Omega0);
    }
  }
  // Integrand (domega)^2/omega is interpolated through its node values.
  const Panel& p = panels_[find_panel(t)];
  std::vector<double> q(p.count());
  std::vector<double> local_F(p.count(), 0.0);
  for (std::size_t j = 0; j < p.count(); ++j) q[j] = ratio_sq(table_.domega[p.first + j], table_.omega[p.first + j]);
  Panel lp = p;
  lp.first = 0;
  return table_.dOmega2[p.first] + panel_integral(lp, q, local_F, t);
}

double IntensityProfile::invert_Omega(double u) const {
  if (!(u >= 0.0)) throw DomainError("invert_Omega: u must be nonnegative");
  if (u >= Omega_inf_) throw RangeError("invert_Omega: u at or beyond Omega(inf)");
  if (u == 0.0) return 0.0;
  if (u >= tail_.Omega0 && tail_.kind != TailModel::Kind::none) {
    const double du = u - tail_.Omega0;
    if (tail_.kind == TailModel::Kind::stationary) return tail_.t0 + du / tail_.omega;
    const double x = 1.0 - du * (tail_.beta - 1.0) / (tail_.omega * tail_.t0);
    if (!(x > 0.0)) throw RangeError("invert_Omega: u beyond the tail mass");
    return tail_.t0 * std::pow(x, 1.0 / (1.0 - tail_.beta));
  }
  // First panel whose end value reaches u.
  auto end_Omega = [&](const Panel& p) { return table_.Omega[p.first + p.count() - 1]; };
  auto it = std::partition_point(panels_.begin(), panels_.end(), [&](const Panel& p) { return end_Omega(p) < u; });
  if (it == panels_.end()) throw RangeError("invert_Omega: u beyond the tabulated range");
  const Panel& p = *it;
  double lo = p.t0, hi = p.t1;
  double flo = table_.Omega[p.first] - u, fhi = end_Omega(p) - u;
  double t = fhi > flo ? lo + (hi - lo) * (-flo) / (fhi - flo) : lo;
  const double tol = 1e-14 * std::max(1.0, u);
  for (int iter = 0; iter < 200; ++iter) {
    const double v = panel_integral(p, table_.omega, table_.Omega, t) - u;
    if (std::fabs(v) <= tol) break;
    if (v < 0.0) lo = t; else hi = t;
    const double w = panel_value(p, table_.omega, t);
    double next = w > 0.0 ? t - v / w : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    t = next;
  }
  return t;
}

IntensityProfile IntensityProfile::scaled(double factor) const {
  if (!(factor > 0.0)) throw DomainError("scaled: factor must be positive");
  IntensityProfile r = *this;
  for (auto* v : {&r.table_.omega, &r.table_.domega, &r.table_.Omega, &r.table_.dOmega, &r.table_.dOmega2})
    for (double& x : *v) x *= factor;
  r.tail_.Omega0 *= factor;
  r.tail_.dOmega0 *= factor;
  r.tail_.dOmega2_0 *= factor;
  r.tail_.omega *= factor;
  r.tail_.domega *= factor;
  r.tail_.osc_sq *= factor * factor;
  r.Omega_inf_ *= factor;
  r.dOmega_inf_ *= factor;
  r.beam_r0_ *= factor;
  return r;
}

// ---------------------------------------------------------------------------
// builders

std::vector<double> intensity_on_grid(const Scenario& scn, const TimeGrid& grid, DeltaRoute route) {
  scn.validate();
  if (scn.beam()) throw ConfigError("intensity_on_grid: beam mode has no finite grid solve");
  std::vector<double> w(grid.size(), 0.0);
  if (scn.a == 0.0) return w;
  if (!scn.delta_detector()) {
    const double gamma = scn.gamma();
    const ComplexSeries h = solve_volterra(gaussian_overlap_h0(scn, grid), gaussian_kernel_g(scn, grid), gamma);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = scn.navg * gamma * std::norm(h.values[i]);
    return w;
  }
  const DeltaParams dp(scn.a, scn.m);
  if (route == DeltaRoute::renewal) {
    const ComplexSeries f = solve_renewal(gaussian_free_wave(scn, grid), dp.d());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = scn.a * scn.navg * std::norm(f.values[i]);
    return w;
  }
  const MomentumState chi = gaussian_momentum_state(scn.p0, scn.x0, scn.dp);
  parallel_for(grid.size(), [&](std::size_t i) {
    w[i] = scn.a * scn.navg * std::norm(f_superposition(chi, grid.t(i), dp));
  });
  return w;
}

IntensityProfile build_profile(const Scenario& scn, const ProfileOptions& opt) {
  scn.validate();
  if (scn.beam()) return build_beam_profile(scn.p0, scn.r0, DeltaParams(scn.a, scn.m), opt);

  const TimeGrid grid(opt.t_max, opt.dt);
  const std::size_t n = grid.size();
  auto solve_at = [&](double p0) {
    Scenario s = scn;
    s.p0 = p0;
    return intensity_on_grid(s, grid, opt.delta_route);
  };
  const std::vector<double> w = solve_at(scn.p0);
  std::vector<double> dw(n, 0.0);
  PowerTail tail_plus, tail_minus;
  const double h = opt.fd_step;
  if (opt.derivatives) {
    const auto wp = solve_at(scn.p0 + h), wm = solve_at(scn.p0 - h);
    for (std::size_t i = 0; i < n; ++i) dw[i] = (wp[i] - wm[i]) / (2.0 * h);
    tail_plus = fit_power_tail(wp, grid);
    tail_minus = fit_power_tail(wm, grid);
    if (opt.fd_check) {
      const auto wp2 = solve_at(scn.p0 + 0.5 * h), wm2 = solve_at(scn.p0 - 0.5 * h);
      double diff = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        diff = std::max(diff, std::fabs((wp2[i] - wm2[i]) / h - dw[i]));
        scale = std::max(scale, std::fabs(dw[i]));
      }
      if (diff > 1e-4 * scale + 1e-300)
        throw ToleranceError("build_profile: p0 finite difference unstable under step halving", scale, diff);
    }
  }

  IntensityProfile prof;
  prof.mode_ = scn.delta_detector() ? ProfileMode::delta_finite : ProfileMode::finite_width;
  prof.navg_ = scn.navg;
  prof.has_derivatives_ = opt.derivatives;
  ProfileTable& tb = prof.table_;
  tb.t.resize(n);
  tb.weight.assign(n, 0.0);
  tb.omega = w;
  tb.domega = dw;
  tb.Omega.assign(n, 0.0);
  tb.dOmega.assign(n, 0.0);
  tb.dOmega2.assign(n, 0.0);
  const double dt = grid.dt;
  for (std::size_t i = 0; i < n; ++i) tb.t[i] = grid.t(i);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const bool cusp = i == 0 && scn.delta_detector();
    prof.panels_.push_back({tb.t[i], tb.t[i + 1], i,
                            cusp ? IntensityProfile::PanelKind::cusp : IntensityProfile::PanelKind::linear});
    const double wl = cusp ? dt / 3.0 : 0.5 * dt, wr = dt - wl;
    tb.weight[i] += wl;
    tb.weight[i + 1] += wr;
    tb.Omega[i + 1] = tb.Omega[i] + wl * w[i] + wr * w[i + 1];
    tb.dOmega[i + 1] = tb.dOmega[i] + wl * dw[i] + wr * dw[i + 1];
    tb.dOmega2[i + 1] = tb.dOmega2[i] + wl * ratio_sq(dw[i], w[i]) + wr * ratio_sq(dw[i + 1], w[i + 1]);
  }

  TailModel& tl = prof.tail_;
  tl.t0 = tb.t[n - 1];
  tl.Omega0 = tb.Omega[n - 1];
  tl.dOmega0 = tb.dOmega[n - 1];
  tl.dOmega2_0 = tb.dOmega2[n - 1];
  const PowerTail tail = fit_power_tail(w, grid);
  prof.Omega_inf_ = tl.Omega0;
  prof.dOmega_inf_ = tl.dOmega0;
  if (tail.valid) {
    tl.kind = TailModel::Kind::power_law;
    tl.beta = tail.beta;
    tl.omega = w[n - 1];
    tl.domega = dw[n - 1];
    prof.Omega_inf_ = std::min(scn.navg, tl.Omega0 + tail.mass);
    if (opt.derivatives && tail_plus.valid && tail_minus.valid)
      prof.dOmega_inf_ = tl.dOmega0 + (tail_plus.mass - tail_minus.mass) / (2.0 * h);
  } else {
    tl.kind = TailModel::Kind::none;
  }
  return prof;
}

IntensityProfile build_beam_profile(double p0, double r0, const DeltaParams& dp, const ProfileOptions& opt) {
  if (!(p0 > 0.0) || !(r0 > 0.0)) throw ConfigError("beam profile: p0 and r0 must be positive");
  const double period = 4.0 * pi * dp.m / (p0 * p0);
  const double width = 0.25 * period;
  double t_end = std::min(opt.beam_t_end, static_cast<double>(opt.beam_max_panels) * width);
  t_end = std::max(t_end, width);

  std::vector<double> edges{0.0};
  for (int k = 40; k >= 1; --k) edges.push_back(std::ldexp(width, -k));
  edges.push_back(width);
  const int uniform = static_cast<int>(std::ceil((t_end - width) / width - 1e-9));
  for (int k = 1; k <= uniform; ++k) edges.push_back(width + (t_end - width) * k / uniform);

  const ChebyshevPanel& cp = ChebyshevPanel::instance();
  constexpr std::size_t K = ChebyshevPanel::size;
  const std::size_t np = edges.size() - 1;
  IntensityProfile prof;
  prof.mode_ = ProfileMode::delta_beam;
  prof.navg_ = inf;
  prof.beam_params_ = dp;
  prof.beam_p0_ = p0;
  prof.beam_r0_ = r0;
  ProfileTable& tb = prof.table_;
  for (auto* v : {&tb.t, &tb.weight, &tb.omega, &tb.domega, &tb.Omega, &tb.dOmega, &tb.dOmega2})
    v->assign(np * K, 0.0);
  parallel_for(np, [&](std::size_t k) {
    const double a = edges[k], b = edges[k + 1];
    for (std::size_t j = 0; j < K; ++j) {
      const double t = a + 0.5 * (b - a) * (cp.node(static_cast<int>(j)) + 1.0);
      const BeamSample s = beam_sample(t, p0, r0, dp);
      tb.t[k * K + j] = t;
      tb.omega[k * K + j] = s.omega;
      tb.domega[k * K + j] = s.domega;
      tb.weight[k * K + j] = 0.5 * (b - a) * cp.weight(static_cast<int>(j));
    }
  });
  double O = 0.0, dO = 0.0, dO2 = 0.0;
  double q[K];
  for (std::size_t k = 0; k < np; ++k) {
    const std::size_t f = k * K;
    const double half = 0.5 * (edges[k + 1] - edges[k]);
    for (std::size_t j = 0; j < K; ++j) q[j] = ratio_sq(tb.domega[f + j], tb.omega[f + j]);
    for (std::size_t j = 0; j < K; ++j) {
      tb.Omega[f + j] = O + half * cp.cumulative(static_cast<int>(j), &tb.omega[f]);
      tb.dOmega[f + j] = dO + half * cp.cumulative(static_cast<int>(j), &tb.domega[f]);
      tb.dOmega2[f + j] = dO2 + half * cp.cumulative(static_cast<int>(j), q);
    }
    O = tb.Omega[f + K - 1];
    dO = tb.dOmega[f + K - 1];
    dO2 = tb.dOmega2[f + K - 1];
    prof.panels_.push_back({edges[k], edges[k + 1], f, IntensityProfile::PanelKind::chebyshev});
  }

  const BeamAsymptotes as = beam_asymptotes(p0, r0, dp);
  TailModel& tl = prof.tail_;
  tl.kind = TailModel::Kind::stationary;
  tl.t0 = edges.back();
  tl.Omega0 = O;
  tl.dOmega0 = dO;
  tl.dOmega2_0 = dO2;
  tl.omega = as.omega_inf;
  tl.domega = as.domega_inf;
  tl.osc_sq = 0.5 * as.domega_osc * as.domega_osc;
  prof.Omega_inf_ = inf;
  prof.dOmega_inf_ = as.domega_inf >= 0.0 ? inf : -inf;
  return prof;
}

IntensityProfile make_stationary_profile(double omega0, double domega0) {
  if (!(omega0 > 0.0)) throw DomainError("stationary profile: omega0 must be positive");
  IntensityProfile prof;
  prof.mode_ = ProfileMode::stationary;
  prof.navg_ = inf;
  prof.tail_.kind = TailModel::Kind::stationary;
  prof.tail_.omega = omega0;
  prof.tail_.domega = domega0;
  prof.Omega_inf_ = inf;
  prof.dOmega_inf_ = domega0 == 0.0 ? 0.0 : (domega0 > 0.0 ? inf : -inf);
  return prof;
}

}  // namespace arrival
