#pragma once

#include <complex>
#include <functional>

namespace arrival {

/// Delta-detector parameters: strength a and mass m.
struct DeltaParams {
  double a;
  double m;
  DeltaParams(double a_, double m_);
  /// alpha = a m / 2 (momentum units).
  double alpha() const { return 0.5 * a * m; }
  /// d = (a sqrt(m) / 4)(1 - i), the renewal-equation coefficient.
  std::complex<double> d() const;
};

/// T_p = |p| / (|p| + alpha).
double transmission_T(double p, const DeltaParams& dp);

/// Transient remainder R_p(t); tends to zero as t^{-3/2}.
std::complex<double> remainder_R(double p, double t, const DeltaParams& dp);

/// Monochromatic solution at the detector, (2 pi)^{-1/2} (T_p + R_p(t)) e^{-i t p^2 / 2m}.
std::complex<double> f_p(double p, double t, const DeltaParams& dp);

/// Solution of the renewal equation with unit drive, e^{d^2 t} erfc(d sqrt t).
std::complex<double> kernel_g(double t, const DeltaParams& dp);

/// Momentum-space wavefunction restricted to the window [p_lo, p_hi].
struct MomentumState {
  std::function<std::complex<double>(double)> amplitude;
  double p_lo;
  double p_hi;
  double position = 0.0;  ///< |d phase / dp| of the amplitude (source distance), for panel sizing
};

/// Gaussian source of mean momentum p0 at x0 with width dp, truncated to p0 +- 10 dp.
MomentumState gaussian_momentum_state(double p0, double x0, double dp);

struct SuperpositionOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
};

/// f(t) = integral of f_p(t) chi(p) dp by adaptive Gauss-Kronrod panels.
/// Throws ToleranceError with the achieved estimate when the tolerance is not met.
std::complex<double> f_superposition(const MomentumState& chi, double t, const DeltaParams& dp,
                                     const SuperpositionOptions& opt = {});

/// Beam intensity and its p0-derivative at one time.
struct BeamSample {
  double omega;
  double domega;
};

double beam_intensity(double t, double p0, double r0, const DeltaParams& dp);
double beam_intensity_dp(double t, double p0, double r0, const DeltaParams& dp);
BeamSample beam_sample(double t, double p0, double r0, const DeltaParams& dp);

/// Omega(t) of the beam by direct Gauss-Legendre quadrature (sqrt t substitution near 0).
double beam_integrated_intensity(double t, double p0, double r0, const DeltaParams& dp);

struct BeamAsymptotes {
  double omega_inf;     ///< a r0 p0^2 / (alpha + p0)^2
  double domega_inf;    ///< a r0 a m p0 / (alpha + p0)^3
  double omega_c0;      ///< omega ~ c0 + c1 sqrt t + c2 t
  double omega_c1;
  double omega_c2;
  double domega_c32;    ///< domega ~ c32 t^{3/2} at small t
  double domega_osc;    ///< amplitude of the oscillating t^{-1/2} term of domega at large t
  double period;        ///< oscillation period 4 pi m / p0^2
};

BeamAsymptotes beam_asymptotes(double p0, double r0, const DeltaParams& dp);

}  // namespace arrival
