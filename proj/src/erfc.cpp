#include "arrival/erfc.hpp"

#include <cfloat>
#include <cmath>

namespace arrival {

namespace {

using cld = std::complex<long double>;

constexpr long double two_over_sqrt_pi_l = 1.12837916709551257389615890312154517L;
constexpr double inv_sqrt_pi = 0.56418958354775628694807945156077259;

// Maclaurin series of erf in extended precision. Near the imaginary axis the terms
// share one sign, and for Re z < 2 the cancellation is bounded by e^{2 (Re z)^2}.
cld erf_series(cld z) {
  const cld z2 = z * z;
  cld term = z;
  cld sum = z;
  const long double r2 = std::norm(z);
  for (int n = 1; n < 20000; ++n) {
    term *= -z2 / static_cast<long double>(n);
    const cld add = term / static_cast<long double>(2 * n + 1);
    sum += add;
    if (n > r2 && std::abs(add) <= 1e-21L * std::abs(sum)) break;
  }
  return two_over_sqrt_pi_l * sum;
}

// Laplace continued fraction for erfcx, Re z >= 2 and |z| >= 3 (modified Lentz).
std::complex<double> erfcx_cf(std::complex<double> z) {
  constexpr double tiny = 1e-300;
  std::complex<double> f = z;
  std::complex<double> c = z;
  std::complex<double> d = 0.0;
  for (int k = 1; k < 5000; ++k) {
    const double ak = 0.5 * k;
    d = z + ak * d;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    c = z + ak / c;
    if (std::abs(c) < tiny) c = tiny;
    const std::complex<double> delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return inv_sqrt_pi / f;
}

bool use_cf(std::complex<double> z) { return z.real() >= 2.0 && std::abs(z) >= 3.0; }

// Right half-plane evaluation: returns erfcx(z) in extended precision together with
// erfc(z) when the series route produced it directly.
cld erfcx_right(std::complex<double> z) {
  if (use_cf(z)) {
    const std::complex<double> w = erfcx_cf(z);
    return cld(w.real(), w.imag());
  }
  const cld zl(z.real(), z.imag());
  return std::exp(zl * zl) * (1.0L - erf_series(zl));
}

std::complex<double> to_double(cld v) {
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

// Representable without overflow or underflow into the subnormal range.
bool finite_double(cld v) {
  const long double r = std::abs(v);
  return r <= DBL_MAX && (r == 0.0L || r >= DBL_MIN);
}

}  // namespace

std::complex<double> erfcx_c(std::complex<double> z) {
  if (z.real() >= 0.0) return to_double(erfcx_right(z));
  const cld zl(z.real(), z.imag());
  const cld v = 2.0L * std::exp(zl * zl) - erfcx_right(-z);
  return to_double(v);
}

ErfcValue erfc_c(std::complex<double> z) {
  const cld zl(z.real(), z.imag());
  cld scaled;
  cld plain;
  if (z.real() >= 0.0) {
    if (!use_cf(z)) {
      plain = 1.0L - erf_series(zl);
      if (finite_double(plain)) return {to_double(plain), false};
      return {to_double(std::exp(zl * zl) * plain), true};
    }
    scaled = erfcx_right(z);
    plain = std::exp(-zl * zl) * scaled;
  } else {
    const cld ez2 = std::exp(zl * zl);
    const cld right = erfcx_right(-z);  // erfcx(-z)
    scaled = 2.0L * ez2 - right;
    plain = 2.0L - std::exp(-zl * zl) * right;
  }
  if (finite_double(plain)) return {to_double(plain), false};
  return {to_double(scaled), true};
}

void erfcx_derivatives(std::complex<double> z, int order, std::complex<double>* out) {
  out[0] = erfcx_c(z);
  if (order < 1) return;
  out[1] = 2.0 * z * out[0] - 2.0 * inv_sqrt_pi;
  for (int k = 1; k < order; ++k) out[k + 1] = 2.0 * z * out[k] + 2.0 * k * out[k - 1];
}

}  // namespace arrival
