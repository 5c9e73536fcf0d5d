// Test-side oracle: int_0^t f(s) / sqrt(t - s) ds, split at t/2. s = w^2 on the left half absorbs
// sqrt(s) behaviour of f, s = t - v^2 on the right half removes the kernel singularity.
// Composite 20-point Gauss-Legendre in w and v.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace oracle {

inline const std::array<double, 20>& gl20_nodes() {
  static const std::array<double, 20> x = [] {
    std::array<double, 20> r{};
    // Newton on P_20 from Chebyshev initial guesses.
    for (int i = 0; i < 20; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / 20.5);
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= 20; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        const double dp = 20.0 * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-16) break;
      }
      r[i] = z;
    }
    return r;
  }();
  return x;
}

inline double gl20_weight(double z) {
  double p0 = 1.0, p1 = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double p2 = p1;
    p1 = p0;
    p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
  }
  const double dp = 20.0 * (z * p0 - p1) / (z * z - 1.0);
  return 2.0 / ((1.0 - z * z) * dp * dp);
}

/// Composite Gauss-Legendre integral of f over [a, b] with `panels` equal panels.
template <class F>
auto gauss(F&& f, double a, double b, int panels) {
  using R = decltype(f(a));
  R acc{};
  for (int j = 0; j < panels; ++j) {
    const double lo = a + (b - a) * j / panels, hi = a + (b - a) * (j + 1) / panels;
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    R s{};
    for (double z : gl20_nodes()) s += gl20_weight(z) * f(c + r * z);
    acc += s * r;
  }
  return acc;
}

template <class F>
std::complex<double> abel(F&& f, double t, int panels_per_unit = 6) {
  const double V = std::sqrt(0.5 * t);
  const int panels = std::max(4, static_cast<int>(std::ceil(panels_per_unit * V)));
  const auto left = gauss([&](double w) { return std::complex<double>(2.0 * w * f(w * w)) / std::sqrt(t - w * w); },
                          0.0, V, panels);
  const auto right = gauss([&](double v) { return std::complex<double>(2.0 * f(t - v * v)); }, 0.0, V, panels);
  return left + right;
}

}  // namespace oracle
