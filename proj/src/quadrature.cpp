#include "arrival/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>

namespace arrival {

const GaussRule& gauss_legendre_20() {
  static const GaussRule rule = [] {
    using G = boost::math::quadrature::gauss<double, 20>;
    GaussRule r;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    for (std::size_t i = ab.size(); i-- > 0;) {
      r.x.push_back(-ab[i]);
      r.w.push_back(wt[i]);
    }
    for (std::size_t i = 0; i < ab.size(); ++i) {
      r.x.push_back(ab[i]);
      r.w.push_back(wt[i]);
    }
    return r;
  }();
  return rule;
}

const ChebyshevPanel& ChebyshevPanel::instance() {
  static const ChebyshevPanel panel;
  return panel;
}

ChebyshevPanel::ChebyshevPanel() {
  constexpr double pi = 3.14159265358979323846;
  constexpr int K = order;
  for (int j = 0; j <= K; ++j) {
    x_[j] = -std::cos(pi * j / K);
    bw_[j] = (j % 2 == 0 ? 1.0 : -1.0) * ((j == 0 || j == K) ? 0.5 : 1.0);
  }
  // Cardinal function l_j has Chebyshev coefficients c_k = (2/K) T_k(x_j) / (e_j e_k),
  // e = 2 at the ends. Integrate term by term from -1.
  auto T = [](int k, double x) { return std::cos(k * std::acos(std::fmax(-1.0, std::fmin(1.0, x)))); };
  auto intT = [&](int k, double x) {
    if (k == 0) return x + 1.0;
    if (k == 1) return 0.5 * (x * x - 1.0);
    const double hi = T(k + 1, x) / (k + 1) - T(k - 1, x) / (k - 1);
    const double lo = T(k + 1, -1.0) / (k + 1) - T(k - 1, -1.0) / (k - 1);
    return 0.5 * (hi - lo);
  };
  for (int j = 0; j <= K; ++j) {
    double c[K + 1];
    const double ej = (j == 0 || j == K) ? 2.0 : 1.0;
    for (int k = 0; k <= K; ++k) {
      const double ek = (k == 0 || k == K) ? 2.0 : 1.0;
      c[k] = 2.0 / K * T(k, x_[j]) / (ej * ek);
    }
    for (int i = 0; i <= K; ++i) {
      double s = 0.0;
      for (int k = 0; k <= K; ++k) s += c[k] * intT(k, x_[i]);
      q_[i][j] = s;
    }
  }
  for (int j = 0; j <= K; ++j) q_[0][j] = 0.0;
}

double ChebyshevPanel::cumulative(int i, const double* f) const {
  double s = 0.0;
  for (int j = 0; j < size; ++j) s += q_[i][j] * f[j];
  return s;
}

double ChebyshevPanel::interpolate(double s, const double* f) const {
  double num = 0.0, den = 0.0;
  for (int j = 0; j < size; ++j) {
    const double d = s - x_[j];
    if (d == 0.0) return f[j];
    const double c = bw_[j] / d;
    num += c * f[j];
    den += c;
  }
  return num / den;
}

double ChebyshevPanel::integral_to(double s, const double* f) const {
  // Map [-1, s] to the reference panel and integrate the interpolant with Gauss nodes.
  const GaussRule& g = gauss_legendre_20();
  const double half = 0.5 * (s + 1.0);
  double acc = 0.0;
  for (std::size_t k = 0; k < g.x.size(); ++k) {
    const double x = -1.0 + half * (g.x[k] + 1.0);
    acc += g.w[k] * interpolate(x, f);
  }
  return acc * half;
}

double integrate_smooth(const std::function<double(double)>& f, double a, double b, double h,
                        double uniform_len) {
  const GaussRule& g = gauss_legendre_20();
  auto panel = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t k = 0; k < g.x.size(); ++k) s += g.w[k] * f(c + r * g.x[k]);
    return s * r;
  };
  double total = 0.0;
  double lo = a;
  const double uniform_end = a + uniform_len;
  while (lo < b) {
    double width = lo < uniform_end ? h : 0.15 * (lo - a);
    double hi = std::fmin(lo + width, b);
    if (lo < uniform_end && hi > uniform_end) hi = std::fmin(uniform_end, b);
    total += panel(lo, hi);
    lo = hi;
    if (lo - a > 1e18 * std::fmax(1.0, std::fabs(a))) break;
  }
  return total;
}

}  // namespace arrival
