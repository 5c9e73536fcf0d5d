#include "arrival/propagate.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "arrival/errors.hpp"

namespace arrival {

namespace {

using cd = std::complex<double>;
constexpr double pi = 3.14159265358979323846;

// Gaussian integral of exp(-A p^2 + B p + C0) over the real line.
cd gaussian_integral(cd A, cd B, double C0) {
  return std::sqrt(pi / A) * std::exp(B * B / (4.0 * A) + C0);
}

// sum_{k=1}^{i-1} w[k] x[i-k] with x held reversed (xr[n-1-j] = x_j).
cd convolve(const double* wr, const double* wi, const double* xr, const double* xi, std::size_t i,
            std::size_t n) {
  double sr = 0.0, si = 0.0;
  const std::size_t off = n - 1 - i;
#pragma omp simd reduction(+ : sr, si)
  for (std::size_t k = 1; k < i; ++k) {
    const double a = wr[k], b = wi[k], c = xr[off + k], e = xi[off + k];
    sr += a * c - b * e;
    si += a * e + b * c;
  }
  return {sr, si};
}

void require_same_grid(const ComplexSeries& a, const ComplexSeries& b, const char* who) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size())
    throw DomainError(std::string(who) + ": grid mismatch");
}

}  // namespace

TimeGrid::TimeGrid(double t_max_, double dt_) : t_max(t_max_), dt(dt_) {
  if (!(dt > 0.0) || !(t_max > 0.0)) throw DomainError("TimeGrid: t_max and dt must be positive");
  size_ = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9)) + 1;
}

ComplexSeries gaussian_overlap_h0(const Scenario& scn, const TimeGrid& grid) {
  if (!(scn.eps > 0.0)) throw ConfigError("gaussian_overlap_h0: requires a finite-width detector");
  const double eps = scn.eps, dp = scn.dp;
  const double pref = std::sqrt(2.0 * eps / dp) / std::sqrt(2.0 * pi);
  const cd B(scn.p0 / (2.0 * dp * dp), -scn.x0);
  const double C0 = -scn.p0 * scn.p0 / (4.0 * dp * dp);
  ComplexSeries out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cd A(eps * eps + 1.0 / (4.0 * dp * dp), grid.t(i) / (2.0 * scn.m));
    out.values[i] = pref * gaussian_integral(A, B, C0);
  }
  return out;
}

ComplexSeries gaussian_kernel_g(const Scenario& scn, const TimeGrid& grid) {
  if (!(scn.eps > 0.0)) throw ConfigError("gaussian_kernel_g: requires a finite-width detector");
  ComplexSeries out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.values[i] = 1.0 / std::sqrt(cd(1.0, grid.t(i) / (4.0 * scn.m * scn.eps * scn.eps)));
  return out;
}

ComplexSeries solve_volterra(const ComplexSeries& h0, const ComplexSeries& g, double gamma) {
  require_same_grid(h0, g, "solve_volterra");
  const std::size_t n = h0.values.size();
  const double dt = h0.grid.dt;
  std::vector<double> gr(n), gi(n), hr(n), hi(n);
  for (std::size_t k = 0; k < n; ++k) {
    gr[k] = g.values[k].real();
    gi[k] = g.values[k].imag();
  }
  ComplexSeries h(h0.grid);
  const double c = 0.5 * gamma * dt;
  const cd diag = 1.0 + 0.5 * c * g.values[0];
  for (std::size_t i = 0; i < n; ++i) {
    cd rhs = h0.values[i];
    if (i > 0) rhs -= c * (0.5 * g.values[i] * h.values[0] + convolve(gr.data(), gi.data(), hr.data(), hi.data(), i, n));
    const cd v = i == 0 ? h0.values[0] : rhs / diag;
    h.values[i] = v;
    hr[n - 1 - i] = v.real();
    hi[n - 1 - i] = v.imag();
  }
  return h;
}

ComplexSeries solve_renewal(const ComplexSeries& f_free, cd d) {
  const std::size_t n = f_free.values.size();
  const double dt = f_free.grid.dt;
  const double sdt = std::sqrt(dt);
  // Exact moments of 1/sqrt(u) against the linear hat pieces on [k-1, k] (units of dt).
  std::vector<double> A(n + 1, 0.0), B(n + 2, 0.0);
  for (std::size_t k = 1; k <= n + 1; ++k) {
    const double kd = static_cast<double>(k);
    const double sk = std::sqrt(kd), sk1 = std::sqrt(kd - 1.0);
    const double d1 = 1.0 / (sk + sk1);
    const double d3 = (3.0 * kd * kd - 3.0 * kd + 1.0) / (kd * sk + (kd - 1.0) * sk1);
    const double left = sdt * ((2.0 / 3.0) * d3 - 2.0 * (kd - 1.0) * d1);
    const double right = sdt * (2.0 * kd * d1 - (2.0 / 3.0) * d3);
    if (k <= n) A[k] = left;
    B[k] = right;
  }
  std::vector<double> wr(n, 0.0), wi(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) wr[k] = A[k] + B[k + 1];
  const cd c = d / std::sqrt(pi);
  const cd diag = 1.0 + c * B[1];
  std::vector<double> fr(n), fi(n);
  ComplexSeries f(f_free.grid);
  for (std::size_t i = 0; i < n; ++i) {
    cd v = f_free.values[i];
    if (i > 0) {
      const cd hist = A[i] * f.values[0] + convolve(wr.data(), wi.data(), fr.data(), fi.data(), i, n);
      v = (v - c * hist) / diag;
    }
    f.values[i] = v;
    fr[n - 1 - i] = v.real();
    fi[n - 1 - i] = v.imag();
  }
  return f;
}

ComplexSeries gaussian_free_wave(const Scenario& scn, const TimeGrid& grid) {
  const double dp = scn.dp;
  const double pref = 1.0 / (std::sqrt(2.0 * pi) * std::sqrt(dp) * std::pow(2.0 * pi, 0.25));
  const cd B(scn.p0 / (2.0 * dp * dp), -scn.x0);
  const double C0 = -scn.p0 * scn.p0 / (4.0 * dp * dp);
  ComplexSeries out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cd A(1.0 / (4.0 * dp * dp), grid.t(i) / (2.0 * scn.m));
    out.values[i] = pref * gaussian_integral(A, B, C0);
  }
  return out;
}

ComplexSeries free_wave(const MomentumState& chi, double m, const TimeGrid& grid) {
  ComplexSeries out(grid);
  const double pmax = std::max(std::fabs(chi.p_lo), std::fabs(chi.p_hi));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.t(i);
    auto f = [&](double p) { return std::polar(1.0, -t * p * p / (2.0 * m)) * chi.amplitude(p); };
    const double rate = chi.position + t * pmax / m;
    const int pieces = std::max(1, static_cast<int>(std::ceil((chi.p_hi - chi.p_lo) * rate / (2.0 * pi))));
    cd acc = 0.0;
    for (int j = 0; j < pieces; ++j) {
      const double a = chi.p_lo + (chi.p_hi - chi.p_lo) * j / pieces;
      const double b = chi.p_lo + (chi.p_hi - chi.p_lo) * (j + 1) / pieces;
      acc += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 10, 1e-12);
    }
    out.values[i] = acc / std::sqrt(2.0 * pi);
  }
  return out;
}

void write_series_csv(std::ostream& out, const ComplexSeries& s, const std::string& quantity) {
  out << "# " << quantity << "\n"
      << "t,re,im\n";
  char buf[96];
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.grid.t(i), s.values[i].real(), s.values[i].imag());
    out << buf;
  }
}

}  // namespace arrival
