#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "arrival/deltakernel.hpp"
#include "arrival/scenario.hpp"

namespace arrival {

/// Uniform time grid with node 0 at t = 0 and M = ceil(t_max / dt) + 1 nodes.
struct TimeGrid {
  double t_max;
  double dt;
  TimeGrid(double t_max_, double dt_);
  std::size_t size() const { return size_; }
  double t(std::size_t i) const { return static_cast<double>(i) * dt; }
  bool operator==(const TimeGrid& o) const { return t_max == o.t_max && dt == o.dt; }

 private:
  std::size_t size_;
};

/// Complex samples on a time grid.
struct ComplexSeries {
  TimeGrid grid;
  std::vector<std::complex<double>> values;
  explicit ComplexSeries(const TimeGrid& g) : grid(g), values(g.size()) {}
};

/// h0(t) = <phi_eps | exp(-i t H) chi> for the Gaussian detector state and Gaussian source.
ComplexSeries gaussian_overlap_h0(const Scenario& scn, const TimeGrid& grid);

/// g(t) = <phi_eps | exp(-i t H) phi_eps>, g(0) = 1.
ComplexSeries gaussian_kernel_g(const Scenario& scn, const TimeGrid& grid);

/// Solves h = h0 - (gamma/2) int_0^t g(t-s) h(s) ds (trapezoid rule, implicit diagonal).
ComplexSeries solve_volterra(const ComplexSeries& h0, const ComplexSeries& g, double gamma);

/// Solves f = f_free - (d / sqrt(pi)) int_0^t f(s) / sqrt(t-s) ds by product integration
/// against piecewise-linear f.
ComplexSeries solve_renewal(const ComplexSeries& f_free, std::complex<double> d);

/// Freely evolving Gaussian source at the detector position x = 0.
ComplexSeries gaussian_free_wave(const Scenario& scn, const TimeGrid& grid);

/// Freely evolving wave at x = 0 for a general momentum wavefunction (adaptive quadrature).
ComplexSeries free_wave(const MomentumState& chi, double m, const TimeGrid& grid);

/// CSV with columns t,re,im preceded by a "# quantity" line.
void write_series_csv(std::ostream& out, const ComplexSeries& s, const std::string& quantity);

}  // namespace arrival
