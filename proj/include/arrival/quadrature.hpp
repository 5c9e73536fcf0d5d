#pragma once

#include <functional>
#include <vector>

namespace arrival {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_legendre_20();

/// Chebyshev-Lobatto panel of fixed order on [-1, 1] (ascending nodes),
/// with the cumulative-integration matrix and barycentric weights.
class ChebyshevPanel {
 public:
  static constexpr int order = 16;
  static constexpr int size = order + 1;
  static const ChebyshevPanel& instance();

  double node(int j) const { return x_[j]; }
  /// Integral from -1 to node i of the interpolant through values f.
  double cumulative(int i, const double* f) const;
  /// Clenshaw-Curtis weight of node j over [-1, 1].
  double weight(int j) const { return q_[order][j]; }
  /// Barycentric interpolation at s in [-1, 1].
  double interpolate(double s, const double* f) const;
  /// Integral from -1 to s of the interpolant.
  double integral_to(double s, const double* f) const;

 private:
  ChebyshevPanel();
  double x_[size];
  double bw_[size];
  double q_[size][size];
};

/// Integral of a smooth f over [a, b] (b may be +infinity) on panels that are uniform
/// (width `h`) up to a + `uniform_len` and grow geometrically beyond, 20-point Gauss
/// per panel. Suited to Gamma-kernel-like integrands in the u = Omega variable.
double integrate_smooth(const std::function<double(double)>& f, double a, double b,
                        double h = 0.5, double uniform_len = 64.0);

}  // namespace arrival
