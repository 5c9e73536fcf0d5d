#pragma once

#include <complex>

namespace arrival {

/// erfc(z), or the scaled e^{z^2} erfc(z) when the plain value leaves the double range.
struct ErfcValue {
  std::complex<double> value;
  bool scaled = false;  ///< true: value holds e^{z^2} erfc(z)
};

/// Complementary error function of a complex argument.
ErfcValue erfc_c(std::complex<double> z);

/// Scaled complementary error function e^{z^2} erfc(z).
std::complex<double> erfcx_c(std::complex<double> z);

/// Derivatives w^(k)(z) of w = erfcx for k = 0..order, written to out[0..order].
void erfcx_derivatives(std::complex<double> z, int order, std::complex<double>* out);

}  // namespace arrival
