#pragma once

#include <complex>

// Bessel/Hankel evaluation, the Fourier transform of the sphere measure,
// and the outgoing Helmholtz fundamental solution.

namespace shl {

// Largest ambient dimension the special-function layer supports.
inline constexpr int kMaxDim = 26;

// Order nu stored as 2*nu so half-integers are exact.
struct Order {
  int twice_nu;

  static Order integer(int n) { return Order{2 * n}; }
  static Order half_odd(int twice) { return Order{twice}; }
  double value() const { return 0.5 * twice_nu; }
  bool is_half_integer() const { return twice_nu % 2 != 0; }
};

// J_nu(x), x >= 0. Half-integer orders 1/2 and 3/2 use the closed
// trigonometric forms; everything else goes through boost::math.
double bessel_j(Order nu, double x);

// Y_nu(x), x > 0.
double bessel_y(Order nu, double x);

// H^(1)_nu(x) = J_nu(x) + i Y_nu(x), x > 0.
std::complex<double> hankel1(Order nu, double x);

// Fourier transform of the surface measure of S^{m-1}:
//   (2 pi)^{-m/2} \int_{S^{m-1}} e^{i r w.e} dsigma(w)
// which equals r^{-(m-2)/2} J_{(m-2)/2}(r), real and even in r.
double sphere_ft(int m, double r);

// Phi(r) = (i/4) (2 pi r)^{(2-N)/2} H^(1)_{(N-2)/2}(r), r > 0.
std::complex<double> helmholtz_kernel(int N, double r);

}  // namespace shl
