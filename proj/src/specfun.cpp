#include "shl/specfun.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace shl {

namespace {

void check_order(Order nu) {
  if (nu.twice_nu < 0 || nu.twice_nu > kMaxDim - 2) {
    std::ostringstream sout;
    sout << "order " << 0.5 * nu.twice_nu << " outside supported range [0, "
         << 0.5 * (kMaxDim - 2) << "]";
    throw std::domain_error(sout.str());
  }
}

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

double bessel_j(Order nu, double x) {
  check_order(nu);
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error("bessel_j: x must be finite and >= 0");
  }
  if (x == 0.0) return nu.twice_nu == 0 ? 1.0 : 0.0;
  if (nu.twice_nu == 1) return std::sqrt(2.0 / (kPi * x)) * std::sin(x);
  // sin(x)/x - cos(x) cancels catastrophically for tiny x; series instead
  if (nu.twice_nu == 3 && x >= 1e-2)
    return std::sqrt(2.0 / (kPi * x)) * (std::sin(x) / x - std::cos(x));
  return boost::math::cyl_bessel_j(nu.value(), x);
}

double bessel_y(Order nu, double x) {
  check_order(nu);
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("bessel_y: x must be finite and > 0");
  }
  switch (nu.twice_nu) {
    case 1:
      return -std::sqrt(2.0 / (kPi * x)) * std::cos(x);
    case 3:
      return -std::sqrt(2.0 / (kPi * x)) * (std::cos(x) / x + std::sin(x));
    default:
      return boost::math::cyl_neumann(nu.value(), x);
  }
}

std::complex<double> hankel1(Order nu, double x) {
  return {bessel_j(nu, x), bessel_y(nu, x)};
}

double sphere_ft(int m, double r) {
  if (m < 1 || m > kMaxDim) {
    throw std::domain_error("sphere_ft: dimension m out of range");
  }
  r = std::fabs(r);  // even in r
  if (m == 1) return 2.0 / std::sqrt(2.0 * kPi) * std::cos(r);
  const double nu = 0.5 * (m - 2);
  if (r < 1e-6) {
    // two-term Taylor continuation of r^{-nu} J_nu(r)
    const double lead = std::pow(0.5, nu) / boost::math::tgamma(nu + 1.0);
    return lead * (1.0 - r * r / (4.0 * (nu + 1.0)));
  }
  return std::pow(r, -nu) * bessel_j(Order{m - 2}, r);
}

std::complex<double> helmholtz_kernel(int N, double r) {
  if (N < 3 || N > kMaxDim) {
    throw std::domain_error("helmholtz_kernel: dimension out of range");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::domain_error("helmholtz_kernel: r must be finite and > 0");
  }
  const std::complex<double> i(0.0, 1.0);
  return 0.25 * i * std::pow(2.0 * kPi * r, 0.5 * (2 - N)) *
         hankel1(Order{N - 2}, r);
}

}  // namespace shl
