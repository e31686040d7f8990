#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "shl/specfun.hpp"

using namespace shl;

namespace {

const double PI = 3.14159265358979323846;

// truncated power series, independent of the library backend
double series_j(int n, double x, int terms) {
  double sum = 0.0, fact_m = 1.0;
  for (int m = 0; m < terms; ++m) {
    if (m > 0) fact_m *= m;
    double fact_mn = 1.0;
    for (int i = 1; i <= m + n; ++i) fact_mn *= i;
    double term = std::pow(-1.0, m) / (fact_m * fact_mn) *
                  std::pow(0.5 * x, 2 * m + n);
    sum += term;
  }
  return sum;
}

// latitude-reduced surface quadrature for the sphere transform, m >= 2
double sphere_ft_oracle(int m, double r) {
  int n = 40000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double th = PI * (i + 0.5) / n;
    acc += std::cos(r * std::cos(th)) * std::pow(std::sin(th), m - 2);
  }
  acc *= PI / n;
  if (m == 2) return acc / PI;  // the latitude integral covers half the circle
  double ring = 2.0 * std::pow(PI, 0.5 * (m - 1)) / std::tgamma(0.5 * (m - 1));
  return std::pow(2.0 * PI, -0.5 * m) * ring * acc;
}

double dj(Order nu, double x) {  // J' via the downward recurrence form
  return nu.value() / x * bessel_j(nu, x) - bessel_j(Order{nu.twice_nu + 2}, x);
}

double dy(Order nu, double x) {
  return nu.value() / x * bessel_y(nu, x) - bessel_y(Order{nu.twice_nu + 2}, x);
}

}  // namespace

TEST_CASE("bessel_j basic values") {
  CHECK(bessel_j(Order::integer(0), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(bessel_j(Order::half_odd(1), PI)) < 1e-12);
  CHECK(bessel_j(Order::integer(1), 1.0) ==
        doctest::Approx(series_j(1, 1.0, 30)).epsilon(1e-10));
  CHECK(bessel_j(Order::integer(1), 1.0) ==
        doctest::Approx(0.4400505857).epsilon(1e-9));
  CHECK_THROWS_AS(bessel_j(Order::integer(0), -1.0), std::domain_error);
}

TEST_CASE("bessel_j against the series oracle at moderate arguments") {
  for (int n = 0; n <= 5; ++n)
    for (double x : {0.5, 1.0, 2.0, 4.0, 7.0}) {
      double ref = series_j(n, x, 40);
      CHECK(bessel_j(Order::integer(n), x) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("half-integer closed forms") {
  for (double x : {0.3, 1.0, 5.0, 40.0}) {
    CHECK(bessel_j(Order::half_odd(1), x) ==
          doctest::Approx(std::sqrt(2.0 / (PI * x)) * std::sin(x)).epsilon(1e-13));
    CHECK(bessel_y(Order::half_odd(1), x) ==
          doctest::Approx(-std::sqrt(2.0 / (PI * x)) * std::cos(x)).epsilon(1e-13));
    CHECK(bessel_j(Order::half_odd(3), x) ==
          doctest::Approx(std::sqrt(2.0 / (PI * x)) *
                          (std::sin(x) / x - std::cos(x))).epsilon(1e-12));
  }
}

TEST_CASE("hankel1 values and Wronskian") {
  auto h = hankel1(Order::half_odd(1), PI);
  CHECK(std::abs(h.real()) < 1e-12);
  CHECK(h.imag() == doctest::Approx(std::sqrt(2.0) / PI).epsilon(1e-12));

  // J1 Y1' - J1' Y1 = 2/(pi x) at x = 1
  Order one = Order::integer(1);
  double w = bessel_j(one, 1.0) * dy(one, 1.0) - dj(one, 1.0) * bessel_y(one, 1.0);
  CHECK(w == doctest::Approx(2.0 / PI).epsilon(1e-10));

  CHECK(std::abs(hankel1(Order::integer(0), 100.0)) ==
        doctest::Approx(std::sqrt(2.0 / (100.0 * PI))).epsilon(0.01));
  CHECK_THROWS_AS(hankel1(Order::integer(0), 0.0), std::domain_error);
}

TEST_CASE("Wronskian at random orders and arguments") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> xs(0.1, 500.0);
  std::uniform_int_distribution<int> orders(0, 22);  // nu+1 must stay in range
  for (int trial = 0; trial < 100; ++trial) {
    Order nu{orders(rng)};
    double x = xs(rng);
    double w = bessel_j(nu, x) * dy(nu, x) - dj(nu, x) * bessel_y(nu, x);
    CHECK(w == doctest::Approx(2.0 / (PI * x)).epsilon(1e-9));
  }
}

TEST_CASE("sphere_ft closed forms and limits") {
  CHECK(sphere_ft(2, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (double r : {0.5, 2.0, 9.0})
    CHECK(sphere_ft(2, r) == doctest::Approx(bessel_j(Order::integer(0), r)).epsilon(1e-13));
  CHECK(std::abs(sphere_ft(3, PI)) < 1e-12);
  for (double r : {0.1, 1.0, 4.0, 20.0})
    CHECK(sphere_ft(3, r) ==
          doctest::Approx(std::sqrt(2.0 / PI) * std::sin(r) / r).epsilon(1e-12));
  // small-argument continuation is continuous across the cutoff
  CHECK(sphere_ft(5, 9.9e-7) == doctest::Approx(sphere_ft(5, 1.01e-6)).epsilon(1e-9));
  CHECK_THROWS_AS(sphere_ft(0, 1.0), std::domain_error);
  CHECK_THROWS_AS(sphere_ft(kMaxDim + 1, 1.0), std::domain_error);
}

TEST_CASE("sphere_ft against direct surface quadrature") {
  CHECK(sphere_ft(4, 2.0) == doctest::Approx(sphere_ft_oracle(4, 2.0)).epsilon(1e-8));
  for (int m = 3; m <= 4; ++m)
    for (double r = 0.0; r <= 50.0; r += 7.3)
      CHECK(std::abs(sphere_ft(m, r) - sphere_ft_oracle(m, r)) < 1e-8);
}

TEST_CASE("sphere_ft two-point sphere") {
  for (double r : {0.0, 1.0, 3.7})
    CHECK(sphere_ft(1, r) ==
          doctest::Approx(2.0 * std::cos(r) / std::sqrt(2.0 * PI)).epsilon(1e-13));
}

TEST_CASE("helmholtz_kernel closed form in dimension 3") {
  auto v = helmholtz_kernel(3, 1.0);
  CHECK(v.real() == doctest::Approx(std::cos(1.0) / (4 * PI)).epsilon(1e-5));
  CHECK(v.imag() == doctest::Approx(std::sin(1.0) / (4 * PI)).epsilon(1e-5));
  for (double r = 0.01; r <= 100.0; r *= 3.1) {
    std::complex<double> lhs =
        helmholtz_kernel(3, r) * 4.0 * PI * r *
        std::exp(std::complex<double>(0.0, -r));
    CHECK(std::abs(lhs - 1.0) < 1e-10);
  }
  CHECK_THROWS_AS(helmholtz_kernel(3, 0.0), std::domain_error);
}

TEST_CASE("helmholtz_kernel small-argument amplitude in dimension 4") {
  double amp = std::abs(helmholtz_kernel(4, 0.01)) * std::pow(0.01, 2);
  double ref = std::tgamma(1.0) / (4.0 * std::pow(PI, 2.0));
  CHECK(amp == doctest::Approx(ref).epsilon(0.02));
}

TEST_CASE("sphere transform decay envelope stays bounded") {
  for (int m = 2; m <= 8; ++m) {
    double sup_near = 0.0, sup_far = 0.0;
    for (int i = 0; i <= 200000; ++i) {
      double r = 1e4 * i / 200000.0;
      double v = std::pow(1.0 + r, 0.5 * (m - 1)) * std::abs(sphere_ft(m, r));
      sup_far = std::max(sup_far, v);
      if (r <= 100.0) sup_near = std::max(sup_near, v);
    }
    CHECK(sup_far <= 2.0 * sup_near);
  }
}
