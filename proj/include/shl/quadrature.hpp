#pragma once

#include <stdexcept>
#include <string>
#include <vector>

// Quadrature node helpers shared by the extension and resolvent layers.

namespace shl {

// Raised when a quadrature budget cannot reach the requested tolerance.
struct AccuracyError : std::runtime_error {
  double achieved;
  AccuracyError(const std::string& what, double achieved_)
      : std::runtime_error(what), achieved(achieved_) {}
};

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

// n-point Gauss-Legendre rule on [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// n-point Gauss-Jacobi rule on [a, b] for the weight (b - x)^alpha,
// i.e. int_a^b f(x) (b-x)^alpha dx ~= sum w_i f(x_i).
QuadRule gauss_jacobi_right(int n, double a, double b, double alpha);

// Composite Gauss-Legendre rule over consecutive panels given by
// breakpoints (ascending), nodes_per_panel nodes on each panel.
QuadRule composite_legendre(const std::vector<double>& breaks,
                            int nodes_per_panel);

// Uniform breakpoints a = b_0 < ... < b_n = b with panel width <= max_width.
std::vector<double> uniform_breaks(double a, double b, double max_width);

}  // namespace shl
