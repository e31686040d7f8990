#include "shl/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace shl {

namespace {

// GSL tables for a given n are cached; nodes on [0,1].
const std::vector<std::pair<double, double>>& legendre_unit(int n) {
  static std::mutex mtx;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  gsl_integration_glfixed_table* t =
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
  std::vector<std::pair<double, double>> nodes(n);
  for (int i = 0; i < n; ++i) {
    double xi, wi;
    gsl_integration_glfixed_point(0.0, 1.0, static_cast<std::size_t>(i), &xi,
                                  &wi, t);
    nodes[i] = {xi, wi};
  }
  gsl_integration_glfixed_table_free(t);
  return cache.emplace(n, std::move(nodes)).first->second;
}

}  // namespace

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1 || !(b > a)) throw std::invalid_argument("gauss_legendre: bad rule");
  const auto& unit = legendre_unit(n);
  QuadRule r;
  r.x.reserve(n);
  r.w.reserve(n);
  const double h = b - a;
  for (const auto& [xi, wi] : unit) {
    r.x.push_back(a + h * xi);
    r.w.push_back(h * wi);
  }
  return r;
}

QuadRule gauss_jacobi_right(int n, double a, double b, double alpha) {
  if (n < 1 || !(b > a) || alpha <= -1.0) {
    throw std::invalid_argument("gauss_jacobi_right: bad rule");
  }
  gsl_integration_fixed_workspace* ws = gsl_integration_fixed_alloc(
      gsl_integration_fixed_jacobi, static_cast<std::size_t>(n), a, b, alpha,
      0.0);
  if (!ws) throw std::runtime_error("gauss_jacobi_right: allocation failed");
  QuadRule r;
  r.x.assign(gsl_integration_fixed_nodes(ws),
             gsl_integration_fixed_nodes(ws) + n);
  r.w.assign(gsl_integration_fixed_weights(ws),
             gsl_integration_fixed_weights(ws) + n);
  gsl_integration_fixed_free(ws);
  return r;
}

QuadRule composite_legendre(const std::vector<double>& breaks,
                            int nodes_per_panel) {
  if (breaks.size() < 2) throw std::invalid_argument("composite_legendre: need >= 2 breakpoints");
  QuadRule out;
  out.x.reserve((breaks.size() - 1) * nodes_per_panel);
  out.w.reserve((breaks.size() - 1) * nodes_per_panel);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    QuadRule p = gauss_legendre(nodes_per_panel, breaks[i], breaks[i + 1]);
    out.x.insert(out.x.end(), p.x.begin(), p.x.end());
    out.w.insert(out.w.end(), p.w.begin(), p.w.end());
  }
  return out;
}

std::vector<double> uniform_breaks(double a, double b, double max_width) {
  int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
  std::vector<double> br(n + 1);
  for (int i = 0; i <= n; ++i) br[i] = a + (b - a) * i / n;
  return br;
}

}  // namespace shl
