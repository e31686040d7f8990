#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

// Symmetry group O(N-k) x O(k), reduced bi-radial coordinates, layer-type
// weight regions, Haar symmetrization and orbit geometry.

namespace shl {

double sphere_area(int m);   // |S^{m-1}|, with |S^0| = 2
double ball_volume(int m);   // alpha_m = pi^{m/2} / Gamma(m/2 + 1)

struct SymmetryDim {
  int N = 3;
  int k = 1;
  // cached derived quantities
  double area_t = 0.0;  // |S^{N-k-1}|
  double area_s = 0.0;  // |S^{k-1}|

  SymmetryDim() { *this = SymmetryDim(3, 1); }
  SymmetryDim(int N_, int k_);
  int tdim() const { return N - k; }  // dimension of the first block
  int sdim() const { return k; }
};

struct ReducedPoint {
  double t = 0.0;  // |x^{(N-k)}|
  double s = 0.0;  // |x^{(k)}|
};

// Layer region t <= a * max(s^-alpha, s^-beta) with constant weight cap.
struct PowerLayer {
  double alpha = 1.0;
  double beta = 1.0;
  double a = 1.0;
  double cap = 1.0;
};

// Nonnegative table on a tensor grid, bilinear interpolation, clamped at 0.
struct SampledWeight {
  std::vector<double> t_nodes;
  std::vector<double> s_nodes;
  std::vector<double> values;  // row-major, t index major
};

struct WeightSpec {
  std::variant<PowerLayer, SampledWeight> w;

  WeightSpec() : w(PowerLayer{}) {}
  WeightSpec(PowerLayer p) : w(p) {
    if (!(p.alpha >= p.beta) || !(p.beta > 0.0) || !(p.a > 0.0) || p.cap < 0.0)
      throw std::domain_error("WeightSpec: need alpha >= beta > 0, a > 0, cap >= 0");
  }
  WeightSpec(SampledWeight s) : w(std::move(s)) {}
  bool is_power() const { return std::holds_alternative<PowerLayer>(w); }
  const PowerLayer& power() const { return std::get<PowerLayer>(w); }
};

double weight_eval(const WeightSpec& W, const SymmetryDim& dim, ReducedPoint pt);

// |S^{N-k-1}| |S^{k-1}| t^{N-k-1} s^{k-1}
double reduced_volume_element(const SymmetryDim& dim, ReducedPoint pt);

// Upper bound (within a modest factor for R below the orbit curvature scale)
// on int_{B_R(x)} Q dx for a representative x with reduced coordinates
// `center`, via 2-D quadrature over the reduced shadow of the ball.
double region_ball_mass(const WeightSpec& W, const SymmetryDim& dim,
                        ReducedPoint center, double R);

// Same shadow construction for an arbitrary bi-radial density.
double ball_mass_of_density(const std::function<double(double, double)>& density,
                            const SymmetryDim& dim, ReducedPoint center,
                            double R);

// Constructive lower bound on the number of disjoint R-balls centered on the
// orbit through the representative point.
long orbit_packing_lower_bound(const SymmetryDim& dim, ReducedPoint pt,
                               double R);

using SpaceSampler = std::function<double(const std::vector<double>&)>;

// Orbit average over S^{N-k-1} x S^{k-1} by product quadrature (N <= 4).
std::vector<double> haar_symmetrize(const SpaceSampler& f,
                                    const SymmetryDim& dim,
                                    const std::vector<ReducedPoint>& grid);

WeightSpec weight_from_json(const nlohmann::json& j);
nlohmann::json weight_to_json(const WeightSpec& W);

}  // namespace shl
