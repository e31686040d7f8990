#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "shl/geometry.hpp"
#include "shl/quadrature.hpp"
#include "shl/resolvent.hpp"

// Fourier extension of invariant sphere data through the reduced one-variable
// formula, weighted norms, restriction norms, and admissibility scans.

namespace shl {

// One-variable profile of an invariant sphere function on the latitude
// parameter r in [0,1]; cubic interpolation on interior panels, linear on the
// end panels.
struct SphereProfile {
  std::vector<double> nodes;                 // ascending, 0 and 1 included
  std::vector<std::complex<double>> values;  // one per node

  std::complex<double> eval(double r) const;
};

SphereProfile constant_profile(std::complex<double> c = 1.0, int n = 33);

struct QuadratureSpec {
  int panels_per_wavelength = 8;
  int max_panels = 20000;
  double abs_tol = 1e-9;
};

// (|S^{N-k-1}| |S^{k-1}| int_0^1 r^{N-k-1} (1-r^2)^{(k-2)/2} |h|^2 dr)^{1/2}
double sphere_l2_norm(const SymmetryDim& dim, const SphereProfile& h);

// Extension evaluated at reduced coordinates (t, s) via the 1-D slice formula.
std::complex<double> extend_reduced(const SymmetryDim& dim,
                                    const SphereProfile& h, ReducedPoint pt,
                                    const QuadratureSpec& quad = {});

using SphereSampler =
    std::function<std::complex<double>(const std::vector<double>&)>;

// Direct surface quadrature of the extension integral (oracle scale, N <= 4).
std::complex<double> extend_direct(const SymmetryDim& dim,
                                   const SphereSampler& F,
                                   const std::vector<double>& x,
                                   double abs_tol = 1e-8);

struct WeightedNorm {
  double value = 0.0;  // truncated norm
  double tail = 0.0;   // norm-scale bound for the truncated remainder
  bool tail_ok = true; // false when the tail envelope diverges
};

WeightedNorm weighted_lq_norm(const SymmetryDim& dim, const SphereProfile& h,
                              const WeightSpec& W, double q, double trunc,
                              const QuadratureSpec& quad = {});

// L2 sphere norm of the restriction of (Q f)^ to the unit sphere.
double restriction_norm(const SymmetryDim& dim, const BiRadialField& f,
                        const WeightSpec& W);

// Band equal to 1 on (1-delta, 1], 0 elsewhere, smoothed over one node step.
SphereProfile band_profile(double delta);

struct ScanRow {
  double q = 0.0;
  double param = 0.0;
  double norm_q = 0.0;
  double norm_2 = 0.0;
  double ratio = 0.0;
  bool tail_ok = true;
};

std::vector<ScanRow> admissibility_scan(const SymmetryDim& dim,
                                        const WeightSpec& W,
                                        const std::vector<double>& q_list,
                                        const std::vector<double>& deltas,
                                        double trunc,
                                        const QuadratureSpec& quad = {});

}  // namespace shl
