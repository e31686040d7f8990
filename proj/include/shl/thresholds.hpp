#pragma once

#include <string>

// Explicit exponent thresholds and admissibility regions, evaluated in
// double precision.

namespace shl {

struct ThresholdResult {
  double value = 0.0;
  bool valid = true;
  std::string constraint_violated;  // nonempty iff !valid
};

// Critical exponent for the layer weight with equal powers.
ThresholdResult lambda_threshold(int N, int k, double alpha);

// Critical exponent for the two-power layer (alpha >= beta).
ThresholdResult lambda_threshold_ab(int N, int k, double alpha, double beta);

// Lower endpoint of the p-window for dual bound states under the layer weight.
ThresholdResult mu_threshold(int N, int k, double alpha);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;  // (lo, hi]
};

// (2N/(N-1) * 2q/(q+2), 2N/(N-2)]
Interval selfdual_p_range(int N, double q);

struct ExponentPair {
  double inv_p = 0.0;
  double inv_r = 0.0;
};

// Trapezoid predicate for the non-selfdual resolvent exponent region.
bool nonselfdual_admissible(int N, double q, ExponentPair pair);

// A = (2qN/(q+2)) (1/r + 1/p) - (N-1)
double interpolation_exponent(int N, double q, double inv_p, double inv_r);

// 2(N+1)/(N-1)
double stein_tomas_q(int N);

}  // namespace shl
