#include "shl/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shl {

namespace {

void check_nk(int N, int k) {
  if (N < 3) throw std::domain_error("thresholds: N >= 3 required");
  if (k < 1 || k > N - 1)
    throw std::domain_error("thresholds: 1 <= k <= N-1 required");
}

}  // namespace

ThresholdResult lambda_threshold(int N, int k, double alpha) {
  check_nk(N, k);
  if (!(alpha > 0.0)) throw std::domain_error("lambda_threshold: alpha > 0");
  ThresholdResult res;
  if (k == 1) {
    res.value = (2.0 * (N - 1) - 2.0 / alpha) / (N - 2);
    if (!(alpha > 1.0 / (N - 1))) {
      res.valid = false;
      res.constraint_violated = "alpha <= 1/(N-1)";
    }
  } else if (k == N - 1) {
    res.value = (2.0 * (N - 1) - 2.0 * alpha) / (N - 2);
    if (!(alpha < static_cast<double>(N - 1))) {
      res.valid = false;
      res.constraint_violated = "alpha >= N-1";
    }
  } else {
    res.value = std::max((2.0 * (N - k) - 2.0 * k / alpha) / (N - k - 1),
                         (2.0 * k - 2.0 * alpha * (N - k)) / (k - 1));
  }
  return res;
}

ThresholdResult lambda_threshold_ab(int N, int k, double alpha, double beta) {
  check_nk(N, k);
  if (!(beta > 0.0) || !(alpha >= beta))
    throw std::domain_error("lambda_threshold_ab: need alpha >= beta > 0");
  ThresholdResult res;
  if (k == 1) {
    res.value = (2.0 * (N - 1) - 2.0 / alpha) / (N - 2);
    if (!(beta > 1.0 / (N - 1))) {
      res.valid = false;
      res.constraint_violated = "beta <= 1/(N-1)";
    }
  } else if (k == N - 1) {
    res.value = (2.0 * (N - 1) - 2.0 * beta) / (N - 2);
    if (!(alpha < static_cast<double>(N - 1))) {
      res.valid = false;
      res.constraint_violated = "alpha >= N-1";
    }
  } else {
    res.value = std::max((2.0 * k - 2.0 * beta * (N - k)) / (k - 1),
                         (2.0 * (N - k) - 2.0 * k / alpha) / (N - k - 1));
  }
  return res;
}

ThresholdResult mu_threshold(int N, int k, double alpha) {
  check_nk(N, k);
  if (!(alpha > 0.0)) throw std::domain_error("mu_threshold: alpha > 0");
  ThresholdResult res;
  if (k == 1) {
    if (!(alpha > 1.0 / (N - 1))) {
      res.valid = false;
      res.constraint_violated = "alpha <= 1/(N-1)";
    }
    const double brk = (N + 1.0) / (3.0 * (N - 1));
    res.value = alpha <= brk
                    ? 2.0
                    : 4.0 * N * (alpha * (N - 1) - 1.0) /
                          ((N - 1) * (2.0 * alpha * N - 3.0 * alpha - 1.0));
  } else if (k == N - 1) {
    if (!(alpha < static_cast<double>(N - 1))) {
      res.valid = false;
      res.constraint_violated = "alpha >= N-1";
    }
    const double brk = 3.0 * (N - 1) / (N + 1.0);
    res.value = alpha <= brk ? 4.0 * N * (N - 1.0 - alpha) /
                                   ((N - 1) * (2.0 * N - alpha - 3.0))
                             : 2.0;
  } else {
    const double lo = (N + 2.0 * k - 1.0) / ((N + 1.0) * (N - k));
    const double hi = (N + 1.0) * k / (N - 1.0 + 2.0 * (N - k));
    if (alpha <= lo) {
      res.value = 4.0 * N * (k - alpha * (N - k)) /
                  ((N - 1) * (2.0 * k - 1.0 - alpha * (N - k)));
    } else if (alpha <= hi) {
      res.value = 2.0;
    } else {
      res.value = 4.0 * N * (alpha * (N - k) - k) /
                  ((N - 1) * (2.0 * alpha * (N - k) - alpha - k));
    }
  }
  return res;
}

double stein_tomas_q(int N) {
  if (N < 2) throw std::domain_error("stein_tomas_q: N >= 2 required");
  return 2.0 * (N + 1) / (N - 1.0);
}

Interval selfdual_p_range(int N, double q) {
  if (N < 3) throw std::domain_error("selfdual_p_range: N >= 3 required");
  if (!(q >= 1.0) || !(q <= stein_tomas_q(N)))
    throw std::domain_error("selfdual_p_range: q outside [1, 2(N+1)/(N-1)]");
  return Interval{2.0 * N / (N - 1.0) * 2.0 * q / (q + 2.0),
                  2.0 * N / (N - 2.0)};
}

bool nonselfdual_admissible(int N, double q, ExponentPair pair) {
  if (N < 3) throw std::domain_error("nonselfdual_admissible: N >= 3 required");
  if (!(q >= 1.0) || !(q <= stein_tomas_q(N)))
    throw std::domain_error("nonselfdual_admissible: q out of range");
  const double ip = pair.inv_p, ir = pair.inv_r;
  if (!(ip > 0.0 && ip < 1.0 && ir > 0.0 && ir < 1.0)) return false;
  const double sum = ip + ir;
  if (!(sum >= (N - 2.0) / N)) return false;
  if (!(sum < (q + 2.0) / (2.0 * q) * (N - 1.0) / N)) return false;
  if (q >= 2.0) {
    if (!(std::max(ip, ir) < (N - 1.0) / (2.0 * N))) return false;
  } else {
    const double lo = 2.0 * q / ((N - 1.0) * (2.0 - q)) * ip -
                      ((N - 1.0) * q - 2.0 * (N - 3.0)) / (2.0 * N * (2.0 - q));
    const double hi = (N - 1.0) * (2.0 - q) / (2.0 * q) * ip +
                      (N - 1.0) * ((N - 1.0) * q - 2.0 * (N - 3.0)) /
                          (4.0 * q * N);
    if (!(lo < ir && ir < hi)) return false;
  }
  return true;
}

double interpolation_exponent(int N, double q, double inv_p, double inv_r) {
  return 2.0 * q * N / (q + 2.0) * (inv_r + inv_p) - (N - 1.0);
}

}  // namespace shl
