// End-to-end acceptance checks, one per numbered criterion; the criterion is
// selected by the single command-line argument and one pass/fail line is
// printed. Exit status 0 on pass, 1 on fail.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "shl/dualvar.hpp"
#include "shl/extension.hpp"
#include "shl/geometry.hpp"
#include "shl/resolvent.hpp"
#include "shl/specfun.hpp"
#include "shl/thresholds.hpp"

using namespace shl;

namespace {

const double PI = 3.14159265358979323846;

int report(int crit, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s (%s)\n", crit, ok ? "PASS" : "FAIL",
              detail.c_str());
  return ok ? 0 : 1;
}

// random trig polynomial in r^2: even in the latitude parameter, so the
// lifted sphere function is smooth at both block loci and direct surface
// quadrature converges spectrally
struct ProfileGen {
  double a[4], b[4], c[4], e[4];
  explicit ProfileGen(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int j = 0; j < 4; ++j) {
      a[j] = u(rng); b[j] = u(rng); c[j] = u(rng); e[j] = u(rng);
    }
  }
  std::complex<double> operator()(double r) const {
    double z = r * r, re = 0.0, im = 0.0;
    for (int j = 0; j < 4; ++j) {
      re += a[j] * std::cos(j * PI * z) + b[j] * std::sin(j * PI * z);
      im += c[j] * std::cos(j * PI * z) + e[j] * std::sin(j * PI * z);
    }
    return {re, im};
  }
};

// graded nodes keep the linear end panels tiny, so the sampled profile
// matches its generator to a few 1e-9
SphereProfile sample_profile(const ProfileGen& g, int n = 513) {
  SphereProfile h;
  for (int i = 0; i < n; ++i) {
    double u = static_cast<double>(i) / (n - 1);
    double r = i == n - 1 ? 1.0 : u * u * (3.0 - 2.0 * u);
    h.nodes.push_back(r);
    h.values.push_back(g(r));
  }
  return h;
}

std::complex<double> smooth_mixture(double t, double s) {
  double t2 = t * t, s2 = s * s;
  double a = (1.0 + 0.5 * t2 - 0.3 * s2) * std::exp(-0.5 * (t2 + s2));
  double b = (0.2 * t2 * s2 - 0.4) * std::exp(-0.7 * (t2 + s2));
  return {a, b};
}

// 1: the reduced slice formula agrees with direct surface quadrature
int criterion1() {
  double worst = 0.0;
  for (auto [N, k] : std::vector<std::pair<int, int>>{
           {3, 1}, {3, 2}, {4, 1}, {4, 2}, {4, 3}}) {
    SymmetryDim d(N, k);
    ProfileGen gen(100 + 10 * N + k);
    SphereProfile h = sample_profile(gen);
    auto F = [&](const std::vector<double>& w) {
      double r2 = 0.0;
      for (int i = 0; i < N - k; ++i) r2 += w[i] * w[i];
      return gen(std::min(1.0, std::sqrt(r2)));
    };
    std::mt19937 rng(7 * N + k);
    std::uniform_real_distribution<double> u(0.0, N == 3 ? 10.0 : 6.0);
    std::vector<std::complex<double>> A, B;
    for (int trial = 0; trial < 20; ++trial) {
      double t = u(rng), s = u(rng);
      std::vector<double> x(N, 0.0);
      x[0] = t;
      x[N - k] = s;
      A.push_back(extend_reduced(d, h, {t, s}));
      B.push_back(extend_direct(d, F, x, 1e-7));
    }
    double bmax = 0.0;
    for (const auto& b : B) bmax = std::max(bmax, std::abs(b));
    for (std::size_t i = 0; i < A.size(); ++i)
      worst = std::max(worst, std::abs(A[i] - B[i]) /
                                  std::max(std::abs(B[i]), 0.05 * bmax));
    }
  return report(1, worst <= 1e-6,
                "worst relative deviation " + std::to_string(worst));
}

// 2: the sphere transform keeps its r^{-(m-1)/2} envelope out to 1e4
int criterion2() {
  bool ok = true;
  double worst_ratio = 0.0;
  for (int m = 2; m <= 8; ++m) {
    double near = 0.0, far = 0.0;
    for (double r = 0.0; r <= 100.0; r += 0.02) {
      double e = std::pow(1.0 + r, 0.5 * (m - 1)) * std::abs(sphere_ft(m, r));
      near = std::max(near, e);
    }
    far = near;
    for (double r = 100.0; r <= 1e4; r += 0.05) {
      double e = std::pow(1.0 + r, 0.5 * (m - 1)) * std::abs(sphere_ft(m, r));
      far = std::max(far, e);
    }
    worst_ratio = std::max(worst_ratio, far / near);
    ok = ok && far <= 2.0 * near;
  }
  return report(2, ok, "worst far/near envelope ratio " +
                           std::to_string(worst_ratio));
}

// 3: exponent threshold algebra
int criterion3() {
  bool ok = true;
  std::string why = "all identities hold";
  std::mt19937 rng(11);

  // mu is the composite of lambda on 200 random valid triples
  for (int trial = 0; trial < 200 && ok; ++trial) {
    int N = 3 + static_cast<int>(rng() % 6);
    int k = 1 + static_cast<int>(rng() % (N - 1));
    std::uniform_real_distribution<double> ua(0.05, 4.0);
    double alpha = ua(rng);
    if (k == 1) alpha = std::max(alpha, 1.0 / (N - 1) + 0.05);
    if (k == N - 1) alpha = std::min(alpha, N - 1.05);
    double lam = lambda_threshold(N, k, alpha).value;
    double mu = mu_threshold(N, k, alpha).value;
    double composite =
        std::max(2.0 * N / (N - 1.0) * 2.0 * lam / (lam + 2.0), 2.0);
    if (std::abs(mu - composite) > 1e-12) {
      ok = false;
      why = "composite mismatch at N=" + std::to_string(N) +
            " k=" + std::to_string(k) + " alpha=" + std::to_string(alpha);
    }
  }

  // branch changes of mu are continuous
  for (int N = 3; N <= 8 && ok; ++N)
    for (int k = 1; k <= N - 1 && ok; ++k) {
      std::vector<double> brks;
      if (k == 1)
        brks = {(N + 1.0) / (3.0 * (N - 1))};
      else if (k == N - 1)
        brks = {3.0 * (N - 1) / (N + 1.0)};
      else
        brks = {(N + 2.0 * k - 1.0) / ((N + 1.0) * (N - k)),
                (N + 1.0) * k / (N - 1.0 + 2.0 * (N - k))};
      for (double b : brks) {
        double lo = mu_threshold(N, k, std::nextafter(b, 0.0)).value;
        double hi = mu_threshold(N, k, std::nextafter(b, 10.0 * b)).value;
        if (std::abs(hi - lo) > 1e-12) {
          ok = false;
          why = "branch jump at N=" + std::to_string(N) +
                " k=" + std::to_string(k);
        }
      }
    }

  // the threshold vanishes on the balanced ray
  for (int N = 3; N <= 8 && ok; ++N)
    for (int k = 1; k <= N - 1; ++k) {
      double lam = lambda_threshold(N, k, double(k) / (N - k)).value;
      if (std::abs(lam) > 1e-14) {
        ok = false;
        why = "nonzero balanced threshold at N=" + std::to_string(N) +
              " k=" + std::to_string(k);
      }
    }

  if (ok) {
    double mu = mu_threshold(3, 1, 1.0).value;
    if (!(std::abs(mu - 3.0) < 1e-12 && mu < stein_tomas_q(3))) {
      ok = false;
      why = "mu(3,1,1) != 3 or not below 4";
    }
  }
  return report(3, ok, why);
}

// 4: bounded band family above the critical exponent
int criterion4() {
  SymmetryDim d(3, 1);
  WeightSpec W(PowerLayer{1.0, 1.0, 1.0, 1.0});
  std::vector<double> deltas;
  for (int i = 1; i <= 7; ++i) deltas.push_back(std::pow(2.0, -i));
  auto rows = admissibility_scan(d, W, {2.5, 1.5}, deltas, 30.0);

  bool ok = true;
  double worst_step = 0.0;
  double prev = 0.0;
  for (const auto& r : rows) {
    if (r.q != 2.5) continue;
    ok = ok && r.tail_ok && r.ratio > 0.0;
    if (prev > 0.0) {
      double step = std::abs(r.ratio / prev - 1.0);
      worst_step = std::max(worst_step, step);
      ok = ok && step <= 0.25;
    }
    prev = r.ratio;
  }
  // sub-critical trend is reported, not asserted
  for (const auto& r : rows)
    if (r.q == 1.5)
      std::printf("  sub-critical q=1.5 delta=%.5f ratio=%.4f tail_ok=%d\n",
                  r.param, r.ratio, static_cast<int>(r.tail_ok));
  return report(4, ok, "worst consecutive-delta ratio change " +
                           std::to_string(worst_step));
}

// 5: fundamental solution from the resolvent, and the near/far split
int criterion5() {
  SymmetryDim d(3, 1);
  auto g = make_grid(d, 6.0, 200.0);
  const double sig = 0.02;
  auto f = make_field(g, Side::space, [&](double t, double s) {
    return std::complex<double>(std::pow(2.0 * PI * sig * sig, -1.5) *
                                    std::exp(-0.5 * (t * t + s * s) /
                                             (sig * sig)),
                                0.0);
  });
  auto u = apply_resolvent(f, {});
  bool ok = true;
  double worst = 0.0;
  for (double r : {1.0, 2.0, 5.0}) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < g->t.size(); ++i)
      if (std::abs(g->t.x[i] - r) < std::abs(g->t.x[best] - r)) best = i;
    double rr = std::hypot(g->t.x[best], g->s.x[0]);
    std::complex<double> ref = helmholtz_kernel(3, rr);
    double rel = std::abs(u.values(static_cast<Eigen::Index>(best), 0) - ref) /
                 std::abs(ref);
    worst = std::max(worst, rel);
    ok = ok && rel < 0.01;
  }

  // near/far split constants on a sample grid and a refined one
  // linear sampling through r = 100 resolves the oscillation crests that
  // carry the sup; geometric sampling covers the far tail
  auto samples = [](double step, double geo) {
    std::vector<double> rs;
    for (double r = step; r <= 100.0; r += step) rs.push_back(r);
    for (double r = 105.0; r <= 1000.0; r *= geo) rs.push_back(r);
    return rs;
  };
  double drift = 0.0;
  for (int N : {3, 5}) {
    double c1[2], c2[2];
    int pass = 0;
    for (auto [step, geo] : std::vector<std::pair<double, double>>{
             {0.25, 1.12}, {0.125, 1.06}}) {
      auto rs = samples(step, geo);
      auto [p1, p2] = split_phi(N, rs);
      double a = 0.0, b = 0.0;
      for (std::size_t i = 0; i < rs.size(); ++i) {
        a = std::max(a, std::pow(1.0 + rs[i], 0.5 * (N - 1)) *
                            std::abs(p1[i]));
        if (rs[i] <= 100.0)
          b = std::max(b, std::abs(p2[i]) /
                              std::min(std::pow(rs[i], 2.0 - N),
                                       std::pow(rs[i], -double(N))));
      }
      c1[pass] = a;
      c2[pass] = b;
      ++pass;
    }
    ok = ok && std::isfinite(c1[1]) && std::isfinite(c2[1]);
    drift = std::max({drift, std::abs(c1[1] / c1[0] - 1.0),
                      std::abs(c2[1] / c2[0] - 1.0)});
  }
  ok = ok && drift <= 0.10;
  return report(5, ok,
                "worst kernel deviation " + std::to_string(worst) +
                    ", constant drift under refinement " +
                    std::to_string(drift));
}

// 6: transform unitarity on smooth mixtures
int criterion6() {
  double worst = 0.0;
  for (int N : {3, 4, 6})
    for (int k : {1, N - 1}) {
      auto g = make_grid(SymmetryDim(N, k), 12.0, 12.0);
      auto f = make_field(g, Side::space, smooth_mixture);
      auto fhat = transform(f);
      double n0 = field_lp_norm(f, 2.0);
      worst = std::max(worst, std::abs(field_lp_norm(fhat, 2.0) / n0 - 1.0));
      auto ff = transform(fhat);
      ff.values -= f.values;
      worst = std::max(worst, field_lp_norm(ff, 2.0) / n0);
    }
  return report(6, worst <= 1e-7,
                "worst Parseval/round-trip deviation " + std::to_string(worst));
}

// 7: the dual solver end to end at two exponents
int criterion7() {
  SymmetryDim d(3, 1);
  auto g = make_grid(d, 8.0, 8.0);
  WeightSpec W(PowerLayer{1.0, 1.0, 1.0, 1.0});
  bool ok = true;
  std::string detail;
  for (double p : {3.5, 4.5}) {
    SolverConfig cfg;
    cfg.residual_tol = 1e-4;
    try {
      auto st = solve_bound_state(d, W, p, g, cfg);
      double pp = dual_exponent(p);
      double nehari =
          (1.0 / pp - 0.5) * std::pow(field_lp_norm(st.v, pp), pp);
      auto rec = reconstruct_u(st, cfg.mult);
      bool here = st.el_residual <= 1e-4 && st.energy > 0.0 &&
                  std::abs(st.energy / nehari - 1.0) <= 1e-3 &&
                  rec.residual <= 1e-3;
      ok = ok && here;
      detail += "p=" + std::to_string(p) +
                ": res=" + std::to_string(st.el_residual) +
                " rec=" + std::to_string(rec.residual) + "  ";
    } catch (const SolverError& e) {
      ok = false;
      detail += "p=" + std::to_string(p) + ": " + e.what() + "  ";
    }
  }
  return report(7, ok, detail);
}

// 8: analytic directional derivative of the energy vs finite differences
int criterion8() {
  SymmetryDim d(3, 1);
  auto g = make_grid(d, 8.0, 8.0);
  WeightSpec W(PowerLayer{1.0, 1.0, 1.0, 1.0});
  MultiplierSpec mult;
  const double p = 3.5, pp = dual_exponent(p);

  DualState st;
  st.p = p;
  st.W = W;
  st.v = make_field(g, Side::space, [](double t, double s) {
    return std::complex<double>(
        (1.0 + 0.3 * t - 0.2 * s) * std::exp(-0.5 * (t * t + s * s)), 0.0);
  });
  st.KQv = apply_KQ(st.v, W, p, mult);

  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    double a0 = u(rng), a1 = u(rng), a2 = u(rng), a3 = u(rng);
    auto h = make_field(g, Side::space, [&](double t, double s) {
      double envelope = std::exp(-0.5 * (t * t + s * s));
      return std::complex<double>(
          envelope * (a0 + a1 * std::cos(t) + a2 * std::sin(s) +
                      a3 * std::cos(t + s)),
          0.0);
    });
    auto KQh = apply_KQ(h, W, p, mult);

    // d/dt J(v + t h) at 0: the p' term differentiates nodewise
    BiRadialField dual = st.v;
    for (Eigen::Index i = 0; i < dual.values.rows(); ++i)
      for (Eigen::Index j = 0; j < dual.values.cols(); ++j) {
        std::complex<double> z = dual.values(i, j);
        double a = std::abs(z);
        dual.values(i, j) = a > 0.0 ? std::pow(a, pp - 2.0) * z : 0.0;
      }
    double analytic = field_inner(dual, h) - field_inner(h, st.KQv);

    const double eps = 1e-5;
    DualState plus = st, minus = st;
    plus.v.values += eps * h.values;
    plus.KQv.values += eps * KQh.values;
    minus.v.values -= eps * h.values;
    minus.KQv.values -= eps * KQh.values;
    double fd = (energy(plus) - energy(minus)) / (2.0 * eps);
    worst = std::max(worst,
                     std::abs(fd - analytic) / std::max(1e-6, std::abs(analytic)));
  }
  return report(8, worst <= 1e-3,
                "worst gradient deviation " + std::to_string(worst));
}

// 9: ball-mass decay along the layer vs orbit packing growth
int criterion9() {
  bool ok = true;
  std::string why = "decay and packing dichotomy hold";

  for (auto [N, k] :
       std::vector<std::pair<int, int>>{{3, 1}, {4, 2}, {5, 3}}) {
    SymmetryDim dim(N, k);
    for (auto P : {PowerLayer{1.0, 1.0, 1.0, 1.0},
                   PowerLayer{2.0, 0.5, 2.0, 1.0},
                   PowerLayer{1.5, 1.5, 0.5, 2.0}}) {
      WeightSpec W(P);
      double prev = std::numeric_limits<double>::infinity();
      for (double r : {10.0, 30.0, 100.0, 300.0}) {
        double cur = region_ball_mass(W, dim, {0.0, r}, 1.0);
        // a sub-resolution layer reads as exactly zero mass; staying at
        // zero is still monotone decay
        if (!(cur < prev || (cur == 0.0 && prev == 0.0))) {
          ok = false;
          why = "mass not decreasing at N=" + std::to_string(N) +
                " k=" + std::to_string(k) + " r=" + std::to_string(r);
        }
        prev = cur;
      }
    }
  }

  for (int N = 4; N <= 8 && ok; ++N)
    for (int k = 1; k <= N - 1 && ok; ++k) {
      SymmetryDim dim(N, k);
      // grow the first block: diverges iff S^{N-k-1} has positive dimension
      long t_small = orbit_packing_lower_bound(dim, {10.0, 1.0}, 1.0);
      long t_large = orbit_packing_lower_bound(dim, {1000.0, 1.0}, 1.0);
      bool t_div = t_large >= 20 * std::max(1L, t_small);
      if (t_div != (N - k >= 2)) {
        ok = false;
        why = "first-block growth mismatch at N=" + std::to_string(N) +
              " k=" + std::to_string(k);
      }
      // grow the second block: diverges iff S^{k-1} has positive dimension
      long s_small = orbit_packing_lower_bound(dim, {1.0, 10.0}, 1.0);
      long s_large = orbit_packing_lower_bound(dim, {1.0, 1000.0}, 1.0);
      bool s_div = s_large >= 20 * std::max(1L, s_small);
      if (s_div != (k >= 2)) {
        ok = false;
        why = "second-block growth mismatch at N=" + std::to_string(N) +
              " k=" + std::to_string(k);
      }
    }
  return report(9, ok, why);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <1..9>\n");
    return 1;
  }
  switch (std::atoi(argv[1])) {
    case 1: return criterion1();
    case 2: return criterion2();
    case 3: return criterion3();
    case 4: return criterion4();
    case 5: return criterion5();
    case 6: return criterion6();
    case 7: return criterion7();
    case 8: return criterion8();
    case 9: return criterion9();
    default:
      std::fprintf(stderr, "usage: acceptance <1..9>\n");
      return 1;
  }
}
