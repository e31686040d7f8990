#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "shl/dualvar.hpp"
#include "shl/thresholds.hpp"

using namespace shl;

namespace {

// one solve shared by the state-dependent cases below
const DualState& solved_state() {
  static DualState st = [] {
    SymmetryDim d(3, 1);
    auto g = make_grid(d, 8.0, 8.0);
    WeightSpec W(PowerLayer{1.0, 1.0, 1.0, 1.0});
    SolverConfig cfg;
    cfg.residual_tol = 1e-3;
    cfg.q = 2.0;
    return solve_bound_state(d, W, 3.5, g, cfg);
  }();
  return st;
}

}  // namespace

TEST_CASE("dual exponent") {
  CHECK(dual_exponent(2.0) == doctest::Approx(2.0));
  CHECK(dual_exponent(3.5) == doctest::Approx(1.4));
  CHECK(dual_exponent(1.4) == doctest::Approx(3.5));
  CHECK_THROWS_AS(dual_exponent(1.0), std::domain_error);
  CHECK_THROWS_AS(dual_exponent(0.5), std::domain_error);
}

TEST_CASE("energy splits into the p' term and the quadratic term") {
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
        (1.0 + 0.3 * t * t) * std::exp(-0.5 * (t * t + s * s)), 0.0);
  });
  st.KQv = apply_KQ(st.v, W, p, mult);

  const double A = std::pow(field_lp_norm(st.v, pp), pp) / pp;
  const double B = field_inner(st.v, st.KQv);
  CHECK(energy(st) == doctest::Approx(A - 0.5 * B).epsilon(1e-12));

  // J(t v) = t^{p'} A - t^2 B / 2, with KQv scaling linearly
  for (double t : {0.3, 1.7, 4.0}) {
    DualState sc = st;
    sc.v.values *= t;
    sc.KQv.values *= t;
    CHECK(energy(sc) ==
          doctest::Approx(std::pow(t, pp) * A - 0.5 * t * t * B)
              .epsilon(1e-10));
  }
}

TEST_CASE("nehari scale maximizes the energy along the ray") {
  const DualState& st = solved_state();
  MultiplierSpec mult;

  // the converged iterate already sits on the crest
  double tstar = nehari_scale(st.v, st.W, st.p, mult);
  CHECK(tstar == doctest::Approx(1.0).epsilon(1e-8));

  const double pp = dual_exponent(st.p);
  const double A = std::pow(field_lp_norm(st.v, pp), pp) / pp;
  const double B = field_inner(st.v, st.KQv);
  auto J = [&](double t) { return std::pow(t, pp) * A - 0.5 * t * t * B; };
  double peak = J(tstar);
  CHECK(peak > 0.0);
  for (int i = 0; i < 100; ++i) {
    double t = tstar * std::pow(10.0, -1.0 + 2.0 * i / 99.0);
    CHECK(J(t) <= peak * (1.0 + 1e-9));
  }

  // a low-frequency direction sees a negative quadratic form: no crest
  auto g = st.v.grid;
  auto wide = make_field(g, Side::space, [](double t, double s) {
    return std::complex<double>(std::exp(-0.02 * (t * t + s * s)), 0.0);
  });
  CHECK(bilinear_form(wide, wide, st.W, st.p, mult) < 0.0);
  CHECK_THROWS_AS(nehari_scale(wide, st.W, st.p, mult), std::runtime_error);
}

TEST_CASE("solver input validation") {
  SymmetryDim d(3, 1);
  auto g = make_grid(d, 8.0, 8.0);
  WeightSpec W(PowerLayer{1.0, 1.0, 1.0, 1.0});
  SolverConfig cfg;
  cfg.residual_tol = 1e-3;

  // p must sit in (2, 2N/(N-2))
  CHECK_THROWS_AS(solve_bound_state(d, W, 2.0, g, cfg), std::domain_error);
  CHECK_THROWS_AS(solve_bound_state(d, W, 6.5, g, cfg), std::domain_error);

  SolverConfig bad = cfg;
  bad.residual_tol = 0.0;
  CHECK_THROWS_AS(solve_bound_state(d, W, 3.5, g, bad), std::domain_error);
  bad = cfg;
  bad.max_iter = 0;
  CHECK_THROWS_AS(solve_bound_state(d, W, 3.5, g, bad), std::domain_error);
  bad = cfg;
  bad.damping = 1.5;
  CHECK_THROWS_AS(solve_bound_state(d, W, 3.5, g, bad), std::domain_error);

  // q = 4 forces p > 4; the window endpoint algebra matches the thresholds
  SolverConfig narrow = cfg;
  narrow.q = 4.0;
  Interval win = selfdual_p_range(3, 4.0);
  CHECK(win.lo == doctest::Approx(4.0));
  CHECK_THROWS_AS(solve_bound_state(d, W, 3.5, g, narrow), std::domain_error);

  // a vanishing weight admits only v = 0
  WeightSpec zero(PowerLayer{1.0, 1.0, 1.0, 0.0});
  CHECK_THROWS_AS(solve_bound_state(d, zero, 3.5, g, cfg), SolverError);
  try {
    solve_bound_state(d, zero, 3.5, g, cfg);
  } catch (const SolverError& e) {
    CHECK(e.residual_history.empty());
  }
}

TEST_CASE("solver converges to a nontrivial bound state") {
  const DualState& st = solved_state();
  CHECK_FALSE(st.trivial);
  CHECK(st.iterations >= 1);
  CHECK(st.el_residual <= 1e-3);
  CHECK(st.q == doctest::Approx(2.0));
  CHECK(st.energy > 0.0);
  CHECK(field_lp_norm(st.v, dual_exponent(st.p)) > 0.1);

  // recorded history: accepted steps ending at the converged residual
  REQUIRE(!st.residual_history.empty());
  CHECK(st.residual_history.back() == doctest::Approx(st.el_residual));
  CHECK(static_cast<long>(st.residual_history.size()) <= st.iterations);

  // cached diagnostics agree with recomputation
  CHECK(el_residual(st) == doctest::Approx(st.el_residual).epsilon(1e-10));
  CHECK(energy(st) == doctest::Approx(st.energy).epsilon(1e-12));
}

TEST_CASE("reconstruction solves the field equation") {
  const DualState& st = solved_state();
  MultiplierSpec mult;
  auto rec = reconstruct_u(st, mult);
  CHECK(field_lp_norm(rec.u, st.p) > 0.1);
  CHECK(rec.residual < 0.01);
  // at a 1e-3 dual residual the chain closes to the same order
  CHECK(rec.residual < 5.0 * st.el_residual);
}

TEST_CASE("concentration mass grows with the radius and stays on the grid") {
  const DualState& st = solved_state();
  CHECK_THROWS_AS(concentration(st, 0.0), std::domain_error);

  auto c1 = concentration(st, 0.5);
  auto c2 = concentration(st, 1.0);
  auto c3 = concentration(st, 2.0);
  CHECK(c1.mass > 0.0);
  CHECK(c2.mass >= c1.mass);
  CHECK(c3.mass >= c2.mass);
  for (const auto& c : {c1, c2, c3}) {
    CHECK(c.center.t >= 0.0);
    CHECK(c.center.t <= st.v.grid->T);
    CHECK(c.center.s >= 0.0);
    CHECK(c.center.s <= st.v.grid->T);
  }
}
