#include "shl/dualvar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "shl/thresholds.hpp"

namespace shl {

namespace {

constexpr double kTiny = 1e-30;

// s -> |s|^{e-2} s nodewise; inverse of the same map with the dual exponent
BiRadialField duality_map(const BiRadialField& f, double e) {
  BiRadialField out = f;
  for (Eigen::Index i = 0; i < out.values.rows(); ++i)
    for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
      std::complex<double> z = out.values(i, j);
      double a = std::abs(z);
      out.values(i, j) = a > 0.0 ? std::pow(a, e - 2.0) * z : 0.0;
    }
  return out;
}

double weight_max_on_grid(const WeightSpec& W, const BiRadialGrid& g,
                          std::size_t* it_best, std::size_t* is_best) {
  double best = 0.0;
  for (std::size_t i = 0; i < g.t.size(); ++i)
    for (std::size_t j = 0; j < g.s.size(); ++j) {
      double q = weight_eval(W, g.dim, {g.t.x[i], g.s.x[j]});
      if (q > best) {
        best = q;
        if (it_best) *it_best = i;
        if (is_best) *is_best = j;
      }
    }
  return best;
}

BiRadialField initial_bump(const GridPtr& grid, const WeightSpec& W,
                           unsigned seed) {
  const BiRadialGrid& g = *grid;
  std::size_t it = 0, is = 0;
  weight_max_on_grid(W, g, &it, &is);
  double t0 = g.t.x[it], s0 = g.s.x[is];
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jit(-0.5, 0.5);
  t0 = std::max(0.0, t0 + jit(rng));
  s0 = std::max(0.0, s0 + jit(rng));
  double sig = 1.0 + 0.25 * jit(rng);
  return make_field(grid, Side::space, [=](double t, double s) {
    double d2 = (t - t0) * (t - t0) + (s - s0) * (s - s0);
    return std::complex<double>(std::exp(-d2 / (2.0 * sig * sig)), 0.0);
  });
}

void check_p(const SymmetryDim& dim, double p) {
  double crit = 2.0 * dim.N / (dim.N - 2.0);
  if (!(p > 2.0) || !(p < crit))
    throw std::domain_error("dualvar: p in (2, 2N/(N-2)) required");
}

}  // namespace

double dual_exponent(double p) {
  if (!(p > 1.0)) throw std::domain_error("dual_exponent: p > 1 required");
  return p / (p - 1.0);
}

double energy(const DualState& state) {
  double pp = dual_exponent(state.p);
  double n = field_lp_norm(state.v, pp);
  return std::pow(n, pp) / pp - 0.5 * field_inner(state.v, state.KQv);
}

double el_residual(const DualState& state) {
  double pp = dual_exponent(state.p);
  BiRadialField r = duality_map(state.v, pp);
  r.values -= state.KQv.values;
  double denom = field_lp_norm(state.KQv, state.p);
  if (denom < kTiny) return 0.0;
  return field_lp_norm(r, state.p) / denom;
}

double nehari_scale(const BiRadialField& v, const WeightSpec& W, double p,
                    const MultiplierSpec& mult) {
  double pp = dual_exponent(p);
  double B = bilinear_form(v, v, W, p, mult);
  if (!(B > 0.0))
    throw std::runtime_error("nehari_scale: direction has no positive-energy crest");
  double n = std::pow(field_lp_norm(v, pp), pp);
  return std::pow(B / n, 1.0 / (pp - 2.0));
}

DualState solve_bound_state(const SymmetryDim& dim, const WeightSpec& W,
                            double p, const GridPtr& grid,
                            const SolverConfig& config) {
  check_p(dim, p);
  if (!(config.residual_tol > 0.0) || config.max_iter < 1 ||
      !(config.damping > 0.0) || config.damping > 1.0)
    throw std::domain_error("solve_bound_state: bad solver config");
  if (config.q > 0.0) {
    Interval win = selfdual_p_range(dim.N, config.q);
    if (!(p > win.lo && p <= win.hi))
      throw std::domain_error(
          "solve_bound_state: p outside the self-dual window for q");
  }
  if (weight_max_on_grid(W, *grid, nullptr, nullptr) <= 0.0)
    throw SolverError("solve_bound_state: weight vanishes, only v = 0 solves",
                      {});

  const double pp = dual_exponent(p);
  std::vector<double> history;
  unsigned seed = config.seed;
  int restarts_left = 3;

  BiRadialField v = initial_bump(grid, W, seed);
  double init_norm = field_lp_norm(v, pp);
  double damping = config.damping;
  double last_res = std::numeric_limits<double>::infinity();
  BiRadialField backup = v;
  bool have_backup = false;

  for (long iter = 1; iter <= config.max_iter; ++iter) {
    BiRadialField w = apply_KQ(v, W, p, config.mult);
    double B = field_inner(v, w);
    double vnorm = field_lp_norm(v, pp);

    if (!(B > 0.0) || vnorm < 1e-8 * init_norm) {
      // collapsed toward the trivial solution: reseed
      if (--restarts_left < 0)
        throw SolverError("solve_bound_state: iteration collapsed to v = 0",
                          history);
      v = initial_bump(grid, W, ++seed);
      init_norm = field_lp_norm(v, pp);
      last_res = std::numeric_limits<double>::infinity();
      have_backup = false;
      continue;
    }

    // Nehari rescale of the current iterate; w rescales linearly with it
    double t = std::pow(B / std::pow(vnorm, pp), 1.0 / (pp - 2.0));
    BiRadialField vs = v, ws = w;
    vs.values *= t;
    ws.values *= t;

    BiRadialField r = duality_map(vs, pp);
    r.values -= ws.values;
    double res = field_lp_norm(r, p) / std::max(field_lp_norm(ws, p), kTiny);

    if (res <= config.residual_tol) {
      history.push_back(res);
      DualState out;
      out.v = vs;
      out.p = p;
      out.W = W;
      out.KQv = ws;
      out.el_residual = res;
      out.iterations = iter;
      out.q = config.q;
      out.residual_history = std::move(history);
      out.energy = energy(out);
      return out;
    }

    if (have_backup && res > 1.1 * last_res) {
      // reject: the step grew the residual, back off and shrink the step
      v = backup;
      damping = std::max(0.05, 0.5 * damping);
      continue;
    }
    history.push_back(res);
    last_res = res;
    backup = vs;
    have_backup = true;
    damping = std::min(config.damping, 1.2 * damping);

    BiRadialField cand = duality_map(ws, p);
    v = vs;
    v.values = (1.0 - damping) * vs.values + damping * cand.values;
  }
  throw SolverError("solve_bound_state: no convergence within max_iter",
                    history);
}

Reconstruction reconstruct_u(const DualState& state, const MultiplierSpec& mult) {
  const BiRadialGrid& g = *state.v.grid;
  const double p = state.p;

  auto apply_Q = [&](BiRadialField f, double expo) {
    for (Eigen::Index i = 0; i < f.values.rows(); ++i)
      for (Eigen::Index j = 0; j < f.values.cols(); ++j) {
        double q = weight_eval(state.W, g.dim, {g.t.x[i], g.s.x[j]});
        f.values(i, j) *= q > 0.0 ? std::pow(q, expo) : 0.0;
      }
    return f;
  };

  Reconstruction out;
  out.u = apply_real_resolvent(apply_Q(state.v, 1.0 / p), mult);
  double un = field_lp_norm(out.u, p);
  if (un < kTiny) {
    out.residual = 0.0;
    return out;
  }
  BiRadialField rhs = apply_Q(duality_map(out.u, p), 1.0);
  BiRadialField back = apply_real_resolvent(rhs, mult);
  back.values = out.u.values - back.values;
  out.residual = field_lp_norm(back, p) / un;
  return out;
}

Concentration concentration(const DualState& state, double R) {
  if (!(R > 0.0)) throw std::domain_error("concentration: R > 0 required");
  const BiRadialGrid& g = *state.v.grid;
  const double pp = dual_exponent(state.p);

  // |Q^{1/p} v|^{p'} on the grid, bilinear in between, zero outside
  Eigen::MatrixXd dens(state.v.values.rows(), state.v.values.cols());
  for (Eigen::Index i = 0; i < dens.rows(); ++i)
    for (Eigen::Index j = 0; j < dens.cols(); ++j) {
      double q = weight_eval(state.W, g.dim, {g.t.x[i], g.s.x[j]});
      double a = (q > 0.0 ? std::pow(q, 1.0 / state.p) : 0.0) *
                 std::abs(state.v.values(i, j));
      dens(i, j) = std::pow(a, pp);
    }

  auto interp = [&](double t, double s) -> double {
    const auto& tx = g.t.x;
    const auto& sx = g.s.x;
    if (t < tx.front() || t > tx.back() || s < sx.front() || s > sx.back())
      return 0.0;
    auto ti = std::upper_bound(tx.begin(), tx.end(), t) - tx.begin();
    auto si = std::upper_bound(sx.begin(), sx.end(), s) - sx.begin();
    std::size_t i = std::clamp<std::size_t>(ti, 1, tx.size() - 1) - 1;
    std::size_t j = std::clamp<std::size_t>(si, 1, sx.size() - 1) - 1;
    double ut = (t - tx[i]) / (tx[i + 1] - tx[i]);
    double us = (s - sx[j]) / (sx[j + 1] - sx[j]);
    return (1 - ut) * (1 - us) * dens(i, j) + ut * (1 - us) * dens(i + 1, j) +
           (1 - ut) * us * dens(i, j + 1) + ut * us * dens(i + 1, j + 1);
  };

  // rank grid nodes by density, evaluate the ball mass at the best few
  struct Node {
    double val, t, s;
  };
  std::vector<Node> nodes;
  for (Eigen::Index i = 0; i < dens.rows(); ++i)
    for (Eigen::Index j = 0; j < dens.cols(); ++j)
      if (dens(i, j) > 0.0) nodes.push_back({dens(i, j), g.t.x[i], g.s.x[j]});
  std::stable_sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) {
    return a.val > b.val;
  });
  if (nodes.size() > 32) nodes.resize(32);

  Concentration best;
  for (const auto& nd : nodes) {
    double m = ball_mass_of_density(interp, g.dim, {nd.t, nd.s}, R);
    if (m > best.mass) {
      best.mass = m;
      best.center = {nd.t, nd.s};
    }
  }
  return best;
}

}  // namespace shl
