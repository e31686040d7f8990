#include "shl/resolvent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>

#include "shl/specfun.hpp"

namespace shl {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

static_assert(std::endian::native == std::endian::little,
              "field serialization assumes a little-endian host");

// Composite Gauss-Legendre axis with per-panel node counts adapted to the
// oscillation phase seen by the opposite axis.
QuadRule build_axis(const std::vector<double>& breaks, double opposite_len,
                    int nodes_per_panel) {
  QuadRule out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double w = breaks[i + 1] - breaks[i];
    const double phase = w * opposite_len;
    int n = std::clamp(static_cast<int>(std::ceil(1.2 * phase)) + 3, 4,
                       nodes_per_panel);
    QuadRule p = gauss_legendre(n, breaks[i], breaks[i + 1]);
    out.x.insert(out.x.end(), p.x.begin(), p.x.end());
    out.w.insert(out.w.end(), p.w.begin(), p.w.end());
  }
  return out;
}

std::vector<double> merge_breaks(std::vector<double> b, double lo, double hi) {
  std::sort(b.begin(), b.end());
  std::vector<double> out;
  for (double x : b) {
    if (x < lo - 1e-12 || x > hi + 1e-12) continue;
    if (!out.empty() && x - out.back() < 1e-9) continue;
    out.push_back(x);
  }
  if (out.empty() || std::fabs(out.front() - lo) > 1e-12)
    out.insert(out.begin(), lo);
  else
    out.front() = lo;
  if (std::fabs(out.back() - hi) > 1e-12)
    out.push_back(hi);
  else
    out.back() = hi;
  return out;
}

Eigen::MatrixXd kernel_matrix(int m, const QuadRule& freq,
                              const QuadRule& space) {
  Eigen::MatrixXd K(freq.size(), space.size());
  for (std::size_t i = 0; i < freq.size(); ++i)
    for (std::size_t j = 0; j < space.size(); ++j)
      K(i, j) = sphere_ft(m, freq.x[i] * space.x[j]);
  return K;
}

Eigen::MatrixXcd contract(const Eigen::MatrixXd& A, const Eigen::MatrixXcd& F,
                          const Eigen::MatrixXd& B) {
  const Eigen::MatrixXd re = A * F.real().matrix() * B.transpose();
  const Eigen::MatrixXd im = A * F.imag().matrix() * B.transpose();
  Eigen::MatrixXcd out(re.rows(), re.cols());
  out.real() = re;
  out.imag() = im;
  return out;
}

// Lagrange extrapolation coefficients to 0 for the ladder points.
std::vector<double> richardson_coeffs(const std::vector<double>& eps) {
  std::vector<double> c(eps.size(), 1.0);
  for (std::size_t i = 0; i < eps.size(); ++i)
    for (std::size_t j = 0; j < eps.size(); ++j)
      if (j != i) c[i] *= eps[j] / (eps[j] - eps[i]);
  return c;
}

void check_mult(const MultiplierSpec& mult) {
  if (mult.eps_ladder.empty())
    throw std::invalid_argument("MultiplierSpec: empty ladder");
  for (std::size_t i = 0; i < mult.eps_ladder.size(); ++i) {
    if (!(mult.eps_ladder[i] > 0.0) ||
        (i > 0 && !(mult.eps_ladder[i] < mult.eps_ladder[i - 1])))
      throw std::invalid_argument(
          "MultiplierSpec: ladder must be strictly decreasing and positive");
  }
}

}  // namespace

GridPtr make_grid(const SymmetryDim& dim, double T, double Xi,
                  const GridOptions& opts) {
  if (!(T > 2.0) || !(Xi > 2.0))
    throw std::domain_error("make_grid: T, Xi > 2 required");

  std::vector<double> sb = uniform_breaks(0.0, T, opts.max_phase / Xi);
  sb.insert(sb.end(), opts.space_breaks_extra.begin(),
            opts.space_breaks_extra.end());
  sb = merge_breaks(std::move(sb), 0.0, T);

  std::vector<double> fb = uniform_breaks(0.0, Xi, opts.max_phase / T);
  // fine band below and around the unit circle for the singular multiplier
  const double band = std::min(1.1, Xi);
  for (double x = 0.0; x < band; x += opts.circle_refine) fb.push_back(x);
  fb.push_back(band);
  // geometric grading right at rho = 1
  for (double d = opts.grade_floor; d < opts.circle_refine;
       d /= opts.grade_ratio) {
    fb.push_back(1.0 - d);
    fb.push_back(1.0 + d);
  }
  fb.push_back(1.0);
  fb = merge_breaks(std::move(fb), 0.0, Xi);

  auto grid = std::make_shared<BiRadialGrid>();
  grid->dim = dim;
  grid->T = T;
  grid->Xi = Xi;
  grid->t = build_axis(sb, Xi, opts.nodes_per_panel);
  grid->s = grid->t;
  grid->r1 = build_axis(fb, T, opts.nodes_per_panel);
  grid->r2 = grid->r1;
  if (grid->t.size() < 16 || grid->r1.size() < 16)
    throw std::domain_error("make_grid: need >= 16 nodes per axis");

  const int d1 = dim.N - dim.k, d2 = dim.k;
  const Eigen::MatrixXd Kt = kernel_matrix(d1, grid->r1, grid->t);
  const Eigen::MatrixXd Ks = kernel_matrix(d2, grid->r2, grid->s);
  auto dens = [](const QuadRule& q, int d) {
    Eigen::VectorXd v(q.size());
    for (std::size_t j = 0; j < q.size(); ++j)
      v(j) = q.w[j] * std::pow(q.x[j], d - 1);
    return v;
  };
  grid->fwd_t = Kt * dens(grid->t, d1).asDiagonal();
  grid->fwd_s = Ks * dens(grid->s, d2).asDiagonal();
  grid->inv_t = Kt.transpose() * dens(grid->r1, d1).asDiagonal();
  grid->inv_s = Ks.transpose() * dens(grid->r2, d2).asDiagonal();
  return grid;
}

BiRadialField make_field(
    const GridPtr& grid, Side side,
    const std::function<std::complex<double>(double, double)>& f) {
  const QuadRule& a = side == Side::space ? grid->t : grid->r1;
  const QuadRule& b = side == Side::space ? grid->s : grid->r2;
  BiRadialField out{grid, side,
                    Eigen::MatrixXcd(static_cast<Eigen::Index>(a.size()),
                                     static_cast<Eigen::Index>(b.size()))};
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out.values(i, j) = f(a.x[i], b.x[j]);
  return out;
}

BiRadialField transform(const BiRadialField& f) {
  const BiRadialGrid& g = *f.grid;
  if (f.side == Side::space) {
    // refuse when a fat share of the data mass rides the truncation edge;
    // frequency-side inputs are exempt (the multiplier output is legitimately
    // spread over the whole band)
    const int d1 = g.dim.N - g.dim.k, d2 = g.dim.k;
    double total = 0.0, edge = 0.0;
    for (std::size_t i = 0; i < g.t.size(); ++i)
      for (std::size_t j = 0; j < g.s.size(); ++j) {
        const double m = g.t.w[i] * g.s.w[j] * std::pow(g.t.x[i], d1 - 1) *
                         std::pow(g.s.x[j], d2 - 1) *
                         std::abs(f.values(static_cast<Eigen::Index>(i),
                                           static_cast<Eigen::Index>(j)));
        total += m;
        if (g.t.x[i] > 0.9 * g.T || g.s.x[j] > 0.9 * g.T) edge += m;
      }
    if (total > 0.0 && edge > 0.2 * total)
      throw AccuracyError("transform: truncation T too small for the data",
                          edge / total);
    return {f.grid, Side::frequency, contract(g.fwd_t, f.values, g.fwd_s)};
  }
  return {f.grid, Side::space, contract(g.inv_t, f.values, g.inv_s)};
}

std::complex<double> transform_at(const BiRadialField& f, double rho1,
                                  double rho2) {
  const BiRadialGrid& g = *f.grid;
  const QuadRule& a = f.side == Side::space ? g.t : g.r1;
  const QuadRule& b = f.side == Side::space ? g.s : g.r2;
  const int d1 = g.dim.N - g.dim.k, d2 = g.dim.k;
  Eigen::VectorXd ka(a.size()), kb(b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    ka(i) = sphere_ft(d1, a.x[i] * rho1) * a.w[i] * std::pow(a.x[i], d1 - 1);
  for (std::size_t j = 0; j < b.size(); ++j)
    kb(j) = sphere_ft(d2, b.x[j] * rho2) * b.w[j] * std::pow(b.x[j], d2 - 1);
  const double re = ka.dot(f.values.real().matrix() * kb);
  const double im = ka.dot(f.values.imag().matrix() * kb);
  return {re, im};
}

double frequency_cutoff(double rho, const CutoffSpec& cutoff) {
  const double u = std::fabs(std::fabs(rho) - 1.0);
  if (u <= cutoff.inner) return 1.0;
  if (u >= cutoff.outer) return 0.0;
  auto phi = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double up = phi(cutoff.outer - u);
  const double dn = phi(u - cutoff.inner);
  return up / (up + dn);
}

BiRadialField apply_resolvent(const BiRadialField& f, const MultiplierSpec& mult,
                              double* eps_residual) {
  check_mult(mult);
  const BiRadialField fhat = f.side == Side::space ? transform(f) : f;
  const BiRadialGrid& g = *f.grid;
  const std::vector<double> coef = richardson_coeffs(mult.eps_ladder);

  Eigen::MatrixXcd uhat = Eigen::MatrixXcd::Zero(fhat.values.rows(),
                                                 fhat.values.cols());
  Eigen::MatrixXcd last;
  for (std::size_t l = 0; l < mult.eps_ladder.size(); ++l) {
    const std::complex<double> pole(1.0, mult.eps_ladder[l]);
    Eigen::MatrixXcd ul(fhat.values.rows(), fhat.values.cols());
    for (Eigen::Index i = 0; i < ul.rows(); ++i) {
      const double r1sq = g.r1.x[i] * g.r1.x[i];
      for (Eigen::Index j = 0; j < ul.cols(); ++j) {
        const double rho2 = r1sq + g.r2.x[j] * g.r2.x[j];
        ul(i, j) = fhat.values(i, j) / (rho2 - pole);
      }
    }
    uhat += coef[l] * ul;
    if (l + 1 == mult.eps_ladder.size()) last = std::move(ul);
  }
  if (eps_residual) {
    const double denom = fhat.values.norm();
    *eps_residual = denom > 0.0 ? (uhat - last).norm() / denom : 0.0;
  }
  return transform({f.grid, Side::frequency, std::move(uhat)});
}

BiRadialField apply_real_resolvent(const BiRadialField& f,
                                   const MultiplierSpec& mult) {
  BiRadialField u = apply_resolvent(f, mult);
  u.values.imag().setZero();
  return u;
}

std::pair<std::vector<std::complex<double>>, std::vector<std::complex<double>>>
split_phi(int N, const std::vector<double>& r_samples,
          const CutoffSpec& cutoff) {
  if (N < 3) throw std::domain_error("split_phi: N >= 3 required");
  for (double r : r_samples)
    if (!(r > 0.0)) throw std::domain_error("split_phi: r > 0 required");
  const double rmax =
      r_samples.empty() ? 1.0 : *std::max_element(r_samples.begin(),
                                                  r_samples.end());
  const double lo = 1.0 - cutoff.outer, hi = 1.0 + cutoff.outer;
  // symmetric panels about rho = 1 so the principal value log terms cancel
  const double width = std::min(0.01, 4.0 / std::max(1.0, rmax));
  std::vector<double> half = uniform_breaks(1.0, hi, width);
  std::vector<double> breaks;
  for (auto it = half.rbegin(); it != half.rend(); ++it)
    breaks.push_back(2.0 - *it);
  breaks.insert(breaks.end(), half.begin() + 1, half.end());
  // up to ~4 radians of phase per panel at the largest sample; 12 nodes keep
  // the far-field cancellation below the r^{-N} envelope
  const QuadRule rule = composite_legendre(breaks, 12);

  const double c0 = std::pow(2.0 * kPi, -0.5 * N);
  std::vector<std::complex<double>> phi1, phi2;
  phi1.reserve(r_samples.size());
  phi2.reserve(r_samples.size());
  for (double r : r_samples) {
    auto gfun = [&](double rho) {
      return frequency_cutoff(rho, cutoff) * sphere_ft(N, r * rho) *
             std::pow(rho, N - 1) / (rho + 1.0);
    };
    const double g1 = gfun(1.0);
    double pv = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double rho = rule.x[i];
      if (rho <= lo || rho >= hi) continue;
      pv += rule.w[i] * (gfun(rho) - g1) / (rho - 1.0);
    }
    // i pi delta(rho^2 - 1) over rho > 0 collapses to (i pi / 2) at rho = 1
    const std::complex<double> phi1_r =
        c0 * std::complex<double>(pv, kPi * g1);
    phi1.push_back(phi1_r);
    phi2.push_back(helmholtz_kernel(N, r) - phi1_r);
  }
  return {std::move(phi1), std::move(phi2)};
}

BiRadialField apply_KQ(const BiRadialField& v, const WeightSpec& W, double p,
                       const MultiplierSpec& mult) {
  if (v.side != Side::space)
    throw std::invalid_argument("apply_KQ: space-side field required");
  const BiRadialGrid& g = *v.grid;
  Eigen::MatrixXd q13(v.values.rows(), v.values.cols());
  for (Eigen::Index i = 0; i < q13.rows(); ++i)
    for (Eigen::Index j = 0; j < q13.cols(); ++j) {
      const double q = weight_eval(W, g.dim, {g.t.x[i], g.s.x[j]});
      q13(i, j) = q > 0.0 ? std::pow(q, 1.0 / p) : 0.0;
    }
  BiRadialField qv = v;
  qv.values.array() *= q13.array();
  BiRadialField u = apply_real_resolvent(qv, mult);
  u.values.array() *= q13.array();
  return u;
}

double bilinear_form(const BiRadialField& v, const BiRadialField& w,
                     const WeightSpec& W, double p, const MultiplierSpec& mult) {
  return field_inner(v, apply_KQ(w, W, p, mult));
}

namespace {

Eigen::VectorXd axis_density(const QuadRule& q, int d, double area) {
  Eigen::VectorXd v(q.size());
  for (std::size_t j = 0; j < q.size(); ++j)
    v(j) = area * q.w[j] * std::pow(q.x[j], d - 1);
  return v;
}

void field_axes(const BiRadialField& f, Eigen::VectorXd& da,
                Eigen::VectorXd& db) {
  const BiRadialGrid& g = *f.grid;
  const QuadRule& a = f.side == Side::space ? g.t : g.r1;
  const QuadRule& b = f.side == Side::space ? g.s : g.r2;
  da = axis_density(a, g.dim.N - g.dim.k, g.dim.area_t);
  db = axis_density(b, g.dim.k, g.dim.area_s);
}

}  // namespace

double field_lp_norm(const BiRadialField& f, double p) {
  Eigen::VectorXd da, db;
  field_axes(f, da, db);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.values.rows(); ++i)
    for (Eigen::Index j = 0; j < f.values.cols(); ++j)
      acc += da(i) * db(j) * std::pow(std::abs(f.values(i, j)), p);
  return std::pow(acc, 1.0 / p);
}

double field_inner(const BiRadialField& f, const BiRadialField& g) {
  if (f.side != g.side || f.grid != g.grid)
    throw std::invalid_argument("field_inner: incompatible fields");
  Eigen::VectorXd da, db;
  field_axes(f, da, db);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.values.rows(); ++i)
    for (Eigen::Index j = 0; j < f.values.cols(); ++j)
      acc += da(i) * db(j) *
             (std::conj(f.values(i, j)) * g.values(i, j)).real();
  return acc;
}

void save_field(const BiRadialField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_field: cannot open " + path);
  const std::int64_t head[5] = {
      f.grid->dim.N, f.grid->dim.k, static_cast<std::int64_t>(f.side),
      static_cast<std::int64_t>(f.values.rows()),
      static_cast<std::int64_t>(f.values.cols())};
  out.write(reinterpret_cast<const char*>(head), sizeof head);
  const double ext[2] = {f.grid->T, f.grid->Xi};
  out.write(reinterpret_cast<const char*>(ext), sizeof ext);
  for (Eigen::Index i = 0; i < f.values.rows(); ++i)
    for (Eigen::Index j = 0; j < f.values.cols(); ++j) {
      const double pair[2] = {f.values(i, j).real(), f.values(i, j).imag()};
      out.write(reinterpret_cast<const char*>(pair), sizeof pair);
    }
  if (!out) throw std::runtime_error("save_field: write failed");
}

BiRadialField load_field(const std::string& path, const GridOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_field: cannot open " + path);
  std::int64_t head[5];
  double ext[2];
  in.read(reinterpret_cast<char*>(head), sizeof head);
  in.read(reinterpret_cast<char*>(ext), sizeof ext);
  if (!in) throw std::runtime_error("load_field: truncated header");
  GridPtr grid = make_grid(SymmetryDim(static_cast<int>(head[0]),
                                       static_cast<int>(head[1])),
                           ext[0], ext[1], opts);
  BiRadialField f{grid, static_cast<Side>(head[2]),
                  Eigen::MatrixXcd(head[3], head[4])};
  const QuadRule& a = f.side == Side::space ? grid->t : grid->r1;
  const QuadRule& b = f.side == Side::space ? grid->s : grid->r2;
  if (a.size() != static_cast<std::size_t>(head[3]) ||
      b.size() != static_cast<std::size_t>(head[4]))
    throw std::runtime_error("load_field: node counts do not match the grid");
  for (Eigen::Index i = 0; i < f.values.rows(); ++i)
    for (Eigen::Index j = 0; j < f.values.cols(); ++j) {
      double pair[2];
      in.read(reinterpret_cast<char*>(pair), sizeof pair);
      f.values(i, j) = {pair[0], pair[1]};
    }
  if (!in) throw std::runtime_error("load_field: truncated payload");
  return f;
}

}  // namespace shl
