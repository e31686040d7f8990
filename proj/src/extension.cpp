#include "shl/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "shl/parallel.hpp"
#include "shl/quadrature.hpp"
#include "shl/specfun.hpp"

namespace shl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfSqrt2 = 0.70710678118654752440;

void check_profile(const SphereProfile& h) {
  if (h.nodes.size() < 2 || h.nodes.size() != h.values.size())
    throw std::domain_error("SphereProfile: need >= 2 nodes with values");
  if (std::abs(h.nodes.front()) > 1e-12 || std::abs(h.nodes.back() - 1.0) > 1e-12)
    throw std::domain_error("SphereProfile: endpoints 0 and 1 required");
  for (std::size_t i = 0; i + 1 < h.nodes.size(); ++i)
    if (!(h.nodes[i] < h.nodes[i + 1]))
      throw std::domain_error("SphereProfile: nodes must increase");
  for (auto v : h.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("SphereProfile: non-finite value");
}

// Fritsch-Carlson slope at an interior node; keeps monotone data monotone so
// band families stay nested and bounded by their node values.
double fc_slope(double h0, double h1, double d0, double d1) {
  if (d0 * d1 <= 0.0) return 0.0;
  double w0 = 2.0 * h1 + h0, w1 = h1 + 2.0 * h0;
  return (w0 + w1) / (w0 / d0 + w1 / d1);
}

double hermite(double y0, double y1, double m0, double m1, double h, double u) {
  double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * m0 +
         (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * h * m1;
}

}  // namespace

std::complex<double> SphereProfile::eval(double r) const {
  if (r < -1e-12 || r > 1.0 + 1e-12)
    throw std::domain_error("SphereProfile::eval: r outside [0,1]");
  r = std::clamp(r, nodes.front(), nodes.back());
  std::size_t n = nodes.size();
  auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
  std::size_t i = it == nodes.begin() ? 0 : (it - nodes.begin()) - 1;
  if (i >= n - 1) i = n - 2;

  double h = nodes[i + 1] - nodes[i];
  double u = (r - nodes[i]) / h;
  if (i == 0 || i == n - 2 || n < 4) {
    return values[i] + (values[i + 1] - values[i]) * u;  // end panels linear
  }
  double hm = nodes[i] - nodes[i - 1];
  double hp = nodes[i + 2] - nodes[i + 1];
  auto component = [&](auto pick) {
    double dm = (pick(i) - pick(i - 1)) / hm;
    double d0 = (pick(i + 1) - pick(i)) / h;
    double dp = (pick(i + 2) - pick(i + 1)) / hp;
    double m0 = fc_slope(hm, h, dm, d0);
    double m1 = fc_slope(h, hp, d0, dp);
    return hermite(pick(i), pick(i + 1), m0, m1, h, u);
  };
  return {component([&](std::size_t j) { return values[j].real(); }),
          component([&](std::size_t j) { return values[j].imag(); })};
}

SphereProfile constant_profile(std::complex<double> c, int n) {
  if (n < 2) throw std::domain_error("constant_profile: n >= 2");
  SphereProfile p;
  for (int i = 0; i < n; ++i) {
    p.nodes.push_back(static_cast<double>(i) / (n - 1));
    p.values.push_back(c);
  }
  return p;
}

double sphere_l2_norm(const SymmetryDim& dim, const SphereProfile& h) {
  check_profile(h);
  const int d1 = dim.tdim();
  const double e = 0.5 * (dim.k - 2);
  double acc = 0.0;
  std::size_t np = h.nodes.size() - 1;
  for (std::size_t p = 0; p < np; ++p) {
    double a = h.nodes[p], b = h.nodes[p + 1];
    bool last = (p == np - 1);
    // the (1-r)^e half of the endpoint weight goes into the Jacobi rule on
    // the final panel; everywhere else plain Gauss-Legendre
    QuadRule rule = last ? gauss_jacobi_right(16, a, b, e)
                         : gauss_legendre(16, a, b);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      double r = rule.x[i];
      double dens = std::pow(r, d1 - 1) * std::pow(1.0 + r, e);
      if (!last) dens *= std::pow(1.0 - r, e);
      acc += rule.w[i] * dens * std::norm(h.eval(r));
    }
  }
  if (!(acc >= 0.0) || !std::isfinite(acc))
    throw std::runtime_error("sphere_l2_norm: non-finite integral");
  return std::sqrt(dim.area_t * dim.area_s * acc);
}

namespace {

// Oscillatory slice integral, split at r = 1/sqrt(2); the outer half is
// mapped to u = sqrt(1-r^2), which removes the endpoint singularity and turns
// the s-oscillation into a plain linear phase.
struct SliceTerm {
  double at, as;  // radii multiplying t and s inside the sphere transforms
  std::complex<double> c;  // quadrature weight * density * h
};

std::vector<double> refine_breaks(const std::vector<double>& base,
                                  double max_width) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    auto sub = uniform_breaks(base[i], base[i + 1], max_width);
    if (!out.empty()) sub.erase(sub.begin());
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::vector<SliceTerm> slice_terms(const SymmetryDim& dim,
                                   const SphereProfile& h, double osc,
                                   const QuadratureSpec& quad, double width_cap,
                                   int* panel_count = nullptr) {
  const int d1 = dim.tdim(), d2 = dim.sdim();
  double wlen = 2.0 * kPi / (quad.panels_per_wavelength * std::max(osc, 1.0));
  wlen = std::min(wlen, width_cap);

  // inner half in r: profile breakpoints below 1/sqrt(2)
  std::vector<double> b1{0.0};
  for (double r : h.nodes)
    if (r > 1e-14 && r < kHalfSqrt2 - 1e-14) b1.push_back(r);
  b1.push_back(kHalfSqrt2);
  b1 = refine_breaks(b1, wlen);

  // outer half in u = sqrt(1-r^2): images of profile breakpoints above
  std::vector<double> b2{0.0};
  for (double r : h.nodes) {
    if (r > kHalfSqrt2 + 1e-14 && r < 1.0 - 1e-14)
      b2.push_back(std::sqrt(std::max(0.0, 1.0 - r * r)));
  }
  std::sort(b2.begin(), b2.end());
  b2.push_back(kHalfSqrt2);
  b2 = refine_breaks(b2, wlen);

  if (panel_count)
    *panel_count = static_cast<int>(b1.size() + b2.size()) - 2;

  std::vector<SliceTerm> terms;
  QuadRule q1 = composite_legendre(b1, 8);
  for (std::size_t i = 0; i < q1.size(); ++i) {
    double r = q1.x[i], u = std::sqrt(std::max(0.0, 1.0 - r * r));
    double dens = std::pow(r, d1 - 1) * std::pow(1.0 - r * r, 0.5 * (d2 - 2));
    terms.push_back({r, u, q1.w[i] * dens * h.eval(r)});
  }
  QuadRule q2 = composite_legendre(b2, 8);
  for (std::size_t i = 0; i < q2.size(); ++i) {
    double u = q2.x[i], r = std::sqrt(std::max(0.0, 1.0 - u * u));
    double dens = std::pow(u, d2 - 1) * std::pow(1.0 - u * u, 0.5 * (d1 - 2));
    terms.push_back({r, u, q2.w[i] * dens * h.eval(r)});
  }
  return terms;
}

std::complex<double> eval_terms(const std::vector<SliceTerm>& terms, int d1,
                                int d2, double t, double s) {
  std::complex<double> acc = 0.0;
  for (const auto& tm : terms)
    acc += tm.c * (sphere_ft(d1, tm.at * t) * sphere_ft(d2, tm.as * s));
  return acc;
}

}  // namespace

std::complex<double> extend_reduced(const SymmetryDim& dim,
                                    const SphereProfile& h, ReducedPoint pt,
                                    const QuadratureSpec& quad) {
  check_profile(h);
  if (quad.panels_per_wavelength < 4 || quad.max_panels < 2 ||
      !(quad.abs_tol > 0.0))
    throw std::domain_error("extend_reduced: bad quadrature spec");
  if (pt.t < 0.0 || pt.s < 0.0)
    throw std::domain_error("extend_reduced: t, s >= 0 required");
  const int d1 = dim.tdim(), d2 = dim.sdim();
  const double osc = std::max(pt.t, pt.s);

  int panels = 0;
  auto terms = slice_terms(dim, h, osc, quad, 0.25, &panels);
  if (panels <= quad.max_panels)
    return eval_terms(terms, d1, d2, pt.t, pt.s);

  // budget exceeded: estimate the achieved tolerance from a coarse pair that
  // fits the budget, then refuse
  double scale = static_cast<double>(panels) / quad.max_panels;
  auto coarse = slice_terms(dim, h, osc / scale, quad, 0.25);
  auto coarser = slice_terms(dim, h, osc / (2.0 * scale), quad, 0.25);
  auto v1 = eval_terms(coarse, d1, d2, pt.t, pt.s);
  auto v2 = eval_terms(coarser, d1, d2, pt.t, pt.s);
  throw AccuracyError("extend_reduced: panel budget exceeded",
                      std::abs(v1 - v2));
}

std::complex<double> extend_direct(const SymmetryDim& dim,
                                   const SphereSampler& F,
                                   const std::vector<double>& x,
                                   double abs_tol) {
  const int N = dim.N;
  if (N > 4) throw std::domain_error("extend_direct: supports N <= 4 only");
  if (static_cast<int>(x.size()) != N)
    throw std::domain_error("extend_direct: point dimension mismatch");

  auto integrate = [&](int n) {
    std::complex<double> acc = 0.0;
    int nphi = 2 * n;
    double dphi = 2.0 * kPi / nphi;
    if (N == 3) {
      QuadRule qc = gauss_legendre(n, -1.0, 1.0);
      for (std::size_t i = 0; i < qc.size(); ++i) {
        double c = qc.x[i], sn = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int j = 0; j < nphi; ++j) {
          double phi = j * dphi;
          std::vector<double> w{sn * std::cos(phi), sn * std::sin(phi), c};
          double dot = w[0] * x[0] + w[1] * x[1] + w[2] * x[2];
          acc += qc.w[i] * dphi * F(w) *
                 std::complex<double>(std::cos(dot), std::sin(dot));
        }
      }
    } else {
      QuadRule qchi = gauss_legendre(n, 0.0, kPi);
      QuadRule qc = gauss_legendre(n, -1.0, 1.0);
      for (std::size_t a = 0; a < qchi.size(); ++a) {
        double chi = qchi.x[a], schi = std::sin(chi);
        double wchi = qchi.w[a] * schi * schi;
        for (std::size_t i = 0; i < qc.size(); ++i) {
          double c = qc.x[i], sn = std::sqrt(std::max(0.0, 1.0 - c * c));
          for (int j = 0; j < nphi; ++j) {
            double phi = j * dphi;
            std::vector<double> w{schi * sn * std::cos(phi),
                                  schi * sn * std::sin(phi), schi * c,
                                  std::cos(chi)};
            double dot = 0.0;
            for (int d = 0; d < 4; ++d) dot += w[d] * x[d];
            acc += wchi * qc.w[i] * dphi * F(w) *
                   std::complex<double>(std::cos(dot), std::sin(dot));
          }
        }
      }
    }
    return acc * std::pow(2.0 * kPi, -0.5 * N);
  };

  double xn = 0.0;
  for (double xi : x) xn += xi * xi;
  int n = std::max(16, static_cast<int>(std::ceil(1.5 * std::sqrt(xn))) + 8);
  std::complex<double> prev = integrate(n);
  double diff = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 10; ++iter) {
    n = n * 3 / 2;
    std::complex<double> cur = integrate(n);
    diff = std::abs(cur - prev);
    if (diff <= abs_tol) return cur;
    prev = cur;
  }
  throw AccuracyError("extend_direct: refinement did not converge", diff);
}

namespace {

// Separable tabulation of the extension on a tensor grid over [0,trunc]^2:
// E(t,s) = sum_m c_m dsig_{d1}(at_m t) dsig_{d2}(as_m s), contracted with two
// dense matrix products.
struct ExtEval {
  SymmetryDim dim;
  double trunc = 0.0;
  std::vector<SliceTerm> terms;
  std::vector<double> breaks;  // shared t/s panel layout
  QuadRule axis;               // composite rule on [0,trunc]
  Eigen::MatrixXd Bs;          // terms x axis nodes, second-factor transforms
  Eigen::MatrixXcd E;          // axis x axis extension values
};

ExtEval build_ext_eval(const SymmetryDim& dim, const SphereProfile& h,
                       double trunc, const QuadratureSpec& quad) {
  ExtEval ev;
  ev.dim = dim;
  ev.trunc = trunc;
  ev.terms = slice_terms(dim, h, trunc, quad, 0.25);
  ev.breaks = uniform_breaks(0.0, trunc, 0.4);
  ev.axis = composite_legendre(ev.breaks, 6);

  const int d1 = dim.tdim(), d2 = dim.sdim();
  const Eigen::Index m = static_cast<Eigen::Index>(ev.terms.size());
  const Eigen::Index n = static_cast<Eigen::Index>(ev.axis.size());
  Eigen::MatrixXd Bt(m, n);
  ev.Bs.resize(m, n);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t mi) {
    Eigen::Index i = static_cast<Eigen::Index>(mi);
    for (Eigen::Index j = 0; j < n; ++j) {
      Bt(i, j) = sphere_ft(d1, ev.terms[mi].at * ev.axis.x[j]);
      ev.Bs(i, j) = sphere_ft(d2, ev.terms[mi].as * ev.axis.x[j]);
    }
  });
  Eigen::VectorXd cre(m), cim(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    cre(i) = ev.terms[i].c.real();
    cim(i) = ev.terms[i].c.imag();
  }
  Eigen::MatrixXd Er = Bt.transpose() * (cre.asDiagonal() * ev.Bs);
  Eigen::MatrixXd Ei = Bt.transpose() * (cim.asDiagonal() * ev.Bs);
  ev.E = Er.cast<std::complex<double>>() +
         std::complex<double>(0.0, 1.0) * Ei.cast<std::complex<double>>();
  return ev;
}

double layer_cut(const WeightSpec& W, double s, double trunc) {
  if (!W.is_power()) return trunc;
  const auto& P = W.power();
  if (s <= 0.0) return trunc;
  double cut = P.a * std::max(std::pow(s, -P.alpha), std::pow(s, -P.beta));
  return std::min(cut, trunc);
}

// Per-column region cut against the shared panel layout: whole panels below
// the cut reuse the tabulated grid, the straddling panel gets a fresh rule.
struct RegionCut {
  std::vector<Eigen::Index> full_nodes;         // per column: grid nodes kept
  std::vector<std::vector<double>> part_t;      // fresh nodes on the cut panel
  std::vector<std::vector<double>> part_w;
  std::vector<std::vector<std::complex<double>>> part_E;
};

RegionCut build_region_cut(const ExtEval& ev, const WeightSpec& W) {
  const int d1 = ev.dim.tdim();
  const std::size_t n = ev.axis.size();
  const int nodes_per_panel = 6;
  RegionCut cut;
  cut.full_nodes.resize(n);
  cut.part_t.resize(n);
  cut.part_w.resize(n);
  cut.part_E.resize(n);

  parallel_for(n, [&](std::size_t j) {
    double s = ev.axis.x[j];
    double tcut = layer_cut(W, s, ev.trunc);
    auto it = std::upper_bound(ev.breaks.begin(), ev.breaks.end(), tcut);
    std::size_t panel = (it - ev.breaks.begin());
    panel = panel == 0 ? 0 : panel - 1;
    std::size_t full_panels = std::min(panel, ev.breaks.size() - 1);
    cut.full_nodes[j] = static_cast<Eigen::Index>(full_panels * nodes_per_panel);
    double lo = ev.breaks[full_panels];
    if (tcut > lo + 1e-14 && full_panels < ev.breaks.size() - 1) {
      QuadRule pr = gauss_legendre(nodes_per_panel, lo, tcut);
      cut.part_t[j] = pr.x;
      cut.part_w[j] = pr.w;
      cut.part_E[j].resize(pr.size());
      for (std::size_t i = 0; i < pr.size(); ++i) {
        std::complex<double> acc = 0.0;
        for (std::size_t m = 0; m < ev.terms.size(); ++m)
          acc += ev.terms[m].c * sphere_ft(d1, ev.terms[m].at * pr.x[i]) *
                 ev.Bs(static_cast<Eigen::Index>(m),
                       static_cast<Eigen::Index>(j));
        cut.part_E[j][i] = acc;
      }
    }
  });
  return cut;
}

WeightedNorm lq_from_eval(const ExtEval& ev, const RegionCut& cut,
                          const WeightSpec& W, double q) {
  const SymmetryDim& dim = ev.dim;
  const int d1 = dim.tdim(), d2 = dim.sdim();
  const std::size_t n = ev.axis.size();
  const double area = dim.area_t * dim.area_s;

  std::vector<double> col(n, 0.0);
  parallel_for(n, [&](std::size_t j) {
    double s = ev.axis.x[j];
    double acc = 0.0;
    Eigen::Index nf = cut.full_nodes[j];
    for (Eigen::Index i = 0; i < nf; ++i) {
      double t = ev.axis.x[i];
      double Q = weight_eval(W, dim, {t, s});
      if (Q == 0.0) continue;
      acc += ev.axis.w[i] * std::pow(t, d1 - 1) * Q *
             std::pow(std::abs(ev.E(i, static_cast<Eigen::Index>(j))), q);
    }
    for (std::size_t i = 0; i < cut.part_t[j].size(); ++i) {
      double t = cut.part_t[j][i];
      double Q = weight_eval(W, dim, {t, s});
      if (Q == 0.0) continue;
      acc += cut.part_w[j][i] * std::pow(t, d1 - 1) * Q *
             std::pow(std::abs(cut.part_E[j][i]), q);
    }
    col[j] = acc * std::pow(s, d2 - 1);
  });
  double mass = 0.0;
  for (std::size_t j = 0; j < n; ++j) mass += ev.axis.w[j] * col[j];
  mass *= area;

  WeightedNorm out;
  out.value = mass > 0.0 ? std::pow(mass, 1.0 / q) : 0.0;

  if (!W.is_power()) {
    // sampled tables vanish outside their grid, nothing is truncated
    out.tail = 0.0;
    out.tail_ok = true;
    return out;
  }
  const auto& P = W.power();
  if (P.cap == 0.0) {
    out.tail = 0.0;
    return out;
  }

  // empirical envelope constant along the truncation edges, inside the region
  double C = 0.0;
  auto bump = [&](double t, double s, std::complex<double> E) {
    if (weight_eval(W, dim, {t, s}) == 0.0) return;
    double amp = std::abs(E) * std::pow(1.0 + t, 0.5 * (d1 - 1)) *
                 std::pow(1.0 + s, 0.5 * (d2 - 1));
    C = std::max(C, amp);
  };
  Eigen::Index last = static_cast<Eigen::Index>(n) - 1;
  for (Eigen::Index i = 0; i <= last; ++i) {
    bump(ev.axis.x[i], ev.axis.x[last], ev.E(i, last));
    bump(ev.axis.x[last], ev.axis.x[i], ev.E(last, i));
  }

  // beyond s = trunc the layer has width a s^{-beta}; beyond t = trunc the
  // region forces s <= (a/t)^{1/alpha}
  double es = (d2 - 1) - 0.5 * q * (d2 - 1) - P.beta * d1;
  double et = (d1 - 1) - 0.5 * q * (d1 - 1) - d2 / P.alpha;
  if (!(es < -1.0) || !(et < -1.0)) {
    out.tail_ok = false;
    out.tail = std::numeric_limits<double>::infinity();
    return out;
  }
  double Cq = std::pow(C, q) * P.cap * area;
  double s_term = Cq * std::pow(P.a, d1) / d1 *
                  std::pow(ev.trunc, es + 1.0) / (-es - 1.0);
  double t_term = Cq * std::pow(P.a, d2 / P.alpha) / d2 *
                  std::pow(ev.trunc, et + 1.0) / (-et - 1.0);
  out.tail = std::pow(s_term + t_term, 1.0 / q);
  return out;
}

}  // namespace

WeightedNorm weighted_lq_norm(const SymmetryDim& dim, const SphereProfile& h,
                              const WeightSpec& W, double q, double trunc,
                              const QuadratureSpec& quad) {
  check_profile(h);
  if (!(q >= 1.0)) throw std::domain_error("weighted_lq_norm: q >= 1 required");
  if (!(trunc > 0.0)) throw std::domain_error("weighted_lq_norm: trunc > 0");
  ExtEval ev = build_ext_eval(dim, h, trunc, quad);
  RegionCut cut = build_region_cut(ev, W);
  return lq_from_eval(ev, cut, W, q);
}

double restriction_norm(const SymmetryDim& dim, const BiRadialField& f,
                        const WeightSpec& W) {
  if (f.side != Side::space)
    throw std::domain_error("restriction_norm: space-side field required");
  const auto& g = *f.grid;
  double gap = 0.0;
  for (std::size_t i = 1; i < g.t.size(); ++i)
    gap = std::max(gap, g.t.x[i] - g.t.x[i - 1]);
  for (std::size_t i = 1; i < g.s.size(); ++i)
    gap = std::max(gap, g.s.x[i] - g.s.x[i - 1]);
  if (gap > 1.5)
    throw AccuracyError("restriction_norm: grid too coarse for the unit circle",
                        gap);

  BiRadialField qf = f;
  for (Eigen::Index i = 0; i < qf.values.rows(); ++i)
    for (Eigen::Index j = 0; j < qf.values.cols(); ++j)
      qf.values(i, j) *=
          weight_eval(W, dim, {g.t.x[static_cast<std::size_t>(i)],
                               g.s.x[static_cast<std::size_t>(j)]});

  const int nr = 129;
  SphereProfile prof;
  prof.nodes.resize(nr);
  prof.values.resize(nr);
  parallel_for(nr, [&](std::size_t j) {
    double r = static_cast<double>(j) / (nr - 1);
    prof.nodes[j] = r;
    prof.values[j] = transform_at(qf, r, std::sqrt(std::max(0.0, 1.0 - r * r)));
  });
  return sphere_l2_norm(dim, prof);
}

SphereProfile band_profile(double delta) {
  if (!(delta > 0.0) || delta > 1.0)
    throw std::domain_error("band_profile: delta in (0,1] required");
  SphereProfile p;
  if (delta >= 1.0) return constant_profile(1.0, 33);

  double edge = 1.0 - delta;
  double h = delta / 8.0;  // node spacing near the edge, also the ramp width
  std::vector<double> nodes;
  for (double r : uniform_breaks(0.0, std::max(0.0, edge - 2.0 * h),
                                 1.0 / 16.0))
    nodes.push_back(r);
  for (double r = nodes.back() + h; r < 1.0 - 0.5 * h; r += h)
    nodes.push_back(r);
  nodes.push_back(1.0);

  auto smooth = [&](double r) {
    if (r <= edge) return 0.0;
    if (r >= edge + h) return 1.0;
    double u = (r - edge) / h;
    return u * u * (3.0 - 2.0 * u);
  };
  for (double r : nodes) {
    p.nodes.push_back(r);
    p.values.push_back(smooth(r));
  }
  return p;
}

std::vector<ScanRow> admissibility_scan(const SymmetryDim& dim,
                                        const WeightSpec& W,
                                        const std::vector<double>& q_list,
                                        const std::vector<double>& deltas,
                                        double trunc,
                                        const QuadratureSpec& quad) {
  std::vector<ScanRow> rows(q_list.size() * deltas.size());
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    SphereProfile band = band_profile(deltas[di]);
    double n2 = sphere_l2_norm(dim, band);
    ExtEval ev = build_ext_eval(dim, band, trunc, quad);
    RegionCut cut = build_region_cut(ev, W);
    for (std::size_t qi = 0; qi < q_list.size(); ++qi) {
      WeightedNorm wn = lq_from_eval(ev, cut, W, q_list[qi]);
      ScanRow& row = rows[qi * deltas.size() + di];
      row.q = q_list[qi];
      row.param = deltas[di];
      row.norm_q = wn.value;
      row.norm_2 = n2;
      row.ratio = n2 > 0.0 ? wn.value / n2 : 0.0;
      row.tail_ok = wn.tail_ok;
    }
  }
  return rows;
}

}  // namespace shl
