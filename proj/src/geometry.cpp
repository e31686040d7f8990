#include "shl/geometry.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <fstream>

#include "shl/quadrature.hpp"

namespace shl {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double sphere_area(int m) {
  if (m < 1) throw std::domain_error("sphere_area: m >= 1 required");
  return 2.0 * std::pow(kPi, 0.5 * m) / boost::math::tgamma(0.5 * m);
}

double ball_volume(int m) {
  if (m < 0) throw std::domain_error("ball_volume: m >= 0 required");
  return std::pow(kPi, 0.5 * m) / boost::math::tgamma(0.5 * m + 1.0);
}

SymmetryDim::SymmetryDim(int N_, int k_) : N(N_), k(k_) {
  if (N < 3 || k < 1 || k > N - 1)
    throw std::domain_error("SymmetryDim: need N >= 3 and 1 <= k <= N-1");
  area_t = sphere_area(N - k);
  area_s = sphere_area(k);
}

double weight_eval(const WeightSpec& W, const SymmetryDim&, ReducedPoint pt) {
  if (W.is_power()) {
    const PowerLayer& p = W.power();
    if (pt.s == 0.0) return p.cap;  // max{s^-a, s^-b} -> infinity
    const double thr =
        p.a * std::max(std::pow(pt.s, -p.alpha), std::pow(pt.s, -p.beta));
    return pt.t <= thr ? p.cap : 0.0;
  }
  const SampledWeight& sw = std::get<SampledWeight>(W.w);
  const auto& tn = sw.t_nodes;
  const auto& sn = sw.s_nodes;
  if (pt.t < tn.front() || pt.t > tn.back() || pt.s < sn.front() ||
      pt.s > sn.back())
    return 0.0;
  auto cell = [](const std::vector<double>& nodes, double x) {
    std::size_t i =
        std::upper_bound(nodes.begin(), nodes.end(), x) - nodes.begin();
    if (i == 0) i = 1;
    if (i >= nodes.size()) i = nodes.size() - 1;
    return i - 1;
  };
  const std::size_t i = cell(tn, pt.t), j = cell(sn, pt.s);
  const double u = (pt.t - tn[i]) / (tn[i + 1] - tn[i]);
  const double v = (pt.s - sn[j]) / (sn[j + 1] - sn[j]);
  const std::size_t ns = sn.size();
  const double f00 = sw.values[i * ns + j], f01 = sw.values[i * ns + j + 1];
  const double f10 = sw.values[(i + 1) * ns + j],
               f11 = sw.values[(i + 1) * ns + j + 1];
  const double val = (1 - u) * ((1 - v) * f00 + v * f01) +
                     u * ((1 - v) * f10 + v * f11);
  return std::max(0.0, val);
}

double reduced_volume_element(const SymmetryDim& dim, ReducedPoint pt) {
  return dim.area_t * dim.area_s * std::pow(pt.t, dim.N - dim.k - 1) *
         std::pow(pt.s, dim.k - 1);
}

namespace {

// Measure of the polar cap {w in S^{d-1} : w.e >= c} (unnormalized sigma).
double cap_measure(int d, double c) {
  if (c <= -1.0) return sphere_area(d);
  if (c >= 1.0) return 0.0;
  if (d == 1) return 1.0;  // the near point of S^0
  static const QuadRule rule = gauss_legendre(24, 0.0, 1.0);
  const double theta = std::acos(c);
  double integral = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double th = theta * rule.x[i];
    integral += theta * rule.w[i] * std::pow(std::sin(th), d - 2);
  }
  return (d == 2 ? 2.0 : sphere_area(d - 1)) * integral;
}

// Angular measure on the factor sphere of points within the ball slice:
// condition 2 * r * r0 * (1 - cos(theta)) <= rho2 on S^{d-1} of radius r.
double slice_cap(int d, double r, double r0, double rho2) {
  const double rr = 2.0 * r * r0;
  if (rr == 0.0) return sphere_area(d);  // degenerate orbit: whole sphere
  if (d == 1) {
    // S^0: near point always inside, antipode iff 2*rr <= rho2
    return 2.0 * rr <= rho2 ? 2.0 : 1.0;
  }
  return cap_measure(d, 1.0 - rho2 / rr);
}

}  // namespace

double ball_mass_of_density(const std::function<double(double, double)>& density,
                            const SymmetryDim& dim, ReducedPoint center,
                            double R) {
  if (!(R > 0.0)) throw std::domain_error("ball mass: R > 0 required");
  const int d1 = dim.N - dim.k, d2 = dim.k;
  const double t0 = std::max(0.0, center.t - R), t1 = center.t + R;
  const double s0 = std::max(0.0, center.s - R), s1 = center.s + R;
  const int n = 240;
  const double ht = (t1 - t0) / n, hs = (s1 - s0) / n;
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = t0 + (i + 0.5) * ht;
    const double dt2 = (t - center.t) * (t - center.t);
    if (dt2 >= R * R) continue;
    for (int j = 0; j < n; ++j) {
      const double s = s0 + (j + 0.5) * hs;
      const double rho2 = R * R - dt2 - (s - center.s) * (s - center.s);
      if (rho2 <= 0.0) continue;
      const double q = density(t, s);
      if (q == 0.0) continue;
      mass += q * std::pow(t, d1 - 1) * std::pow(s, d2 - 1) *
              slice_cap(d1, t, center.t, rho2) *
              slice_cap(d2, s, center.s, rho2) * ht * hs;
    }
  }
  return mass;
}

double region_ball_mass(const WeightSpec& W, const SymmetryDim& dim,
                        ReducedPoint center, double R) {
  if (!W.is_power())
    throw std::domain_error("region_ball_mass: layer-type weight required");
  return ball_mass_of_density(
      [&](double t, double s) {
        return weight_eval(W, dim, ReducedPoint{t, s});
      },
      dim, center, R);
}

long orbit_packing_lower_bound(const SymmetryDim& dim, ReducedPoint pt,
                               double R) {
  if (!(R > 0.0)) throw std::domain_error("orbit_packing_lower_bound: R > 0");
  auto factor = [R](int d, double radius) -> long {
    if (radius == 0.0) return 1;
    if (d == 1) return 2.0 * radius > 2.0 * R ? 2 : 1;
    return std::max<long>(1, static_cast<long>(std::floor(kPi * radius / (2.0 * R))));
  };
  return factor(dim.N - dim.k, pt.t) * factor(dim.k, pt.s);
}

namespace {

// Product-quadrature point sets on S^{d-1}, d <= 3, with weights summing to
// the total surface measure.
std::vector<std::pair<std::vector<double>, double>> sphere_nodes(int d) {
  std::vector<std::pair<std::vector<double>, double>> out;
  if (d == 1) {
    out.push_back({{1.0}, 1.0});
    out.push_back({{-1.0}, 1.0});
  } else if (d == 2) {
    const int n = 64;
    for (int i = 0; i < n; ++i) {
      const double phi = 2.0 * kPi * i / n;
      out.push_back({{std::cos(phi), std::sin(phi)}, 2.0 * kPi / n});
    }
  } else if (d == 3) {
    const int nphi = 64;
    QuadRule gu = gauss_legendre(32, -1.0, 1.0);
    for (std::size_t iu = 0; iu < gu.size(); ++iu) {
      const double u = gu.x[iu], su = std::sqrt(1.0 - u * u);
      for (int i = 0; i < nphi; ++i) {
        const double phi = 2.0 * kPi * i / nphi;
        out.push_back(
            {{su * std::cos(phi), su * std::sin(phi), u},
             gu.w[iu] * 2.0 * kPi / nphi});
      }
    }
  } else {
    throw std::domain_error("haar_symmetrize: only N <= 4 supported");
  }
  return out;
}

}  // namespace

std::vector<double> haar_symmetrize(const SpaceSampler& f,
                                    const SymmetryDim& dim,
                                    const std::vector<ReducedPoint>& grid) {
  if (dim.N > 4)
    throw std::domain_error("haar_symmetrize: only N <= 4 supported");
  const auto eta = sphere_nodes(dim.N - dim.k);
  const auto mu = sphere_nodes(dim.k);
  const double total = dim.area_t * dim.area_s;
  std::vector<double> out;
  out.reserve(grid.size());
  std::vector<double> x(dim.N);
  for (const ReducedPoint& pt : grid) {
    double acc = 0.0;
    for (const auto& [e, we] : eta) {
      for (const auto& [m, wm] : mu) {
        for (int i = 0; i < dim.N - dim.k; ++i) x[i] = pt.t * e[i];
        for (int i = 0; i < dim.k; ++i) x[dim.N - dim.k + i] = pt.s * m[i];
        acc += we * wm * f(x);
      }
    }
    out.push_back(acc / total);
  }
  return out;
}

WeightSpec weight_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "power") {
    PowerLayer p;
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.value("beta", p.alpha);
    p.a = j.value("a", 1.0);
    p.cap = j.value("cap", 1.0);
    return WeightSpec(p);
  }
  if (kind == "sampled") {
    nlohmann::json table = j;
    if (j.contains("table-path")) {
      std::ifstream in(j.at("table-path").get<std::string>());
      if (!in) throw std::runtime_error("weight_from_json: cannot open table");
      in >> table;
    }
    SampledWeight sw;
    sw.t_nodes = table.at("t_nodes").get<std::vector<double>>();
    sw.s_nodes = table.at("s_nodes").get<std::vector<double>>();
    sw.values = table.at("values").get<std::vector<double>>();
    if (sw.t_nodes.size() < 2 || sw.s_nodes.size() < 2 ||
        sw.values.size() != sw.t_nodes.size() * sw.s_nodes.size())
      throw std::runtime_error("weight_from_json: inconsistent table");
    return WeightSpec(std::move(sw));
  }
  throw std::runtime_error("weight_from_json: unknown kind " + kind);
}

nlohmann::json weight_to_json(const WeightSpec& W) {
  nlohmann::json j;
  if (W.is_power()) {
    const PowerLayer& p = W.power();
    j["kind"] = "power";
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["a"] = p.a;
    j["cap"] = p.cap;
  } else {
    const SampledWeight& sw = std::get<SampledWeight>(W.w);
    j["kind"] = "sampled";
    j["t_nodes"] = sw.t_nodes;
    j["s_nodes"] = sw.s_nodes;
    j["values"] = sw.values;
  }
  return j;
}

}  // namespace shl
