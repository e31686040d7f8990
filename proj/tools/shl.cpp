// shl: reproducible experiment runner. Every subcommand is a pure function of
// its JSON config: fixed seeds, deterministic output bytes, atomic writes.
// Exit codes: 0 success, 1 config error, 2 accuracy error, 3 non-convergence.

#include <cinttypes>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shl/dualvar.hpp"
#include "shl/extension.hpp"
#include "shl/geometry.hpp"
#include "shl/resolvent.hpp"
#include "shl/specfun.hpp"
#include "shl/thresholds.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace shl;

namespace {

const double PI = 3.14159265358979323846;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Ctx {
  std::string sub;
  fs::path out;
  bool verbose = false;
  std::string raw;  // config bytes as read, hashed into the manifest
  json cfg;
  std::vector<std::string> outputs;
};

void note(const Ctx& c, const std::string& msg) {
  if (c.verbose) std::fprintf(stderr, "[shl] %s\n", msg.c_str());
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

void load_config(Ctx& c, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  c.raw.assign(std::istreambuf_iterator<char>(in),
               std::istreambuf_iterator<char>());
  try {
    c.cfg = json::parse(c.raw);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!c.cfg.is_object()) throw ConfigError("config must be a JSON object");
}

void check_keys(const Ctx& c, const std::vector<std::string>& required,
                const std::vector<std::string>& optional) {
  std::set<std::string> allowed(required.begin(), required.end());
  allowed.insert(optional.begin(), optional.end());
  for (const auto& key : required)
    if (!c.cfg.contains(key))
      throw ConfigError("config missing required key '" + key + "'");
  for (const auto& [key, value] : c.cfg.items())
    if (!allowed.count(key))
      throw ConfigError("unknown config key '" + key + "'");
}

double num(const Ctx& c, const std::string& key, double fallback) {
  if (!c.cfg.contains(key)) return fallback;
  if (!c.cfg[key].is_number())
    throw ConfigError("config key '" + key + "' must be a number");
  return c.cfg[key].get<double>();
}

long integer(const Ctx& c, const std::string& key, long fallback) {
  if (!c.cfg.contains(key)) return fallback;
  if (!c.cfg[key].is_number_integer())
    throw ConfigError("config key '" + key + "' must be an integer");
  return c.cfg[key].get<long>();
}

bool flag(const Ctx& c, const std::string& key, bool fallback) {
  if (!c.cfg.contains(key)) return fallback;
  if (!c.cfg[key].is_boolean())
    throw ConfigError("config key '" + key + "' must be a boolean");
  return c.cfg[key].get<bool>();
}

std::vector<double> num_list(const Ctx& c, const std::string& key,
                             std::vector<double> fallback) {
  if (!c.cfg.contains(key)) return fallback;
  if (!c.cfg[key].is_array())
    throw ConfigError("config key '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : c.cfg[key]) {
    if (!v.is_number())
      throw ConfigError("config key '" + key + "' must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void atomic_write(Ctx& c, const std::string& name, const std::string& bytes) {
  fs::create_directories(c.out);
  fs::path target = c.out / name;
  fs::path tmp = c.out / (name + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  fs::rename(tmp, target);
  c.outputs.push_back(name);
  note(c, "wrote " + target.string());
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_manifest(Ctx& c) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a(c.raw));
  json m;
  m["subcommand"] = c.sub;
  m["config_hash"] = hash;
  m["library_version"] = "0.1.0";
  m["outputs"] = c.outputs;
  atomic_write(c, "manifest.json", m.dump(2) + "\n");
}

// minimal native SVG: framed plot area with one polyline per series
std::string svg_plot(
    const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>&
        series) {
  const double W = 640, H = 480, m = 50;
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& [color, pts] : series)
    for (auto [x, y] : pts) {
      xlo = std::min(xlo, x); xhi = std::max(xhi, x);
      ylo = std::min(ylo, y); yhi = std::max(yhi, y);
    }
  if (!(xhi > xlo)) xhi = xlo + 1.0;
  if (!(yhi > ylo)) yhi = ylo + 1.0;
  auto X = [&](double x) { return m + (W - 2 * m) * (x - xlo) / (xhi - xlo); };
  auto Y = [&](double y) { return H - m - (H - 2 * m) * (y - ylo) / (yhi - ylo); };
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
                  "height=\"480\" viewBox=\"0 0 640 480\">\n";
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" "
                "fill=\"none\" stroke=\"black\"/>\n",
                m, m, W - 2 * m, H - 2 * m);
  s += buf;
  auto label = [&](double x, double y, double v) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-size=\"12\">%.3g</text>\n", x,
                  y, v);
    s += buf;
  };
  label(m, H - m + 16, xlo);
  label(W - m - 30, H - m + 16, xhi);
  label(4, H - m, ylo);
  label(4, m + 6, yhi);
  for (const auto& [color, pts] : series) {
    s += "<polyline fill=\"none\" stroke=\"" + color + "\" points=\"";
    for (auto [x, y] : pts) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", X(x), Y(y));
      s += buf;
    }
    s += "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

const char* kColors[] = {"steelblue", "firebrick", "seagreen", "darkorange",
                         "purple", "teal"};

SymmetryDim dim_from(const Ctx& c) {
  long N = integer(c, "N", 0), k = integer(c, "k", 0);
  try {
    return SymmetryDim(static_cast<int>(N), static_cast<int>(k));
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
}

WeightSpec weight_from(const Ctx& c) {
  try {
    double alpha = num(c, "alpha", 1.0);
    return WeightSpec(PowerLayer{alpha, num(c, "beta", alpha),
                                 num(c, "a", 1.0), num(c, "cap", 1.0)});
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
}

// ---- verify-specfun: sphere-transform decay envelopes ----------------------
int run_verify_specfun(Ctx& c) {
  check_keys(c, {}, {"m_min", "m_max", "r_near", "r_far", "envelope_factor"});
  int m_min = static_cast<int>(integer(c, "m_min", 2));
  int m_max = static_cast<int>(integer(c, "m_max", 8));
  double r_near = num(c, "r_near", 100.0), r_far = num(c, "r_far", 1e4);
  double factor = num(c, "envelope_factor", 2.0);
  if (m_min < 2 || m_max > kMaxDim || m_min > m_max)
    throw ConfigError("need 2 <= m_min <= m_max <= library limit");

  std::string csv = "m,sup_near,sup_far,ratio,pass\n";
  bool ok = true;
  for (int m = m_min; m <= m_max; ++m) {
    double near = 0.0;
    for (double r = 0.0; r <= r_near; r += 0.02)
      near = std::max(near, std::pow(1.0 + r, 0.5 * (m - 1)) *
                                std::abs(sphere_ft(m, r)));
    double far = near;
    for (double r = r_near; r <= r_far; r += 0.05)
      far = std::max(far, std::pow(1.0 + r, 0.5 * (m - 1)) *
                              std::abs(sphere_ft(m, r)));
    bool pass = far <= factor * near;
    ok = ok && pass;
    csv += std::to_string(m) + "," + fmt(near) + "," + fmt(far) + "," +
           fmt(far / near) + "," + (pass ? "1" : "0") + "\n";
    note(c, "m=" + std::to_string(m) + " ratio=" + fmt(far / near));
  }
  atomic_write(c, "results.csv", csv);
  write_manifest(c);
  if (!ok) std::fprintf(stderr, "shl: decay envelope exceeded\n");
  return ok ? 0 : 2;
}

// ---- verify-extension: reduced slice formula vs surface quadrature ---------
int run_verify_extension(Ctx& c) {
  check_keys(c, {"N", "k"}, {"seed", "points", "span", "tol", "direct_tol"});
  SymmetryDim d = dim_from(c);
  if (d.N > 4) throw ConfigError("direct surface quadrature needs N <= 4");
  unsigned seed = static_cast<unsigned>(integer(c, "seed", 1));
  int points = static_cast<int>(integer(c, "points", 20));
  double span = num(c, "span", d.N == 3 ? 10.0 : 6.0);
  double tol = num(c, "tol", 1e-6);
  double direct_tol = num(c, "direct_tol", 1e-7);

  // random trig polynomial in r^2 sampled on graded nodes; the generator
  // feeds the surface oracle, the sampled profile feeds the reduced path
  std::mt19937 prng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double a[4], b[4];
  for (int j = 0; j < 4; ++j) { a[j] = u(prng); b[j] = u(prng); }
  auto gen = [&](double r) {
    double z = r * r, re = 0.0;
    for (int j = 0; j < 4; ++j)
      re += a[j] * std::cos(j * PI * z) + b[j] * std::sin(j * PI * z);
    return std::complex<double>(re, 0.0);
  };
  SphereProfile h;
  for (int i = 0; i < 513; ++i) {
    double v = static_cast<double>(i) / 512;
    double r = i == 512 ? 1.0 : v * v * (3.0 - 2.0 * v);
    h.nodes.push_back(r);
    h.values.push_back(gen(r));
  }
  auto F = [&](const std::vector<double>& w) {
    double r2 = 0.0;
    for (int i = 0; i < d.N - d.k; ++i) r2 += w[i] * w[i];
    return gen(std::min(1.0, std::sqrt(r2)));
  };

  std::uniform_real_distribution<double> up(0.0, span);
  std::string csv = "t,s,reduced_re,reduced_im,direct_re,direct_im,abs_diff\n";
  double worst = 0.0, bmax = 0.0;
  std::vector<double> diffs;
  for (int trial = 0; trial < points; ++trial) {
    double t = up(prng), s = up(prng);
    std::vector<double> x(d.N, 0.0);
    x[0] = t;
    x[d.N - d.k] = s;
    auto va = extend_reduced(d, h, {t, s});
    auto vb = extend_direct(d, F, x, direct_tol);
    bmax = std::max(bmax, std::abs(vb));
    diffs.push_back(std::abs(va - vb));
    csv += fmt(t) + "," + fmt(s) + "," + fmt(va.real()) + "," + fmt(va.imag()) +
           "," + fmt(vb.real()) + "," + fmt(vb.imag()) + "," +
           fmt(std::abs(va - vb)) + "\n";
  }
  for (double dd : diffs) worst = std::max(worst, dd / std::max(bmax, 1e-300));
  atomic_write(c, "results.csv", csv);
  write_manifest(c);
  note(c, "worst relative deviation " + fmt(worst));
  if (worst > tol) {
    std::fprintf(stderr, "shl: reduced/direct deviation %g exceeds %g\n",
                 worst, tol);
    return 2;
  }
  return 0;
}

// ---- scan-admissibility ----------------------------------------------------
int run_scan_admissibility(Ctx& c) {
  check_keys(c, {"N", "k", "q_list", "deltas"},
             {"alpha", "beta", "a", "cap", "trunc", "plot"});
  SymmetryDim d = dim_from(c);
  WeightSpec W = weight_from(c);
  auto qs = num_list(c, "q_list", {});
  auto deltas = num_list(c, "deltas", {});
  if (qs.empty() || deltas.empty())
    throw ConfigError("q_list and deltas must be non-empty");
  for (double dd : deltas)
    if (!(dd > 0.0 && dd <= 1.0))
      throw ConfigError("deltas must lie in (0, 1]");
  double trunc = num(c, "trunc", 30.0);

  note(c, "scanning " + std::to_string(qs.size() * deltas.size()) + " rows");
  auto rows = admissibility_scan(d, W, qs, deltas, trunc);
  std::string csv = "q,delta,norm_q,norm_2,ratio,tail_ok\n";
  for (const auto& r : rows)
    csv += fmt(r.q) + "," + fmt(r.param) + "," + fmt(r.norm_q) + "," +
           fmt(r.norm_2) + "," + fmt(r.ratio) + "," +
           (r.tail_ok ? "1" : "0") + "\n";
  atomic_write(c, "results.csv", csv);

  if (flag(c, "plot", false)) {
    std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>
        series;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& r : rows)
        if (r.q == qs[i]) pts.push_back({std::log2(r.param), r.ratio});
      series.push_back({kColors[i % 6], pts});
    }
    atomic_write(c, "plot.svg", svg_plot(series));
  }
  write_manifest(c);
  return 0;
}

// ---- thresholds ------------------------------------------------------------
int run_thresholds(Ctx& c) {
  check_keys(c, {"N", "k"}, {"alpha_min", "alpha_max", "alpha_steps"});
  SymmetryDim d = dim_from(c);
  double lo = num(c, "alpha_min", 0.1), hi = num(c, "alpha_max", 3.0);
  long steps = integer(c, "alpha_steps", 60);
  if (!(lo > 0.0) || !(hi > lo) || steps < 2)
    throw ConfigError("need 0 < alpha_min < alpha_max and alpha_steps >= 2");

  std::string csv = "N,k,alpha,lambda,lambda_valid,mu,mu_valid\n";
  for (long i = 0; i < steps; ++i) {
    double alpha = lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
    auto lam = lambda_threshold(d.N, d.k, alpha);
    auto mu = mu_threshold(d.N, d.k, alpha);
    csv += std::to_string(d.N) + "," + std::to_string(d.k) + "," + fmt(alpha) +
           "," + fmt(lam.value) + "," + (lam.valid ? "1" : "0") + "," +
           fmt(mu.value) + "," + (mu.valid ? "1" : "0") + "\n";
  }
  atomic_write(c, "results.csv", csv);
  write_manifest(c);
  return 0;
}

// ---- verify-resolvent ------------------------------------------------------
int run_verify_resolvent(Ctx& c) {
  check_keys(c, {"N", "k"}, {"T", "Xi", "kernel_check"});
  SymmetryDim d = dim_from(c);
  double T = num(c, "T", 12.0), Xi = num(c, "Xi", 12.0);
  auto g = make_grid(d, T, Xi);
  note(c, "grid " + std::to_string(g->t.size()) + " x " +
              std::to_string(g->r1.size()) + " nodes");

  std::string csv = "check,value,bound,pass\n";
  bool ok = true;
  auto row = [&](const std::string& name, double value, double bound) {
    bool pass = value <= bound;
    ok = ok && pass;
    csv += name + "," + fmt(value) + "," + fmt(bound) + "," +
           (pass ? "1" : "0") + "\n";
    note(c, name + " = " + fmt(value));
  };

  auto gauss = make_field(g, Side::space, [](double t, double s) {
    return std::complex<double>(std::exp(-0.5 * (t * t + s * s)), 0.0);
  });
  auto ghat = transform(gauss);
  double worst = 0.0;
  for (std::size_t i = 0; i < g->r1.size(); ++i)
    for (std::size_t j = 0; j < g->r2.size(); ++j)
      worst = std::max(
          worst, std::abs(ghat.values(static_cast<Eigen::Index>(i),
                                      static_cast<Eigen::Index>(j)) -
                          std::exp(-0.5 * (g->r1.x[i] * g->r1.x[i] +
                                           g->r2.x[j] * g->r2.x[j]))));
  row("gaussian_fixed_point", worst, 1e-8);

  auto mix = make_field(g, Side::space, [](double t, double s) {
    double t2 = t * t, s2 = s * s;
    return std::complex<double>(
        (1.0 + 0.5 * t2 - 0.3 * s2) * std::exp(-0.5 * (t2 + s2)),
        (0.2 * t2 * s2 - 0.4) * std::exp(-0.7 * (t2 + s2)));
  });
  auto mhat = transform(mix);
  double n0 = field_lp_norm(mix, 2.0);
  row("parseval", std::abs(field_lp_norm(mhat, 2.0) / n0 - 1.0), 1e-7);
  auto back = transform(mhat);
  back.values -= mix.values;
  row("double_transform", field_lp_norm(back, 2.0) / n0, 1e-7);

  if (flag(c, "kernel_check", false)) {
    if (d.N != 3 || d.k != 1)
      throw ConfigError("kernel_check needs N = 3, k = 1");
    auto gk = make_grid(d, 6.0, 200.0);
    const double sig = 0.02;
    auto src = make_field(gk, Side::space, [&](double t, double s) {
      return std::complex<double>(std::pow(2.0 * PI * sig * sig, -1.5) *
                                      std::exp(-0.5 * (t * t + s * s) /
                                               (sig * sig)),
                                  0.0);
    });
    auto u = apply_resolvent(src, {});
    for (double r : {1.0, 2.0, 5.0}) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < gk->t.size(); ++i)
        if (std::abs(gk->t.x[i] - r) < std::abs(gk->t.x[best] - r)) best = i;
      double rr = std::hypot(gk->t.x[best], gk->s.x[0]);
      auto ref = helmholtz_kernel(3, rr);
      row("kernel_r" + std::to_string(static_cast<int>(r)),
          std::abs(u.values(static_cast<Eigen::Index>(best), 0) - ref) /
              std::abs(ref),
          0.01);
    }
  }

  atomic_write(c, "results.csv", csv);
  write_manifest(c);
  if (!ok) std::fprintf(stderr, "shl: a resolvent check failed its bound\n");
  return ok ? 0 : 2;
}

// ---- solve-nls -------------------------------------------------------------
int run_solve_nls(Ctx& c) {
  check_keys(c, {"N", "k", "alpha", "p"},
             {"beta", "a", "cap", "q", "T", "Xi", "residual_tol", "max_iter",
              "seed", "damping", "plot"});
  SymmetryDim d = dim_from(c);
  WeightSpec W = weight_from(c);
  double p = num(c, "p", 0.0);
  auto g = make_grid(d, num(c, "T", 8.0), num(c, "Xi", 8.0));

  SolverConfig cfg;
  cfg.residual_tol = num(c, "residual_tol", 1e-4);
  cfg.max_iter = integer(c, "max_iter", 400);
  cfg.seed = static_cast<unsigned>(integer(c, "seed", 1));
  cfg.damping = num(c, "damping", 0.5);
  cfg.q = num(c, "q", 0.0);

  DualState st;
  try {
    st = solve_bound_state(d, W, p, g, cfg);
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  note(c, "converged in " + std::to_string(st.iterations) + " iterations");

  std::string csv = "step,residual\n";
  for (std::size_t i = 0; i < st.residual_history.size(); ++i)
    csv += std::to_string(i + 1) + "," + fmt(st.residual_history[i]) + "\n";
  atomic_write(c, "results.csv", csv);

  // solution bundle: the dual field plus summary numbers
  fs::create_directories(c.out);
  save_field(st.v, (c.out / "solution.bin.tmp").string());
  fs::rename(c.out / "solution.bin.tmp", c.out / "solution.bin");
  c.outputs.push_back("solution.bin");

  auto rec = reconstruct_u(st, cfg.mult);
  json summary;
  summary["p"] = p;
  summary["energy"] = st.energy;
  summary["iterations"] = st.iterations;
  summary["el_residual"] = st.el_residual;
  summary["reconstruction_residual"] = rec.residual;
  atomic_write(c, "summary.json", summary.dump(2) + "\n");

  if (flag(c, "plot", false)) {
    // radial slice |v(t, s0)| along the first axis at the lowest s node
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < g->t.size(); ++i)
      pts.push_back({g->t.x[i],
                     std::abs(st.v.values(static_cast<Eigen::Index>(i), 0))});
    atomic_write(c, "plot.svg", svg_plot({{"steelblue", pts}}));
  }
  write_manifest(c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetric Helmholtz library experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  bool verbose = false;
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--verbose", verbose, "progress on stderr");

  const std::vector<std::pair<std::string, int (*)(Ctx&)>> subs = {
      {"verify-specfun", run_verify_specfun},
      {"verify-extension", run_verify_extension},
      {"scan-admissibility", run_scan_admissibility},
      {"thresholds", run_thresholds},
      {"verify-resolvent", run_verify_resolvent},
      {"solve-nls", run_solve_nls},
  };
  for (const auto& [name, fn] : subs) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage mistakes are config errors
  }

  Ctx ctx;
  ctx.out = out_dir;
  ctx.verbose = verbose;
  try {
    load_config(ctx, config_path);
    for (const auto& [name, fn] : subs)
      if (app.got_subcommand(name)) {
        ctx.sub = name;
        return fn(ctx);
      }
    std::fprintf(stderr, "shl: no subcommand selected\n");
    return 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "shl: config error: %s\n", e.what());
    return 1;
  } catch (const AccuracyError& e) {
    std::fprintf(stderr, "shl: accuracy error: %s (achieved %g)\n", e.what(),
                 e.achieved);
    return 2;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "shl: solver did not converge: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "shl: error: %s\n", e.what());
    return 2;
  }
}
