#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracmass/fields.hpp"
#include "fracmass/geometry.hpp"
#include "fracmass/io.hpp"
#include "fracmass/perimeter.hpp"
#include "fracmass/riesz.hpp"
#include "fracmass/rng.hpp"
#include "fracmass/smirnov.hpp"
#include "fracmass/spectral.hpp"
#include "fracmass/variation.hpp"

using namespace fracmass;

namespace {

std::string fmt(double x) { return format_double(x); }

// Neville evaluation at t = 0 of the polynomial through (t_i, y_i).
double extrapolate_to_zero(std::vector<double> t, std::vector<double> y) {
  const std::size_t n = t.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i)
      y[i] = (t[i + m] * y[i] - t[i] * y[i + 1]) / (t[i + m] - t[i]);
  return y[0];
}

void echo_config(const std::vector<std::pair<std::string, std::string>>& kv,
                 bool json, std::ostream& os) {
  if (json) return;  // folded into the JSON object by the caller
  os << "# config";
  for (const auto& [k, v] : kv) os << ' ' << k << '=' << v;
  os << '\n';
}

std::string json_config(
    const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < kv.size(); ++i) {
    if (i) os << ',';
    os << '"' << kv[i].first << "\":\"" << kv[i].second << '"';
  }
  os << '}';
  return os.str();
}

SegmentCurrent load_any_current(const std::string& path) {
  // Accept either a curves file or a segments file.
  std::ifstream probe(path);
  if (!probe) throw std::invalid_argument("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(probe)),
                   std::istreambuf_iterator<char>());
  if (text.find("\"segments\"") != std::string::npos) return load_current(path);
  return curves_to_current(load_curves(path));
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stod(tok));
  return out;
}

int run_mass(const std::string& input, double s, double m1_eps, bool smooth,
             bool force_quad, int quad_order, const std::string& out,
             bool json) {
  SegmentCurrent mu = load_any_current(input);
  FracParams p;
  p.s = s;
  p.eps = m1_eps;
  p.smooth_m1 = smooth;
  p.force_quadrature_self = force_quad;
  p.quad.gauss_order = quad_order;
  double value;
  if (m1_eps > 0.0)
    value = regularized_mass_m1(mu, m1_eps, p.quad, smooth);
  else
    value = fractional_mass(mu, p);
  std::vector<std::pair<std::string, std::string>> cfg{
      {"command", "mass"},      {"input", input},
      {"s", fmt(s)},            {"m1_eps", fmt(m1_eps)},
      {"force_quadrature", force_quad ? "1" : "0"},
      {"quad_order", std::to_string(quad_order)}};
  echo_config(cfg, json, std::cout);
  std::ostringstream res;
  res << "{\"config\":" << json_config(cfg) << ",\"value\":" << fmt(value)
      << "}";
  if (json)
    std::cout << res.str() << '\n';
  else
    std::cout << (m1_eps > 0 ? "M1_eps" : "M_s") << " = " << fmt(value) << '\n';
  if (!out.empty()) {
    std::ofstream f(out);
    f << res.str() << '\n';
  }
  return 0;
}

int run_asymptotic(const std::string& input, const std::string& slist,
                   const std::string& out, bool json) {
  const std::vector<double> ss = parse_list(slist);
  if (ss.empty()) throw std::invalid_argument("asymptotic: empty s list");
  SegmentCurrent mu = load_any_current(input);
  std::vector<std::pair<std::string, std::string>> cfg{
      {"command", "asymptotic"}, {"input", input}, {"s_list", slist}};
  echo_config(cfg, json, std::cout);
  std::vector<double> t, y;
  std::ostringstream csv;
  csv << "s,(1-s)*Ms\n";
  for (double s : ss) {
    if (!(s > 0.0 && s < 1.0))
      throw std::domain_error("asymptotic: s must lie in (0,1)");
    FracParams p;
    p.s = s;
    const double v = (1.0 - s) * fractional_mass(mu, p);
    t.push_back(1.0 - s);
    y.push_back(v);
    csv << fmt(s) << ',' << fmt(v) << '\n';
  }
  const double lim = extrapolate_to_zero(t, y);
  csv << "extrapolated," << fmt(lim) << '\n';
  std::cout << csv.str();
  if (json)
    std::cout << "{\"config\":" << json_config(cfg)
              << ",\"extrapolated\":" << fmt(lim) << "}\n";
  if (!out.empty()) {
    std::ofstream f(out);
    f << csv.str();
  }
  return 0;
}

int run_variation_check(const std::string& input, double s,
                        std::uint64_t seed, int count, bool json) {
  auto curves = load_curves(input);
  if (curves.size() != 1)
    throw std::invalid_argument("variation-check: exactly one curve expected");
  PolyCurve c = curves[0];
  if (c.closed)
    throw std::invalid_argument("variation-check: open curve required");
  std::vector<std::pair<std::string, std::string>> cfg{
      {"command", "variation-check"},
      {"input", input},
      {"s", fmt(s)},
      {"seed", std::to_string(seed)},
      {"count", std::to_string(count)}};
  echo_config(cfg, json, std::cout);

  const int n = static_cast<int>(c.vertices.size());
  const int d = c.dim();
  const double ell = c.length();
  std::vector<double> u(n, 0.0);
  for (int i = 1; i < n; ++i)
    u[i] = u[i - 1] + dist(c.vertices[i - 1], c.vertices[i]);

  Rng rng(seed);
  double maxerr = 0.0;
  for (int trial = 0; trial < count; ++trial) {
    Perturbation h;
    h.curve = c;
    h.values.assign(n, Vec(d));
    double hmax = 0.0;
    std::vector<double> coef(static_cast<std::size_t>(3 * d));
    for (auto& a : coef) a = rng.uniform(-1.0, 1.0);
    for (int i = 1; i + 1 < n; ++i)
      for (int cc = 0; cc < d; ++cc) {
        double v = 0.0;
        for (int k = 1; k <= 3; ++k)
          v += coef[(k - 1) * d + cc] * std::sin(k * M_PI * u[i] / ell);
        h.values[i][cc] = v;
        hmax = std::max(hmax, std::abs(v));
      }
    const double fv = first_variation(c, h, s);
    const double step = 5e-6 * ell / (hmax + 1e-300);
    auto shifted = [&](double t) {
      PolyCurve cc2 = c;
      for (int i = 0; i < n; ++i) cc2.vertices[i] += t * h.values[i];
      FracParams p;
      p.s = s;
      return fractional_mass(curve_to_current(cc2), p) /
             (cc2.weight * cc2.weight);
    };
    const double fd = (shifted(step) - shifted(-step)) / (2.0 * step) *
                      (c.weight * c.weight);
    const double err = std::abs(fv - fd) / (std::abs(fd) + 1e-12);
    maxerr = std::max(maxerr, err);
    std::cout << "perturbation " << trial << ": analytic=" << fmt(fv)
              << " fd=" << fmt(fd) << " rel_err=" << fmt(err) << '\n';
  }
  std::cout << "max_rel_err = " << fmt(maxerr) << '\n';
  if (json)
    std::cout << "{\"config\":" << json_config(cfg)
              << ",\"max_rel_err\":" << fmt(maxerr) << "}\n";
  return 0;
}

int run_perimeter(const std::string& input, double s, long n,
                  std::uint64_t seed, const std::string& out, bool json) {
  PlanarRegion E = load_region(input);
  std::vector<std::pair<std::string, std::string>> cfg{
      {"command", "perimeter"}, {"input", input},          {"s", fmt(s)},
      {"n", std::to_string(n)}, {"seed", std::to_string(seed)}};
  echo_config(cfg, json, std::cout);
  auto [mc, se] = fractional_perimeter_mc(E, s, n, seed);
  FracParams p;
  p.s = s;
  const double via_mass = boundary_mass_perimeter(E, s, p);
  std::ostringstream res;
  res << "{\"config\":" << json_config(cfg) << ",\"perimeter_mc\":" << fmt(mc)
      << ",\"stderr\":" << fmt(se) << ",\"perimeter_via_mass\":"
      << fmt(via_mass) << "}";
  if (json)
    std::cout << res.str() << '\n';
  else
    std::cout << "P_s(mc) = " << fmt(mc) << " +- " << fmt(se)
              << "\nP_s(boundary mass) = " << fmt(via_mass) << '\n';
  if (!out.empty()) {
    std::ofstream f(out);
    f << res.str() << '\n';
  }
  return 0;
}

int run_spectral(const std::string& input, double s, const SpectralConfig& sc,
                 bool direct, const std::string& profile,
                 const std::string& out, bool json) {
  SegmentCurrent mu = load_any_current(input);
  std::vector<std::pair<std::string, std::string>> cfg{
      {"command", "spectral"},
      {"input", input},
      {"s", fmt(s)},
      {"radial_nodes", std::to_string(sc.radial_nodes)},
      {"angular_nodes", std::to_string(sc.angular_nodes)},
      {"xi_min", fmt(sc.xi_min)},
      {"xi_max", fmt(sc.xi_max)}};
  echo_config(cfg, json, std::cout);
  const double spec = spectral_mass(mu, s, sc);
  double dir = 0.0;
  if (direct) {
    FracParams p;
    p.s = s;
    dir = fractional_mass(mu, p);
  }
  if (!profile.empty()) {
    std::ofstream f(profile);
    f << "|xi|,|F|^2_avg\n";
    const int rad = 200, ang = 64;
    for (int k = 0; k < rad; ++k) {
      const double r = sc.xi_min * std::pow(sc.xi_max / sc.xi_min,
                                            (k + 0.5) / rad);
      double acc = 0.0;
      for (int j = 0; j < ang; ++j) {
        const double th = 2.0 * M_PI * j / ang;
        Point xi = mu.dim == 2
                       ? Point{r * std::cos(th), r * std::sin(th)}
                       : Point{r * std::cos(th), r * std::sin(th), 0.0};
        double a2 = 0.0;
        for (const auto& z : fourier_of_current(mu, xi)) a2 += std::norm(z);
        acc += a2;
      }
      f << fmt(r) << ',' << fmt(acc / ang) << '\n';
    }
  }
  std::ostringstream res;
  res << "{\"config\":" << json_config(cfg) << ",\"spectral_mass\":"
      << fmt(spec);
  if (direct) res << ",\"fractional_mass\":" << fmt(dir);
  res << "}";
  if (json)
    std::cout << res.str() << '\n';
  else {
    std::cout << "spectral M_s = " << fmt(spec) << '\n';
    if (direct) std::cout << "direct M_s = " << fmt(dir) << '\n';
  }
  if (!out.empty()) {
    std::ofstream f(out);
    f << res.str() << '\n';
  }
  return 0;
}

int run_flow(const std::string& input, double s, double dt, int steps,
             const std::string& prefix, bool json) {
  auto curves = load_curves(input);
  if (curves.size() != 1)
    throw std::invalid_argument("flow: exactly one curve expected");
  PolyCurve c = curves[0];
  std::vector<std::pair<std::string, std::string>> cfg{
      {"command", "flow"}, {"input", input},  {"s", fmt(s)},
      {"dt", fmt(dt)},     {"steps", std::to_string(steps)}};
  echo_config(cfg, json, std::cout);
  std::ostringstream csv;
  csv << "step,Ms\n";
  FracParams p;
  p.s = s;
  for (int k = 0; k <= steps; ++k) {
    const double ms = fractional_mass(curve_to_current(c), p);
    csv << k << ',' << fmt(ms) << '\n';
    if (!prefix.empty()) {
      char name[64];
      std::snprintf(name, sizeof name, "_step%03d.json", k);
      save_curves({c}, c.dim(), prefix + name);
    }
    if (k < steps) c = gradient_flow_step(c, s, dt);
  }
  std::cout << csv.str();
  if (!prefix.empty()) {
    std::ofstream f(prefix + "_energy.csv");
    f << csv.str();
  }
  return 0;
}

int run_approximate(const std::string& config_path, bool json) {
  auto cfg = load_config(config_path);
  auto get = [&](const std::string& key, const std::string& dflt) {
    auto it = cfg.find(key);
    return it == cfg.end() ? dflt : it->second;
  };
  const std::string field = get("field", "curl_bump_2d");
  const std::vector<double> center_v = parse_list(get("center", "0,0"));
  const double radius = std::stod(get("radius", "1"));
  const double amplitude = std::stod(get("amplitude", "1"));
  const int dim = field == "curl_bump_3d" ? 3 : 2;
  Vec center(dim);
  if (static_cast<int>(center_v.size()) != dim)
    throw std::invalid_argument("approximate: center dimension mismatch");
  for (int i = 0; i < dim; ++i) center[i] = center_v[i];
  FieldSpec psi = make_field_preset(field, center, radius, amplitude);

  const std::vector<double> eps_l = parse_list(get("eps", "0.1"));
  const std::vector<double> delta_l = parse_list(get("delta", "1e-4"));
  const std::vector<double> rho_l = parse_list(get("rho", "1e-3"));
  if (eps_l.size() != delta_l.size())
    throw std::invalid_argument("approximate: eps/delta schedule length mismatch");
  const bool timing = get("timing", "on") != "off";
  const std::string out_current = get("out_current", "");
  const std::string out_loops = get("out_loops", "");
  const std::string out_diag = get("out_diag", "");

  std::ostringstream csv;
  csv << "eps,delta,rho,mass_mu,mass_psi,pairing_err_max,Ms_mu,Ms_psi,"
         "runtime_s\n";
  for (std::size_t k = 0; k < eps_l.size(); ++k) {
    ApproxParams ap;
    ap.eps = eps_l[k];
    ap.delta = delta_l[k];
    ap.rho = rho_l[std::min(k, rho_l.size() - 1)];
    ap.dim = dim;
    ap.seed = std::stoull(get("seed", "0"));
    ap.s = std::stod(get("s", "0.5"));
    ap.mc_samples = std::stol(get("mc_samples", "2000000"));
    const auto t0 = std::chrono::steady_clock::now();
    ApproxResult r = approximate(psi, ap);
    const double rt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const Diagnostics& dgn = r.diag;
    csv << fmt(ap.eps) << ',' << fmt(ap.delta) << ',' << fmt(ap.rho) << ','
        << fmt(dgn.mass_mu) << ',' << fmt(dgn.mass_psi) << ','
        << fmt(dgn.pairing_err_max) << ',' << fmt(dgn.ms_mu) << ','
        << fmt(dgn.ms_psi) << ',' << (timing ? fmt(rt) : std::string("0"))
        << '\n';
    std::cout << "schedule " << k << ": segments="
              << r.current.segments.size() << " loops=" << dgn.loops
              << " mass_mu=" << fmt(dgn.mass_mu) << " mass_psi="
              << fmt(dgn.mass_psi) << " pairing_err=" << fmt(dgn.pairing_err_max)
              << '\n';
    const std::string suffix =
        eps_l.size() > 1 ? "_" + std::to_string(k) : std::string();
    if (!out_current.empty())
      save_current(r.current, out_current + suffix + ".json");
    if (!out_loops.empty())
      save_curves(r.loops, dim, out_loops + suffix + ".json");
  }
  std::cout << csv.str();
  if (!out_diag.empty()) {
    std::ofstream f(out_diag);
    f << csv.str();
  }
  (void)json;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"s-fractional mass of polygonal 1-currents: energies, "
               "variation, spectra, perimeters, field approximation"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "machine-readable output");
  int threads = 1;
  app.add_option("--threads", threads, "worker cap (evaluation is serial)");

  std::string input, out, profile, prefix, slist = "0.9,0.99,0.999";
  double s = 0.5, m1_eps = 0.0, dt = 1e-3;
  bool smooth = false, force_quad = false, direct = false;
  int quad_order = 8, count = 10, steps = 1;
  long n = 1000000;
  std::uint64_t seed = 0;
  SpectralConfig sc;

  auto* mass = app.add_subcommand("mass", "s-fractional mass of a current");
  mass->add_option("input", input)->required();
  mass->add_option("--s", s);
  mass->add_option("--m1-eps", m1_eps);
  mass->add_flag("--smooth-m1", smooth);
  mass->add_flag("--force-quadrature", force_quad);
  mass->add_option("--quad-order", quad_order);
  mass->add_option("--out", out);

  auto* asym = app.add_subcommand("asymptotic", "(1-s) M_s table and limit");
  asym->add_option("input", input)->required();
  asym->add_option("--s-list", slist);
  asym->add_option("--out", out);

  auto* vc = app.add_subcommand("variation-check",
                                "first variation vs finite differences");
  vc->add_option("input", input)->required();
  vc->add_option("--s", s);
  vc->add_option("--seed", seed);
  vc->add_option("--count", count);

  auto* ap = app.add_subcommand("approximate",
                                "divergence-free field -> weighted loops");
  std::string config_path;
  ap->add_option("config", config_path)->required();

  auto* pe = app.add_subcommand("perimeter", "fractional perimeter of a region");
  pe->add_option("input", input)->required();
  pe->add_option("--s", s);
  pe->add_option("--n", n);
  pe->add_option("--seed", seed);
  pe->add_option("--out", out);

  auto* sp = app.add_subcommand("spectral", "Fourier-side mass");
  sp->add_option("input", input)->required();
  sp->add_option("--s", s);
  sp->add_option("--radial-nodes", sc.radial_nodes);
  sp->add_option("--angular-nodes", sc.angular_nodes);
  sp->add_option("--xi-min", sc.xi_min);
  sp->add_option("--xi-max", sc.xi_max);
  sp->add_flag("--direct", direct);
  sp->add_option("--profile", profile);
  sp->add_option("--out", out);

  auto* fl = app.add_subcommand("flow", "gradient-descent demo steps");
  fl->add_option("input", input)->required();
  fl->add_option("--s", s);
  fl->add_option("--dt", dt);
  fl->add_option("--steps", steps);
  fl->add_option("--out-prefix", prefix);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*mass)
      return run_mass(input, s, m1_eps, smooth, force_quad, quad_order, out,
                      json);
    if (*asym) return run_asymptotic(input, slist, out, json);
    if (*vc) return run_variation_check(input, s, seed, count, json);
    if (*ap) return run_approximate(config_path, json);
    if (*pe) return run_perimeter(input, s, n, seed, out, json);
    if (*sp) return run_spectral(input, s, sc, direct, profile, out, json);
    if (*fl) return run_flow(input, s, dt, steps, prefix, json);
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
