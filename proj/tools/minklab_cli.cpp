// minklab: numerical workbench for the L_p-Minkowski problem on S^2.
//
// Subcommands dispatch to the header library and emit a JSON run report plus
// plot-ready .dat/.csv files.  Exit code 0 iff every check attached to the
// experiment passes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "minklab/box_body.hpp"
#include "minklab/field_io.hpp"
#include "minklab/fields_init.hpp"
#include "minklab/lemma_check.hpp"
#include "minklab/mixed_volume.hpp"
#include "minklab/pinching.hpp"
#include "minklab/solver.hpp"

using json = nlohmann::ordered_json;
using namespace minklab;

namespace {

constexpr const char* kVersion = "minklab 1.0.0";

struct Report {
  json doc;
  bool all_pass = true;

  Report(const std::string& name, const std::string& subcommand) {
    doc["name"] = name;
    doc["subcommand"] = subcommand;
    doc["version"] = kVersion;
    doc["params"] = json::object();
    doc["metrics"] = json::object();
    doc["checks"] = json::array();
  }
  void param(const std::string& k, const json& v) { doc["params"][k] = v; }
  void metric(const std::string& k, const json& v) { doc["metrics"][k] = v; }
  void check(const std::string& name, bool pass) {
    doc["checks"].push_back({{"name", name}, {"pass", pass}});
    all_pass = all_pass && pass;
  }
};

// atomic write: tmp file + rename
void write_text(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << body;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " -> " + path);
}

int finish(Report& rep, const std::string& out_dir, const std::string& name, double wall) {
  rep.doc["wall_time"] = wall;
  rep.doc["pass"] = rep.all_pass;
  const std::string path = out_dir + "/" + name + "_report.json";
  write_text(path, rep.doc.dump(2) + "\n");
  std::printf("%s: %s (%s)\n", name.c_str(), rep.all_pass ? "pass" : "FAIL", path.c_str());
  return rep.all_pass ? 0 : 1;
}

std::pair<int, int> parse_grid(const std::string& s) {
  int n = 0, m = 0;
  if (std::sscanf(s.c_str(), "%dx%d", &n, &m) != 2)
    throw CLI::ValidationError("--grid", "expected NxM, got '" + s + "'");
  return {n, m};
}

ScalarField make_init(const GridPtr& g, const std::string& spec, unsigned long seed) {
  if (spec == "sphere") return sphere_support(g);
  double a, b, c, eps;
  if (std::sscanf(spec.c_str(), "ellipsoid:%lf,%lf,%lf", &a, &b, &c) == 3)
    return ellipsoid_support(g, a, b, c);
  if (std::sscanf(spec.c_str(), "perturbed:%lf", &eps) == 1)
    return perturbed_sphere(g, eps, seed);
  if (spec.rfind("file:", 0) == 0) {
    ScalarField u = load_field(spec.substr(5));
    if (u.grid->n_theta != g->n_theta || u.grid->n_phi != g->n_phi)
      throw std::runtime_error("--init file grid does not match --grid");
    return u;
  }
  throw CLI::ValidationError(
      "--init", "expected sphere | ellipsoid:a,b,c | perturbed:eps | file:PATH, got '" + spec + "'");
}

ScalarField make_density(const GridPtr& g, const std::string& spec) {
  double c;
  if (std::sscanf(spec.c_str(), "const:%lf", &c) == 1) return constant_field(g, c);
  if (spec.rfind("file:", 0) == 0) {
    ScalarField f = load_field(spec.substr(5));
    if (f.grid->n_theta != g->n_theta || f.grid->n_phi != g->n_phi)
      throw std::runtime_error("--f file grid does not match --grid");
    return f;
  }
  throw CLI::ValidationError("--f", "expected const:c | file:PATH, got '" + spec + "'");
}

struct SolveArgs {
  double p = 0.0;
  std::string mode = "newton";
  std::string grid = "32x64";
  double omega = 0.3;
  double dt = 0.0;
  double tol = 1e-9;
  int max_iter = 50000;
  unsigned long seed = 0;
  std::string init = "sphere";
  std::string f = "const:1";
};

void add_solve_flags(CLI::App* cmd, SolveArgs& a, bool with_mode) {
  cmd->add_option("--p", a.p, "exponent p of the L_p-Minkowski problem")->capture_default_str();
  if (with_mode)
    cmd->add_option("--mode", a.mode, "iteration: fixed-point | flow | newton")
        ->check(CLI::IsMember({"fixed-point", "flow", "newton"}))
        ->capture_default_str();
  cmd->add_option("--grid", a.grid, "grid size NxM")->capture_default_str();
  cmd->add_option("--omega", a.omega, "fixed-point damping factor")->capture_default_str();
  cmd->add_option("--dt", a.dt, "flow time step (0 = auto)")->capture_default_str();
  cmd->add_option("--tol", a.tol, "convergence tolerance on the scaled residual")
      ->capture_default_str();
  cmd->add_option("--max-iter", a.max_iter, "iteration cap")->capture_default_str();
  cmd->add_option("--seed", a.seed, "RNG seed for perturbed starts")->capture_default_str();
  cmd->add_option("--init", a.init, "start: sphere | ellipsoid:a,b,c | perturbed:eps | file:PATH")
      ->capture_default_str();
  cmd->add_option("--f", a.f, "density: const:c | file:PATH")->capture_default_str();
}

int run_solve(const SolveArgs& a, const std::string& out_dir, const std::string& name,
              const std::string& subcommand) {
  Report rep(name, subcommand);
  rep.param("p", a.p);
  rep.param("mode", a.mode);
  rep.param("grid", a.grid);
  rep.param("omega", a.omega);
  rep.param("dt", a.dt);
  rep.param("tol", a.tol);
  rep.param("max_iter", a.max_iter);
  rep.param("seed", a.seed);
  rep.param("init", a.init);
  rep.param("f", a.f);

  auto [n, m] = parse_grid(a.grid);
  auto g = SphereGrid::build(n, m);
  SolverConfig cfg(make_init(g, a.init, a.seed), make_density(g, a.f));
  cfg.p = a.p;
  cfg.mode = a.mode == "fixed-point" ? SolverMode::fixed_point
             : a.mode == "flow"      ? SolverMode::flow
                                     : SolverMode::newton;
  cfg.omega = a.omega;
  cfg.dt = a.dt;
  cfg.tol = a.tol;
  cfg.max_iter = a.max_iter;
  cfg.seed = a.seed;

  auto res = solve(cfg);

  rep.metric("converged", res.converged);
  rep.metric("iterations", res.iterations);
  rep.metric("error", res.error);
  if (!res.residual_trace.empty()) rep.metric("residual_final", res.residual_trace.back());
  if (!res.q_trace.empty()) rep.metric("max_Q_final", res.q_trace.back());
  if (!res.g_trace.empty()) rep.metric("G_oscillation_final", res.g_trace.back());
  rep.metric("u_min", res.u_final.min());
  rep.metric("u_max", res.u_final.max());
  double dev1 = 0.0;
  for (double v : res.u_final.values) dev1 = std::max(dev1, std::fabs(v - 1.0));
  rep.metric("sup_dev_from_unit_ball", dev1);

  save_field(res.u_final, out_dir + "/" + name + "_u.txt");
  std::ostringstream dat;
  dat << "# iter residual max_Q G_osc\n";
  for (std::size_t i = 0; i < res.residual_trace.size(); ++i) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g %.17g\n", i, res.residual_trace[i],
                  i < res.q_trace.size() ? res.q_trace[i] : 0.0,
                  i < res.g_trace.size() ? res.g_trace[i] : 0.0);
    dat << buf;
  }
  write_text(out_dir + "/" + name + "_residual.dat", dat.str());

  rep.check("step_errors_absent", res.error.empty());
  if (cfg.tol > 0.0) rep.check("converged", res.converged);
  return finish(rep, out_dir, name, res.wall_time);
}

int run_verify_identities(int samples, unsigned long seed, const std::string& out_dir,
                          const std::string& name) {
  Report rep(name, "verify-identities");
  rep.param("samples", samples);
  rep.param("seed", seed);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto draw = [&]() {
    IdentitySample s;
    s.lam2 = std::pow(10.0, 2.0 * U(rng) - 1.0);
    s.lam1 = s.lam2 * std::pow(10.0, 2.0 * (U(rng) * (1.0 - 1e-9) + 1e-9));
    s.alpha = 6.0 * U(rng) - 3.0;
    s.q = 2.0 * U(rng);
    if (s.q == 0.0) s.q = 1.0;
    return s;
  };

  const auto t0 = std::chrono::steady_clock::now();
  double worst_t = 0.0, worst_B = 0.0, worst_det = 0.0;
  int skipped = 0;
  for (int k = 0; k < samples; ++k) {
    IdentitySample s = draw();
    try {
      worst_t = std::max(worst_t, verify_t_identities(s));
    } catch (const DegenerateT&) {
      ++skipped;
    }
    worst_B = std::max(worst_B, verify_B_expansion(s));
    const Sym2 h{s.lam1, 0.0, s.lam2};
    const Sym2 dh{2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0};
    worst_det = std::max(worst_det, verify_det_second_derivative(h, dh));
  }
  double worst_c1 = 0.0;
  for (int k = 0; k <= 100; ++k) {
    auto c1 = case1_coefficients(1.0 + k / 100.0);
    worst_c1 = std::max({worst_c1, std::fabs(c1.lam1_coeff), c1.q1_defect,
                         std::fabs(c1.lam1_coeff - c1.lam1_factored)});
  }
  double worst_c3 = 0.0;
  for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    auto c3 = case3_reduction(q, 2000, seed);
    worst_c3 = std::max({worst_c3, c3.reduction_defect, c3.pinch_defect});
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  rep.metric("t_identities_max_defect", worst_t);
  rep.metric("t_identities_degenerate_skipped", skipped);
  rep.metric("B_expansion_max_defect", worst_B);
  rep.metric("det_second_derivative_max_defect", worst_det);
  rep.metric("case1_coefficients_max_defect", worst_c1);
  rep.metric("case3_reduction_max_defect", worst_c3);

  rep.check("t_identities", worst_t <= 1e-9);
  rep.check("B_expansion", worst_B <= 1e-9);
  rep.check("det_second_derivative", worst_det <= 1e-8);
  rep.check("case1_coefficients", worst_c1 <= 1e-12);
  rep.check("case3_reduction", worst_c3 <= 1e-8);
  return finish(rep, out_dir, name, wall);
}

int run_pinching_table(double qmin, double qmax, int steps, const std::string& out_dir,
                       const std::string& name) {
  Report rep(name, "pinching-table");
  rep.param("q_min", qmin);
  rep.param("q_max", qmax);
  rep.param("steps", steps);
  if (steps < 1) throw CLI::ValidationError("--steps", "need at least 1 row");

  std::ostringstream csv, dat;
  csv << "q,p,tau,beta,beta_t,C\n";
  dat << "# q beta beta_t\n";
  bool ordered = true;
  for (int k = 0; k < steps; ++k) {
    const double q = steps == 1 ? qmin : qmin + (qmax - qmin) * k / (steps - 1);
    auto pp = pinching_beta(1.0 - q);
    ordered = ordered && pp.beta > pp.beta_t;
    char row[256];
    std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", q, pp.p, pp.tau,
                  pp.beta, pp.beta_t, pp.chow);
    csv << row;
    std::snprintf(row, sizeof(row), "%.17g %.17g %.17g\n", q, pp.beta, pp.beta_t);
    dat << row;
  }
  write_text(out_dir + "/" + name + ".csv", csv.str());
  write_text(out_dir + "/" + name + ".dat", dat.str());
  rep.metric("rows", steps);
  rep.check("beta_above_threshold", ordered);
  return finish(rep, out_dir, name, 0.0);
}

int run_example_boxes(double a, double eps, double lambda, double p, const std::string& grid,
                      const std::string& out_dir, const std::string& name) {
  Report rep(name, "example-boxes");
  rep.param("a", a);
  rep.param("eps", eps);
  rep.param("lambda", lambda);
  rep.param("p", p);
  rep.param("grid", grid);

  const auto t0 = std::chrono::steady_clock::now();
  const BoxBody A = example_box(a);
  const BoxBody Ae = example_box_shifted(a, eps);
  const double gap = bmf_gap(A, Ae, lambda, p);
  rep.metric("gap_exact", gap);

  // numeric cross-check: Wulff volumes on a grid (axis directions appended so
  // the boxes are cut exactly)
  auto [n, m] = parse_grid(grid);
  auto g = SphereGrid::build(n, m);
  auto bound_of = [&](const BoxBody& B) {
    DirectionalBound b;
    for (std::size_t k = 0; k < g->size(); ++k) b.push(g->nodes[k], B.support(g->nodes[k]));
    for (int k = 0; k < 3; ++k) {
      Vec3 e{k == 0 ? 1.0 : 0.0, k == 1 ? 1.0 : 0.0, k == 2 ? 1.0 : 0.0};
      b.push(e, B.support(e));
      b.push(-1.0 * e, B.support(-1.0 * e));
    }
    return b;
  };
  const auto bA = bound_of(A);
  const auto bAe = bound_of(Ae);
  const Polytope PA = wulff_shape(bA);
  const double vA = polytope_volume(PA);
  const double vAe = polytope_volume(wulff_shape(bAe));
  save_off(out_dir + "/" + name + "_box.off", PA);
  rep.metric("wulff_volume", vA);
  rep.metric("wulff_volume_shifted", vAe);
  rep.metric("exact_volume", A.volume());

  auto conv = box_h_convexity(a, eps, p);
  rep.metric("h_min_second_diff", conv.min_second_diff);
  rep.metric("h_max_second_diff", conv.max_second_diff);
  std::ostringstream dat;
  dat << "# lambda h\n";
  for (std::size_t k = 0; k < conv.lambda.size(); ++k) {
    char row[64];
    std::snprintf(row, sizeof(row), "%.17g %.17g\n", conv.lambda[k], conv.h[k]);
    dat << row;
  }
  write_text(out_dir + "/" + name + "_h.dat", dat.str());

  rep.check("wulff_volume_matches_exact",
            std::fabs(vA - A.volume()) <= 1e-6 * A.volume() &&
                std::fabs(vAe - Ae.volume()) <= 1e-6 * Ae.volume());
  rep.check("gap_sign_consistent", p >= 1.0 ? gap >= -1e-10 : true);
  rep.check("h_convexity_sign",
            p >= 1.0 ? conv.max_second_diff <= 1e-12 : conv.min_second_diff >= -1e-12);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return finish(rep, out_dir, name, wall);
}

int run_ellipsoid_residual(double a, double b, double c, double p, const std::string& grid,
                           const std::string& out_dir, const std::string& name) {
  Report rep(name, "ellipsoid-residual");
  rep.param("a", a);
  rep.param("b", b);
  rep.param("c", c);
  rep.param("p", p);
  rep.param("grid", grid);

  const auto t0 = std::chrono::steady_clock::now();
  auto [n, m] = parse_grid(grid);
  auto g1 = SphereGrid::build(n, m);
  auto g2 = SphereGrid::build(2 * n, 2 * m);
  const double r1 =
      residual(ellipsoid_support(g1, a, b, c), constant_field(g1, 1.0), p).max_abs();
  const double r2 =
      residual(ellipsoid_support(g2, a, b, c), constant_field(g2, 1.0), p).max_abs();
  const double order = std::log2(r1 / r2);
  rep.metric("residual_inf", r1);
  rep.metric("residual_inf_refined", r2);
  rep.metric("convergence_order", order);
  rep.check("order_at_least_1.8", order >= 1.8);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return finish(rep, out_dir, name, wall);
}

int run_curvature(const std::string& init, const std::string& grid, unsigned long seed,
                  const std::string& out_dir, const std::string& name) {
  Report rep(name, "curvature");
  rep.param("init", init);
  rep.param("grid", grid);
  rep.param("seed", seed);

  const auto t0 = std::chrono::steady_clock::now();
  auto [n, m] = parse_grid(grid);
  auto g = SphereGrid::build(n, m);
  ScalarField u = make_init(g, init, seed);
  auto c = curvatures_from_support(u);

  ScalarField K(g), H(g);
  K.values = c.K;
  H.values = c.H;
  save_field(K, out_dir + "/" + name + "_K.txt");
  save_field(H, out_dir + "/" + name + "_H.txt");

  auto span = [&](const std::vector<double>& v) {
    double lo = v[0], hi = v[0];
    for (double x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    return std::pair{lo, hi};
  };
  auto [Klo, Khi] = span(c.K);
  auto [Hlo, Hhi] = span(c.H);
  rep.metric("K_min", Klo);
  rep.metric("K_max", Khi);
  rep.metric("H_min", Hlo);
  rep.metric("H_max", Hhi);
  rep.metric("min_pinching_ratio", c.min_pinching_ratio());
  rep.metric("volume", volume_from_support(u));
  rep.check("convex", Klo > 0.0);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return finish(rep, out_dir, name, wall);
}

int run_lemma_check(const std::string& init, const std::string& grid, unsigned long seed,
                    const std::string& out_dir, const std::string& name) {
  Report rep(name, "lemma-check");
  rep.param("init", init);
  rep.param("grid", grid);
  rep.param("seed", seed);

  const auto t0 = std::chrono::steady_clock::now();
  auto [n, m] = parse_grid(grid);
  auto g1 = SphereGrid::build(n, m);
  auto g2 = SphereGrid::build(2 * n, 2 * m);
  auto r1 = verify_lemma_2_4(make_init(g1, init, seed));
  auto r2 = verify_lemma_2_4(make_init(g2, init, seed));
  rep.metric("defect_gradient_identity", r1.defect_220);
  rep.metric("defect_hessian_identity", r1.defect_221);
  rep.metric("defect_gradient_identity_refined", r2.defect_220);
  rep.metric("defect_hessian_identity_refined", r2.defect_221);
  const double floor = 1e-13;
  const bool shrink = r2.defect_220 <= std::max(r1.defect_220, floor) &&
                      r2.defect_221 <= std::max(r1.defect_221, floor);
  rep.check("defects_shrink_under_refinement", shrink);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return finish(rep, out_dir, name, wall);
}

// Expand `--config PATH` in place: each `key = value` line of the file becomes
// a `--key=value` token unless that flag already appears on the command line,
// so explicit flags override the file.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      continue;
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string line;
    std::size_t at = i;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("config file " + path + ": expected key=value, got '" + line + "'");
      const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
      bool given = false;
      for (const auto& a : args)
        given = given || a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
      if (!given) args.insert(args.begin() + at++, "--" + key + "=" + val);
    }
    --i;  // re-examine the slot we replaced
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minklab: L_p-Minkowski problem workbench on the sphere"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir = ".";
  if (const char* env = std::getenv("MINKLAB_OUT")) out_dir = env;
  std::string name;
  app.add_option("--out", out_dir, "output directory (default: $MINKLAB_OUT or .)")
      ->capture_default_str();
  app.add_option("--name", name, "experiment name (default: the subcommand)");

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "solve det r = f u^{p-1}");
  add_solve_flags(solve_cmd, sa, true);

  SolveArgs fa;
  auto* flow_cmd = app.add_subcommand("flow", "normalized Gauss-curvature flow (p < 1)");
  add_solve_flags(flow_cmd, fa, false);

  int vi_samples = 100000;
  unsigned long vi_seed = 2024;
  auto* vi_cmd = app.add_subcommand("verify-identities", "max defects of the algebraic identities");
  vi_cmd->add_option("--samples", vi_samples, "random samples per suite")->capture_default_str();
  vi_cmd->add_option("--seed", vi_seed, "RNG seed")->capture_default_str();

  double qmin = 0.05, qmax = 0.95;
  int steps = 19;
  auto* pt_cmd = app.add_subcommand("pinching-table", "pinching constants beta(q) as CSV");
  pt_cmd->add_option("--q-min", qmin, "smallest q")->capture_default_str();
  pt_cmd->add_option("--q-max", qmax, "largest q")->capture_default_str();
  pt_cmd->add_option("--steps", steps, "number of rows")->capture_default_str();

  double eb_a = 1.0, eb_eps = 0.5, eb_lambda = 0.5, eb_p = 0.5;
  std::string eb_grid = "64x128";
  auto* eb_cmd = app.add_subcommand("example-boxes", "box counterexample gap and h(lambda)");
  eb_cmd->add_option("--a", eb_a, "cube half-width")->capture_default_str();
  eb_cmd->add_option("--eps", eb_eps, "shift of the second box")->capture_default_str();
  eb_cmd->add_option("--lambda", eb_lambda, "combination weight")->capture_default_str();
  eb_cmd->add_option("--p", eb_p, "p-mean exponent")->capture_default_str();
  eb_cmd->add_option("--grid", eb_grid, "direction grid NxM for the Wulff cross-check")
      ->capture_default_str();

  double er_a = 1.3, er_b = 1.0, er_c = 1.0 / 1.3, er_p = -3.0;
  std::string er_grid = "64x128";
  auto* er_cmd = app.add_subcommand("ellipsoid-residual",
                                    "discretization residual of an exact ellipsoid solution");
  er_cmd->add_option("--a", er_a, "semi-axis a")->capture_default_str();
  er_cmd->add_option("--b", er_b, "semi-axis b")->capture_default_str();
  er_cmd->add_option("--c", er_c, "semi-axis c")->capture_default_str();
  er_cmd->add_option("--p", er_p, "exponent p")->capture_default_str();
  er_cmd->add_option("--grid", er_grid, "base grid NxM (also run at 2Nx2M)")
      ->capture_default_str();

  std::string cv_init = "sphere", cv_grid = "64x128";
  unsigned long cv_seed = 0;
  auto* cv_cmd = app.add_subcommand("curvature", "curvature fields and pinching of a body");
  cv_cmd->add_option("--init", cv_init, "body: sphere | ellipsoid:a,b,c | perturbed:eps | file:PATH")
      ->capture_default_str();
  cv_cmd->add_option("--grid", cv_grid, "grid NxM")->capture_default_str();
  cv_cmd->add_option("--seed", cv_seed, "RNG seed for perturbed bodies")->capture_default_str();

  std::string lc_init = "ellipsoid:1.2,1.0,0.9", lc_grid = "64x128";
  unsigned long lc_seed = 0;
  auto* lc_cmd = app.add_subcommand("lemma-check", "support-function identity defects");
  lc_cmd->add_option("--init", lc_init, "body: sphere | ellipsoid:a,b,c | perturbed:eps | file:PATH")
      ->capture_default_str();
  lc_cmd->add_option("--grid", lc_grid, "base grid NxM (also run at 2Nx2M)")
      ->capture_default_str();
  lc_cmd->add_option("--seed", lc_seed, "RNG seed for perturbed bodies")->capture_default_str();

  std::string cfg_doc;  // handled in expand_config before CLI11 sees the args
  for (auto* sub : app.get_subcommands(nullptr))
    sub->add_option("--config", cfg_doc,
                    "key=value config file; command-line flags take precedence");

  std::vector<std::string> args;
  try {
    args = expand_config({argv + 1, argv + argc});
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }
  try {
    std::vector<const char*> cargs{argv[0]};
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    auto* sub = app.get_subcommands().front();
    if (name.empty()) name = sub->get_name();
    if (sub == solve_cmd) return run_solve(sa, out_dir, name, "solve");
    if (sub == flow_cmd) {
      fa.mode = "flow";
      return run_solve(fa, out_dir, name, "flow");
    }
    if (sub == vi_cmd) return run_verify_identities(vi_samples, vi_seed, out_dir, name);
    if (sub == pt_cmd) return run_pinching_table(qmin, qmax, steps, out_dir, name);
    if (sub == eb_cmd)
      return run_example_boxes(eb_a, eb_eps, eb_lambda, eb_p, eb_grid, out_dir, name);
    if (sub == er_cmd)
      return run_ellipsoid_residual(er_a, er_b, er_c, er_p, er_grid, out_dir, name);
    if (sub == cv_cmd) return run_curvature(cv_init, cv_grid, cv_seed, out_dir, name);
    if (sub == lc_cmd) return run_lemma_check(lc_init, lc_grid, lc_seed, out_dir, name);
  } catch (const std::exception& e) {
    json err{{"error", e.what()}, {"version", kVersion}};
    std::fprintf(stderr, "%s\n", err.dump(2).c_str());
    return 2;
  }
  return 2;
}
