#include "ucauchy/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ucauchy/badsquares.hpp"
#include "ucauchy/cauchy.hpp"
#include "ucauchy/curve.hpp"
#include "ucauchy/measure.hpp"
#include "ucauchy/riesz.hpp"

namespace ucauchy {

namespace {

using nlohmann::json;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct FixtureArgs {
  std::string kind = "segment";
  double density = 1.0;
  double len = 100.0;
  double mesh = 0.01;
  double x0 = std::nan("");
  double y = 0.0;
  double gap_lo = 0.45, gap_hi = 0.55;
  double radius = 1.0;
  double amp = 0.5;
  int n = 4;
  std::size_t circle_points = 10000;
  std::string input;
};

void add_fixture_options(CLI::App* app, FixtureArgs& f) {
  app->add_option("--fixture", f.kind, "segment | gap | circle | cantor | graph | file")
      ->check(CLI::IsMember({"segment", "gap", "circle", "cantor", "graph", "file"}));
  app->add_option("--density", f.density, "linear density (segment, gap, circle, graph)");
  app->add_option("--len", f.len, "length along x (segment, gap, graph)");
  app->add_option("--mesh", f.mesh, "point spacing (segment, gap, graph, file)");
  app->add_option("--x0", f.x0, "left end (default -len/2)");
  app->add_option("--y", f.y, "height of the line (segment, gap)");
  app->add_option("--gap-lo", f.gap_lo, "gap start (gap)");
  app->add_option("--gap-hi", f.gap_hi, "gap end (gap)");
  app->add_option("--radius", f.radius, "circle radius");
  app->add_option("--points", f.circle_points, "circle point count");
  app->add_option("--n", f.n, "cantor generation");
  app->add_option("--amp", f.amp, "sawtooth amplitude (graph)");
  app->add_option("--input", f.input, "CSV with columns x,y,weight (file)");
}

PointCloudMeasure read_points(const std::string& path, double mesh) {
  std::ifstream in(path);
  require(in.good(), "cannot read " + path);
  std::vector<Point> pts;
  std::vector<double> w;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
    std::istringstream ls(line);
    double x, y, m;
    char c1, c2;
    require(static_cast<bool>(ls >> x >> c1 >> y >> c2 >> m) && c1 == ',' && c2 == ',',
            "malformed row in " + path + ": " + line);
    pts.emplace_back(x, y);
    w.push_back(m);
  }
  return PointCloudMeasure(std::move(pts), std::move(w), mesh, "file(" + path + ")");
}

PointCloudMeasure make_fixture(const FixtureArgs& f) {
  const double x0 = std::isnan(f.x0) ? -0.5 * f.len : f.x0;
  if (f.kind == "segment") return gen_segment(f.density, {x0, f.y}, {x0 + f.len, f.y}, f.mesh);
  if (f.kind == "gap") {
    require(x0 < f.gap_lo && f.gap_lo < f.gap_hi && f.gap_hi < x0 + f.len, "gap must lie inside the line");
    return concat(gen_segment(f.density, {x0, f.y}, {f.gap_lo, f.y}, f.mesh),
                  gen_segment(f.density, {f.gap_hi, f.y}, {x0 + f.len, f.y}, f.mesh));
  }
  if (f.kind == "circle") return gen_circle(f.density, {0.0, 0.0}, f.radius, f.circle_points);
  if (f.kind == "cantor") return gen_cantor(f.n);
  if (f.kind == "graph") {
    std::vector<std::pair<double, double>> saw;
    for (int k = 0; 0.5 * k <= f.len; ++k) saw.emplace_back(x0 + 0.5 * k, (k % 2) * f.amp);
    return gen_lipschitz_graph(saw, f.density, f.mesh);
  }
  require(!f.input.empty(), "--fixture file needs --input");
  return read_points(f.input, f.mesh);
}

Square parse_dyadic(const std::string& s) {
  int j = 0;
  long long kx = 0, ky = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  require(static_cast<bool>(in >> j >> c1 >> kx >> c2 >> ky) && c1 == ',' && c2 == ',',
          "--P expects j,kx,ky (the square [kx 2^j, (kx+1) 2^j) x [ky 2^j, (ky+1) 2^j))");
  return Square::dyadic(j, kx, ky);
}

Point parse_point(const std::string& s) {
  double x = 0, y = 0;
  char c = 0;
  std::istringstream in(s);
  require(static_cast<bool>(in >> x >> c >> y) && c == ',', "point expects x,y");
  return {x, y};
}

json to_json(Point z) { return json::array({z.real(), z.imag()}); }
json to_json(Complex z, int) { return json{{"re", z.real()}, {"im", z.imag()}}; }
json to_json(const Square& q) {
  json j{{"center", to_json(q.center())}, {"side", q.side()}};
  if (q.is_dyadic()) j["dyadic"] = json::array({q.index()->j, q.index()->kx, q.index()->ky});
  return j;
}

json measure_summary(const PointCloudMeasure& mu) {
  return {{"label", mu.label()}, {"points", mu.size()}, {"mesh", mu.mesh()}, {"total_mass", mu.total_mass()}};
}

struct Context {
  std::filesystem::path out_dir;
  bool plot = false;
  std::uint64_t seed = 1;

  std::filesystem::path file(const std::string& name) const {
    std::filesystem::create_directories(out_dir);
    return out_dir / name;
  }
  void write(const std::string& name, const std::string& body) const {
    std::ofstream f(file(name), std::ios::binary);
    require(f.good(), "cannot write " + file(name).string());
    f << body;
  }
};

void write_points_csv(const Context& ctx, const std::string& name, const PointCloudMeasure& mu) {
  std::string s = "x,y,weight\n";
  for (std::size_t i = 0; i < mu.size(); ++i)
    s += num(mu.point(i).real()) + "," + num(mu.point(i).imag()) + "," + num(mu.weight(i)) + "\n";
  ctx.write(name, s);
}

json cmd_generate(const Context& ctx, const PointCloudMeasure& mu) {
  write_points_csv(ctx, "points.csv", mu);
  json r = measure_summary(mu);
  r["file"] = "points.csv";
  return r;
}

json cmd_analyze(const Context& ctx, const PointCloudMeasure& mu) {
  const RegularityReport reg = regularity(mu);
  json tails = json::array();
  std::size_t violations = 0;
  std::string plot = "center_x,center_y,r,eps,tail_sum,tail_bound\n";
  for (Point c : {mu.point(0), mu.point(mu.size() / 2)})
    for (int a = 0; a < 10; ++a) {
      const double r = 4 * mu.mesh() * std::pow(std::max(1.0, mu.diameter() / (4 * mu.mesh())), a / 9.0);
      for (int e = 0; e < 10; ++e) {
        const double eps = 0.05 + 0.2 * e;
        const double s = tail_sum(mu, c, r, eps), b = tail_bound(reg.niceness, r, eps);
        if (s > b) ++violations;
        plot += num(c.real()) + "," + num(c.imag()) + "," + num(r) + "," + num(eps) + "," + num(s) + "," + num(b) + "\n";
      }
    }
  if (ctx.plot) ctx.write("analyze_tail.csv", plot);
  json r = measure_summary(mu);
  r["niceness"] = reg.niceness;
  r["ad_constant"] = reg.ad_constant;
  r["probe_count"] = reg.probe_count;
  r["tail_checks"] = 200;
  r["tail_violations"] = violations;
  return r;
}

struct CauchyArgs {
  double delta = 0.0;
  bool skip_norm = false;
  std::string z0, window;
  double defect_lambda = 0.1, A = 4.0;
  std::size_t k = 16;
};

json cmd_cauchy(const Context& ctx, const PointCloudMeasure& mu, const CauchyArgs& a, bool& unstable) {
  const double delta = a.delta > 0.0 ? a.delta : default_delta(mu);
  json r = measure_summary(mu);
  r["delta"] = delta;
  if (!a.skip_norm) {
    const NormResult n = operator_norm(mu, delta, NormOptions{1e-6, 400, ctx.seed});
    r["operator_norm"] = {{"value", n.value}, {"iterations", n.iterations}};
  }
  const Point mid = mu.point(mu.size() / 2);
  const Point z0 = a.z0.empty() ? far_base_point(mu) : parse_point(a.z0);
  Window w{mid, std::min(1.0, 0.05 * mu.diameter())};
  if (!a.window.empty()) {
    std::istringstream in(a.window);
    double x, y, rr;
    char c1, c2;
    require(static_cast<bool>(in >> x >> c1 >> y >> c2 >> rr) && c1 == ',' && c2 == ',', "--window expects x,y,r");
    w = {{x, y}, rr};
  }
  const KappaEstimate k = kappa_estimate(mu, z0, w, a.delta);
  unstable = k.unstable;
  r["kappa"] = {{"value", to_json(k.value, 0)}, {"spread", k.spread}, {"unstable", k.unstable},
                {"base_point", to_json(z0)}, {"window", {{"center", to_json(w.center)}, {"radius", w.radius}}}};

  // resolvent residuals |v^2 - 2 kappa v| / |2 kappa|^2 on a ring around the window
  json res = json::array();
  std::string plot = "x,y,residual\n";
  for (int t = 0; t < 20; ++t) {
    const Point z = w.center + 0.5 * w.radius * std::polar(1.0, 2 * std::numbers::pi * (t + 0.5) / 20);
    if (support_distance(mu, z) <= 2 * mu.mesh()) continue;
    const double v = resolvent_residual(mu, z, k.value, z0) / std::norm(2.0 * k.value);
    res.push_back({{"z", to_json(z)}, {"relative_residual", v}});
    plot += num(z.real()) + "," + num(z.imag()) + "," + num(v) + "\n";
  }
  r["resolvent"] = res;
  if (ctx.plot) ctx.write("cauchy_resolvent.csv", plot);

  const auto nu = blowup(mu, mid, a.defect_lambda);
  const auto dict = make_phi_family(nu, a.A, a.k);
  r["defect"] = {{"value", reflectionless_defect(nu, dict)}, {"blowup_lambda", a.defect_lambda},
                 {"blowup_center", to_json(mid)}, {"A", a.A}, {"dictionary_size", dict.size()}};
  return r;
}

struct RieszArgs {
  std::string p = "0,0,0";
  int depth = 3;
  double gamma = 0.01;
  ThetaParams theta;
};

json cmd_riesz(const Context& ctx, const PointCloudMeasure& mu, const RieszArgs& a) {
  const Square p = parse_dyadic(a.p);
  const auto lat = lattice_family(mu, p, a.depth, a.theta.A);
  std::vector<TestFn> fns;
  for (const auto& e : lat) fns.push_back(e.psi);
  json r = measure_summary(mu);
  r["P"] = to_json(p);
  r["depth"] = a.depth;
  r["lattice_size"] = fns.size();
  r["gram_norm"] = gram_norm(gram(mu, fns));
  r["theta_params"] = {{"A", a.theta.A}, {"A_prime", a.theta.A_prime}, {"psi_count", a.theta.psi_count},
                       {"f_candidates", a.theta.f_candidates}};
  r["gamma"] = a.gamma;
  r["theta_carleson"] = theta_carleson(mu, p, a.gamma, a.depth, a.theta);
  if (ctx.plot) {
    std::string plot = "x,y,side,theta\n";
    for (const auto& e : lat) {
      const double t = theta(mu, e.q, a.theta).theta_upper;
      plot += num(e.q.center().real()) + "," + num(e.q.center().imag()) + "," + num(e.q.side()) + "," + num(t) + "\n";
    }
    ctx.write("riesz_theta.csv", plot);
  }
  return r;
}

json ledger_json(const LengthLedger& l) {
  std::size_t edges = 0, max_edges = 0;
  for (const auto& e : l.inductive) edges += e.edge_count, max_edges = std::max(max_edges, e.edge_count);
  return {{"base_total", l.base_total}, {"inductive_total", l.inductive_total()}, {"total", l.total()},
          {"family_size", l.inductive.size()}, {"inductive_edges", edges}, {"max_edges_per_square", max_edges}};
}

json cmd_curve(const Context& ctx, const PointCloudMeasure& mu, const std::string& pstr, double tau, double l0) {
  const Square p = parse_dyadic(pstr);
  const GraphBuild b = build_graph(mu, p, tau, l0);
  const NetGraph& g = b.graph;
  const PolylineCurve f = euler_walk(g, p);

  json verts = json::array(), edges = json::array();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) verts.push_back(to_json(g.vertex(v)));
  for (const Edge& e : g.edges())
    edges.push_back({{"i", e.i}, {"j", e.j}, {"tag", e.kind == EdgeKind::Base ? "base" : "inductive"},
                     {"Q", to_json(e.q)}, {"scale", e.scale}, {"length", e.length}});
  ctx.write("graph.json", json{{"vertices", verts}, {"edges", edges}}.dump() + "\n");
  std::string csv = "t,x,y\n";
  for (std::size_t k = 0; k < f.points.size(); ++k) {
    const double t = f.total > 0 ? f.cumulative_length[k] / f.total : 0.0;
    csv += num(t) + "," + num(f.points[k].real()) + "," + num(f.points[k].imag()) + "\n";
  }
  ctx.write("curve.csv", csv);

  json r = measure_summary(mu);
  r["P"] = to_json(p);
  r["tau"] = tau;
  r["l0"] = l0;
  r["net_size"] = g.vertex_count();
  r["edge_count"] = g.edges().size();
  r["ledger"] = ledger_json(b.ledger);
  r["walk"] = {{"length", f.total}, {"lip_constant", f.lip_constant}, {"vertices", f.vertex_walk.size()}};
  r["components_meeting_3P"] = components_meeting_3q(g, p).size();
  return r;
}

json cmd_badsquares(const Context& ctx, const PointCloudMeasure& mu, const std::string& pstr, double tau,
                    int depth, double l0) {
  const Square p = parse_dyadic(pstr);
  const auto fam = bad_family(mu, p, tau, depth);
  std::string lines;
  for (const Square& q : fam) {
    const auto w = is_bad(mu, q, tau);
    json j{{"Q", to_json(q)}};
    if (w)
      j["witness"] = {{"zeta", to_json(w->zeta)}, {"xi", to_json(w->xi)}, {"z", to_json(w->z)},
                      {"clearance", w->clearance}, {"margin", w->clearance - tau * q.side()}};
    lines += j.dump() + "\n";
  }
  ctx.write("badsquares.jsonl", lines);
  json r = measure_summary(mu);
  r["P"] = to_json(p);
  r["tau"] = tau;
  r["depth"] = depth;
  r["bad_count"] = fam.size();
  r["carleson_norm"] = carleson_norm(fam, p);
  if (l0 > 0.0) {
    const GraphBuild b = build_graph(mu, p, tau, l0);
    const auto rep = inductive_implies_bad(mu, b.ledger, tau);
    json excluded = json::array(), missed = json::array();
    for (const Square& q : rep.excluded) excluded.push_back(to_json(q));
    for (const Square& q : rep.missed) missed.push_back(to_json(q));
    r["inductive_implies_bad"] = {{"l0", l0}, {"checked", rep.checked}, {"flagged", rep.flagged},
                                  {"fraction", rep.fraction()}, {"excluded", excluded}, {"missed", missed}};
  }
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete Cauchy-transform and rectifiability experiments", "ucauchy"};
  app.require_subcommand(1);
  std::string out_dir;
  if (const char* env = std::getenv("UCAUCHY_OUT_DIR")) out_dir = env;
  Context ctx;
  int threads = 1;
  app.add_option("--out-dir", out_dir, "output directory (default $UCAUCHY_OUT_DIR or .)");
  app.add_option("--seed", ctx.seed, "seed of the randomised start vectors");
  app.add_option("--threads", threads, "worker cap")->check(CLI::PositiveNumber);
  app.add_flag("--emit-plot-data", ctx.plot, "write long-form CSV for plotting");

  FixtureArgs fx;
  auto* gen = app.add_subcommand("generate", "write a fixture as x,y,weight CSV");
  auto* ana = app.add_subcommand("analyze", "regularity constants and tail estimates");
  auto* cau = app.add_subcommand("cauchy", "operator norm, kappa, resolvent residuals, defect");
  auto* rie = app.add_subcommand("riesz", "Gram norm, theta and its Carleson sum");
  auto* cur = app.add_subcommand("curve", "net graph, Euler walk and length ledger");
  auto* bad = app.add_subcommand("badsquares", "bad squares, Carleson norm, inductive squares");
  for (auto* s : {gen, ana, cau, rie, cur, bad}) add_fixture_options(s, fx);

  CauchyArgs ca;
  cau->add_option("--delta", ca.delta, "truncation radius (default 4 mesh)");
  cau->add_flag("--skip-norm", ca.skip_norm, "do not run the operator-norm iteration");
  cau->add_option("--z0", ca.z0, "base point x,y (default far from the support)");
  cau->add_option("--window", ca.window, "kappa window x,y,r");
  cau->add_option("--defect-lambda", ca.defect_lambda, "blow-up factor for the defect");
  cau->add_option("--A", ca.A, "test-function support parameter");
  cau->add_option("--k", ca.k, "dictionary size");

  RieszArgs ra;
  rie->add_option("--P", ra.p, "dyadic square j,kx,ky");
  rie->add_option("--depth", ra.depth, "lattice depth")->check(CLI::NonNegativeNumber);
  rie->add_option("--gamma", ra.gamma, "theta threshold");
  rie->add_option("--A", ra.theta.A, "psi support parameter");
  rie->add_option("--A-prime", ra.theta.A_prime, "radius factor of the sets F");
  rie->add_option("--psi-count", ra.theta.psi_count, "functions per square");
  rie->add_option("--f-candidates", ra.theta.f_candidates, "number of sets F");

  std::string p_curve = "0,0,0", p_bad = "0,0,0";
  double tau_curve = 1.0 / 32, tau_bad = 1.0 / 32, l0_curve = 0.0, l0_bad = 0.0;
  int depth_bad = 3;
  cur->add_option("--P", p_curve, "dyadic square j,kx,ky");
  cur->add_option("--tau", tau_curve, "net parameter in (0, 1/16)");
  cur->add_option("--l0", l0_curve, "base scale, l(P) 2^-d")->required();
  bad->add_option("--P", p_bad, "dyadic square j,kx,ky");
  bad->add_option("--tau", tau_bad, "hole parameter in (0, 1/16)");
  bad->add_option("--depth", depth_bad, "levels below P")->check(CLI::NonNegativeNumber);
  bad->add_option("--l0", l0_bad, "also cross-check the inductive squares of the curve at this base scale");

  std::vector<std::string> argv_store{"ucauchy"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  const auto fail = [&](const char* kind, const std::string& msg, int code) {
    err << json{{"error", kind}, {"message", msg}}.dump() << "\n";
    return code;
  };
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail("config", e.what(), kExitConfig);
  }
  ctx.out_dir = out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(out_dir);

  try {
    const PointCloudMeasure mu = make_fixture(fx);
    json report;
    bool unstable = false;
    std::string name;
    if (gen->parsed()) report = cmd_generate(ctx, mu), name = "generate";
    if (ana->parsed()) report = cmd_analyze(ctx, mu), name = "analyze";
    if (cau->parsed()) report = cmd_cauchy(ctx, mu, ca, unstable), name = "cauchy";
    if (rie->parsed()) report = cmd_riesz(ctx, mu, ra), name = "riesz";
    if (cur->parsed()) report = cmd_curve(ctx, mu, p_curve, tau_curve, l0_curve), name = "curve";
    if (bad->parsed()) report = cmd_badsquares(ctx, mu, p_bad, tau_bad, depth_bad, l0_bad), name = "badsquares";
    report["command"] = name;
    report["seed"] = ctx.seed;
    report["threads"] = threads;
    const std::string text = report.dump(2) + "\n";
    ctx.write(name + ".json", text);
    out << text;
    if (unstable) return fail("numerical", "kappa estimate unstable (spread above 20% of |kappa|)", kExitNumerical);
    return kExitOk;
  } catch (const ConfigError& e) {
    return fail("config", e.what(), kExitConfig);
  } catch (const NoSupportError& e) {
    return fail("config", e.what(), kExitConfig);
  } catch (const NumericalError& e) {
    return fail("numerical", e.what(), kExitNumerical);
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("config", e.what(), kExitConfig);
  }
}

}  // namespace ucauchy
