// hsl: verification runner and direct access to norms, operators,
// Carleson norms and ball coefficient tables.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hsl/ball.hpp"
#include "hsl/carleson.hpp"
#include "hsl/checks.hpp"
#include "hsl/config.hpp"
#include "hsl/errors.hpp"
#include "hsl/operators.hpp"
#include "hsl/parallel.hpp"
#include "hsl/spaces.hpp"
#include "hsl/testfns.hpp"

using namespace hsl;

namespace {

struct Global {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
  std::string json_out;
  Config config;
};

// quad.* / sphere.* / radial.* knobs; flags win over the config file
struct Knobs {
  double x_radius = 0, t_floor = 0, t_ceiling = 0;
  int order = 0, levels = 0;
  int azimuthal = 0, polar = 0, radial = 0;
  CLI::App* app = nullptr;

  void add(CLI::App* sub) {
    app = sub;
    sub->add_option("--quad.x_radius", x_radius, "truncation radius in x");
    sub->add_option("--quad.t_floor", t_floor, "smallest height");
    sub->add_option("--quad.t_ceiling", t_ceiling, "largest height");
    sub->add_option("--quad.order", order, "Gauss points per cell axis");
    sub->add_option("--quad.levels", levels, "refinement levels");
    sub->add_option("--sphere.azimuthal", azimuthal, "azimuthal points");
    sub->add_option("--sphere.polar", polar, "polar points");
    sub->add_option("--radial.points", radial, "radial Gauss-Jacobi points");
  }

  bool given(const char* name) const { return app->count(name) > 0; }

  template <class T>
  void pick(const Config& cfg, const char* section, const char* key, const char* flag, T value, T& out) const {
    if (given(flag)) out = value;
    else if (auto v = cfg.get(section, key)) out = static_cast<T>(parse_real(*v));
  }

  HalfspaceQuadSpec quad(const Config& cfg, HalfspaceQuadSpec s) const {
    pick(cfg, "quad", "x_radius", "--quad.x_radius", x_radius, s.x_radius);
    pick(cfg, "quad", "t_floor", "--quad.t_floor", t_floor, s.t_floor);
    pick(cfg, "quad", "t_ceiling", "--quad.t_ceiling", t_ceiling, s.t_ceiling);
    pick(cfg, "quad", "order", "--quad.order", order, s.points_per_cell_axis);
    pick(cfg, "quad", "levels", "--quad.levels", levels, s.refinement_levels);
    s.validate();
    return s;
  }

  SphereQuadSpec sphere(const Config& cfg, int n) const {
    SphereQuadSpec s{n, n == 2 ? 128 : 64, 32};
    pick(cfg, "sphere", "azimuthal", "--sphere.azimuthal", azimuthal, s.azimuthal_points);
    pick(cfg, "sphere", "polar", "--sphere.polar", polar, s.polar_points);
    s.validate();
    return s;
  }

  int radial_points(const Config& cfg) const {
    int r = 32;
    pick(cfg, "radial", "points", "--radial.points", radial, r);
    if (r < 1) throw UsageError("radial.points must be positive");
    return r;
  }
};

// "p=2,alpha=0.5,s=0:0" -> map; ':' separates list entries
ParamMap parse_params(const std::string& text) {
  ParamMap out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("parameter '" + item + "' is not key=value");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    std::string value = trim(item.substr(eq + 1));
    std::replace(value.begin(), value.end(), ':', ',');
    out[trim(item.substr(0, eq))] = value;
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> v;
  for (const auto& s : split_list(text)) v.push_back(parse_real(s));
  return v;
}

// "x1,...,xn,t;x1,...,t"
std::vector<HPoint> parse_hpoints(const std::string& text, int n) {
  std::vector<HPoint> pts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto c = parse_numbers(item);
    if (static_cast<int>(c.size()) != n + 1)
      throw UsageError("point '" + item + "' needs " + std::to_string(n + 1) + " coordinates");
    HPoint z;
    z.n = n;
    for (int i = 0; i < n; ++i) z.x[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)];
    z.t = c.back();
    if (!(z.t > 0.0)) throw UsageError("height must be positive");
    pts.push_back(z);
  }
  if (pts.empty()) throw UsageError("--at needs at least one point");
  return pts;
}

BallPoint parse_ball_point(const std::string& text, int n) {
  const auto c = parse_numbers(text);
  if (static_cast<int>(c.size()) != n) throw UsageError("ball point needs " + std::to_string(n) + " coordinates");
  BallPoint x;
  x.n = n;
  for (int i = 0; i < n; ++i) x.x[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)];
  return x;
}

Json point_json(const HPoint& z) {
  Json j = Json::array();
  for (int i = 0; i < z.n; ++i) j.push_back(z.x[static_cast<std::size_t>(i)]);
  j.push_back(z.t);
  return j;
}

Json params_json(const ParamMap& used) {
  Json j = Json::object();
  for (const auto& [k, v] : used) j[k] = v;
  return j;
}

Json table_json(const CoeffTable& t) {
  Json rows = Json::array();
  for (int k = 0; k <= t.max_degree(); ++k)
    for (int j = 1; j <= t.dim(k); ++j) rows.push_back({k, j, t.at(k, j)});
  return {{"n", t.n()}, {"max_degree", t.max_degree()}, {"entries", rows}};
}

CoeffTable load_table(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open table file '" + path + "'");
  return CoeffTable::read(in, n);
}

void emit(const Global& g, const Json& j) {
  const std::string text = j.dump(2);
  std::cout << text << "\n";
  if (!g.json_out.empty()) {
    std::ofstream out(g.json_out);
    if (!out) throw UsageError("cannot write '" + g.json_out + "'");
    out << text << "\n";
  }
}

// ---------------------------------------------------------------- verify

int run_verify(Global& g, const std::vector<std::string>& args) {
  // bare words are check ids; --key value pairs go to every selected check
  std::vector<std::string> ids;
  ParamMap extra;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) {
      ids.push_back(a);
      continue;
    }
    if (a.size() < 3) throw UsageError("unexpected argument '" + a + "'");
    std::string key = a.substr(2), value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else if (i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0) {
      value = args[++i];
    } else {
      throw UsageError("missing value for '" + a + "'");
    }
    if (key == "seed") {
      g.seed = static_cast<std::uint64_t>(parse_real(value));
      g.seed_set = true;
    } else if (key == "workers") {
      g.workers = static_cast<int>(parse_real(value));
      if (g.workers < 1) throw UsageError("--workers must be positive");
      set_worker_count(g.workers);
    } else if (key == "json-out") {
      g.json_out = value;
    } else if (key == "config") {
      g.config = Config::load(value);
    } else {
      extra[key] = value;
    }
  }
  SuiteOptions opt = SuiteOptions::from_config(g.config);
  if (g.seed_set) opt.seed = g.seed;
  if (g.workers > 0) opt.workers = g.workers;
  if (!ids.empty()) {
    for (const auto& id : ids)
      if (!find_check(id)) throw UsageError("unknown check '" + id + "'");
    opt.ids = ids;
    opt.skip_groups.clear();
  }
  if (!extra.empty())
    for (const auto& id : opt.selected())
      for (const auto& [k, v] : extra) opt.params[id][k] = v;

  const auto reports = run_suite(opt);
  emit(g, suite_json(reports, opt));
  for (const auto& r : reports)
    std::cerr << r.id << ": " << to_string(r.status) << "\n";
  for (const auto& r : reports)
    if (is_failure(r.status)) return 1;
  return 0;
}

// ------------------------------------------------------------------ norm

int run_norm(Global& g, const Knobs& kb, const std::string& space, const std::string& ptext,
             const std::string& ftext, int n) {
  Params p(parse_params(ptext));
  Json out;
  out["space"] = space;
  NormResult r;
  if (space == "Ap" || space == "ApVec") {
    const TestFunction f = parse_test_function(ftext, n);
    BergmanNormParams bp;
    bp.p = p.real("p", 2.0);
    bp.lambda = p.real("lambda", 0.0);
    if (space == "ApVec") {
      bp.alphas = p.reals("alphas", std::vector<double>(static_cast<std::size_t>(f.factors()), bp.lambda));
      r = norm_product_h(f, bp, kb.quad(g.config, HalfspaceQuadSpec::coarse()));
    } else {
      r = norm_bergman_h(f, bp, kb.quad(g.config, {}));
    }
  } else if (space == "Bpq" || space == "Fpq" || space == "DN" || space == "Hsb") {
    const int bn = n < 2 ? 3 : n;
    const TestFunction f = parse_test_function(ftext, bn);
    const auto sphere = kb.sphere(g.config, bn);
    MixedNormParams mp;
    mp.n = bn;
    if (space != "Hsb") {
      mp.p = p.real("p", 2.0);
      mp.q = p.real("q", 2.0);
      mp.alpha = p.real("alpha", 1.0);
    }
    if (space == "Bpq") {
      r = norm_mixed(ball_function(f), mp, kb.radial_points(g.config), sphere);
    } else if (space == "Fpq") {
      r = norm_triebel(ball_function(f), mp, kb.radial_points(g.config), sphere);
    } else if (space == "DN") {
      const auto mode = p.text("mode", "exact") == "fd" ? GradientRequest::Mode::FiniteDifference
                                                        : GradientRequest::Mode::Exact;
      r = norm_dn(f, p.integer("N", 1), mp, mode, kb.radial_points(g.config), sphere);
    } else {
      const auto grid = radial_grid(p.integer("rho_points", 64), p.real("rho_max", 0.95));
      r.value = hs_beta_functional(ball_function(f), p.real("s", 2.0), p.real("beta", 1.0), grid, sphere);
    }
  } else {
    throw UsageError("unknown space '" + space + "'");
  }
  out["params"] = params_json(p.used());
  out["testfn"] = ftext;
  out["value"] = r.value;
  out["error_estimate"] = r.error_estimate;
  out["status"] = to_string(r.status);
  emit(g, out);
  return 0;
}

// -------------------------------------------------------------------- op

int run_op(Global& g, const Knobs& kb, const std::string& name, const std::string& ptext, const std::string& at,
           const std::string& ftext, int n) {
  Params p(parse_params(ptext));
  const auto pts = parse_hpoints(at, n);
  OpResult r;
  auto vec = [&](const char* key, double fallback, int m) {
    return p.reals(key, std::vector<double>(static_cast<std::size_t>(m), fallback));
  };
  if (name == "trace") {
    const TestFunction f = parse_test_function(ftext, n);
    r.value = trace_eval(f, pts.front());
  } else if (name == "reproduce") {
    const TestFunction f = parse_test_function(ftext, n);
    r = reproduce(f, p.integer("k", 1), pts.front(), {p.real("p", 2.0), p.real("alpha", 0.0)}, kb.quad(g.config, {}));
  } else if (name == "S") {
    const TestFunction f = parse_test_function(ftext, n);
    const int m = static_cast<int>(pts.size());
    const VecExponents e{vec("a", 1.0, m), vec("b", 1.0, m)};
    r = s_expanded(e, [&](const HPoint& w) { return f(w); }, n, pts, kb.quad(g.config, {}));
  } else if (name == "Scell") {
    const TestFunction f = parse_test_function(ftext, n);
    r.value = s_tilde(p.real("a", 1.0), p.real("b", 0.0), [&](const HPoint& w) { return f(w); }, pts.front(),
                      p.integer("order", 6), p.integer("subdivisions", 1));
  } else if (name == "R" || name == "Rk") {
    const TestFunction f = parse_test_function(ftext, n);
    const int m = f.factors();
    const ProductFunction gf = [&](std::span<const HPoint> zs) { return f(zs); };
    const auto spec = kb.quad(g.config, HalfspaceQuadSpec::coarse());
    if (name == "R") r = r_expanded({vec("a", 1.0, m), vec("b", 1.0, m)}, gf, n, pts.front(), spec);
    else r = r_k(p.integer("k", 1), gf, n, m, pts.front(), spec);
  } else if (name == "extend") {
    const TestFunction f = parse_test_function(ftext, n);
    const int m = static_cast<int>(pts.size());
    const auto s = vec("s", 0.0, m);
    const int k = p.integer("k", extension_order(p.real("p", 2.0), n, s));
    r = extend(f, k, pts, kb.quad(g.config, {}));
  } else {
    throw UsageError("unknown operator '" + name + "'");
  }
  Json point = Json::array();
  for (const auto& z : pts) point.push_back(point_json(z));
  Json out;
  out["name"] = name;
  out["params"] = params_json(p.used());
  out["testfn"] = ftext;
  out["point"] = pts.size() == 1 ? point[0] : point;
  out["value"] = r.value;
  out["error_estimate"] = r.error_estimate;
  out["flags"] = r.flags;
  emit(g, out);
  return 0;
}

// -------------------------------------------------------------- carleson

int run_carleson(Global& g, const std::string& file, int n, int m, const std::string& rtext,
                 const std::string& ttext, bool star, bool global) {
  const auto mu = DiscreteMeasure::read_file(file, n, m);
  auto expand_list = [m](std::vector<double> v) {
    if (v.size() == 1) v.assign(static_cast<std::size_t>(m), v[0]);
    if (static_cast<int>(v.size()) != m) throw UsageError("--r and --tau need 1 or m entries");
    return v;
  };
  const CarlesonParams params{expand_list(parse_numbers(rtext)), expand_list(parse_numbers(ttext))};
  params.validate(m);
  const CarlesonResult r = star ? carleson_star(mu, params, global) : carleson_norm(mu, params);
  Json cand = Json::array();
  for (const auto& z : r.argmax) cand.push_back(point_json(z));
  Json out;
  out["norm"] = r.value;
  out["argmax_candidate"] = cand;
  out["atoms_used"] = r.atoms_used;
  out["kind"] = star ? (global ? "star-global" : "star") : "cube";
  emit(g, out);
  return 0;
}

// ------------------------------------------------------------------ ball

struct BallArgs {
  std::string op, testfn, table, with, f_table, at, which = "L";
  int n = 3, degree = 24, N = 1, radial = 8;
  double r_probe = 0.5, t = 1.0, s = 2.0, m = 1.0, alpha = 0.5, beta = 2.5, r = 0.5;
};

int run_ball(Global& g, const Knobs& kb, const BallArgs& a) {
  Json out;
  out["op"] = a.op;
  if (a.op == "expand") {
    const TestFunction f = parse_test_function(a.testfn, a.n);
    out["table"] = table_json(expand([&](const BallPoint& x) { return f(x); }, a.n, a.degree, a.r_probe));
  } else if (a.op == "synth") {
    out["value"] = synth(load_table(a.table, a.n), parse_ball_point(a.at, a.n));
  } else if (a.op == "convolve") {
    out["table"] = table_json(convolve(load_table(a.table, a.n), load_table(a.with, a.n)));
  } else if (a.op == "lambda") {
    out["table"] = table_json(lambda_t(a.t, load_table(a.table, a.n)));
  } else if (a.op == "functional") {
    MultiplierParams mp;
    mp.m = a.m;
    mp.N = a.N;
    mp.alpha = a.alpha;
    mp.beta = a.beta;
    const auto gt = load_table(a.table, a.n);
    FunctionalResult fr;
    if (a.which == "L") fr = functional_l(gt, a.s, mp);
    else if (a.which == "K") fr = functional_k(gt, a.s, mp);
    else if (a.which == "N") fr = functional_n(gt, a.s, mp);
    else if (a.which == "N1") fr = functional_n1(gt, mp);
    else throw UsageError("--which must be L, K, N or N1");
    out["which"] = a.which;
    out["value"] = fr.value;
    out["argmax_rho"] = fr.rho;
    out["argmax_y"] = std::vector<double>(fr.y.x.begin(), fr.y.x.begin() + fr.y.n);
  } else if (a.op == "identity") {
    const auto s = verify_convolution_identity(load_table(a.table, a.n), load_table(a.f_table, a.n), a.N, a.m, a.r,
                                               parse_ball_point(a.at, a.n), kb.sphere(g.config, a.n), a.radial);
    out["lhs"] = s.lhs;
    out["rhs"] = s.rhs;
    out["lhs_norm"] = s.lhs_norm;
    out["rhs_norm"] = s.rhs_norm;
    out["max_abs_difference"] = s.max_abs_difference;
  } else {
    throw UsageError("unknown ball op '" + a.op + "'");
  }
  emit(g, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic function spaces: verification suite and numerical tools"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--config", g.config_path, "TOML-style config file");
  auto* seed_opt = app.add_option("--seed", g.seed, "base random seed");
  app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--json-out", g.json_out, "also write the JSON output here");

  auto* verify = app.add_subcommand("verify", "run named checks, or the whole suite");
  verify->allow_extras();
  verify->footer("usage: hsl verify [ids...] [--key value ...]");

  Knobs norm_kb, op_kb, ball_kb;
  auto* norm = app.add_subcommand("norm", "norm of a test function");
  norm->fallthrough();
  std::string space, nparams, ntestfn;
  int nn = 1;
  norm->add_option("--space", space, "Ap|ApVec|Bpq|Fpq|DN|Hsb")->required();
  norm->add_option("--params", nparams, "key=value,...");
  norm->add_option("--testfn", ntestfn, "test function, e.g. poisson_shift:1.0")->required();
  norm->add_option("--n", nn, "dimension");
  norm_kb.add(norm);

  auto* op = app.add_subcommand("op", "apply an operator at points");
  op->fallthrough();
  std::string oname, oparams, oat, otestfn;
  int on = 1;
  op->add_option("--name", oname, "trace|reproduce|S|Scell|R|Rk|extend")->required();
  op->add_option("--params", oparams, "key=value,...");
  op->add_option("--at", oat, "x1,...,t[;x1,...,t]")->required();
  op->add_option("--testfn", otestfn, "test function")->required();
  op->add_option("--n", on, "dimension");
  op_kb.add(op);

  auto* carl = app.add_subcommand("carleson", "Carleson norms of a discrete measure");
  carl->fallthrough();
  std::string mfile, rtext = "2", ttext = "1";
  int cn = 1, cm = 1;
  bool star = false, global = false;
  carl->add_option("--measure", mfile, "measure file")->required();
  carl->add_option("--n", cn, "dimension");
  carl->add_option("--m", cm, "factors");
  carl->add_option("--r", rtext, "r_j (one value or m)");
  carl->add_option("--tau", ttext, "tau_j (one value or m)");
  carl->add_flag("--star", star, "star norm");
  carl->add_flag("--global", global, "star norm without the height filter");

  auto* ball = app.add_subcommand("ball", "coefficient-table operations on the ball");
  ball->fallthrough();
  BallArgs ba;
  ball->add_option("--op", ba.op, "expand|synth|convolve|lambda|functional|identity")->required();
  ball->add_option("--n", ba.n, "dimension (2 or 3)");
  ball->add_option("--testfn", ba.testfn, "ball test function (expand)");
  ball->add_option("--degree", ba.degree, "degree cap (expand)");
  ball->add_option("--r-probe", ba.r_probe, "probe radius (expand)");
  ball->add_option("--table", ba.table, "coefficient table file (g for identity)");
  ball->add_option("--with", ba.with, "second table (convolve)");
  ball->add_option("--f", ba.f_table, "f table (identity)");
  ball->add_option("--at", ba.at, "point x1,...,xn");
  ball->add_option("--t", ba.t, "order of Lambda_t");
  ball->add_option("--which", ba.which, "L|K|N|N1");
  ball->add_option("--s", ba.s, "L^s exponent (inf allowed)");
  ball->add_option("--m", ba.m, "m");
  ball->add_option("--N", ba.N, "N");
  ball->add_option("--alpha", ba.alpha, "alpha");
  ball->add_option("--beta", ba.beta, "beta");
  ball->add_option("--r", ba.r, "radius r (identity)");
  ball->add_option("--radial-points", ba.radial, "radial points (identity)");
  ball_kb.add(ball);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    g.seed_set = seed_opt->count() > 0;
    if (!g.config_path.empty()) g.config = Config::load(g.config_path);
    if (g.workers > 0) set_worker_count(g.workers);
    if (*verify) return run_verify(g, verify->remaining());
    if (*norm) return run_norm(g, norm_kb, space, nparams, ntestfn, nn);
    if (*op) return run_op(g, op_kb, oname, oparams, oat, otestfn, on);
    if (*carl) return run_carleson(g, mfile, cn, cm, rtext, ttext, star, global);
    if (*ball) return run_ball(g, ball_kb, ba);
  } catch (const ParseError& e) {
    std::cerr << "hsl: " << e.what() << " (line " << e.line() << ")\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "hsl: " << e.what() << "\n";
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "hsl: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "hsl: " << e.what() << "\n";
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << "hsl: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hsl: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
