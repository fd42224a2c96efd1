#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "ctk/cli.hpp"
#include "ctk/constants.hpp"
#include "ctk/montecarlo.hpp"
#include "ctk/multiscale.hpp"
#include "ctk/peierls.hpp"
#include "ctk/serialize.hpp"

namespace ctk::cli {

namespace {

struct Ctx {
  std::ostream& out;
  std::ostream& err;
  Manifest man;
};

void write_text(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << body;
}

void emit(Ctx& c, const json& data, const std::string& out_path) {
  json doc{{"manifest", manifest_json(c.man)}, {"data", data}};
  if (out_path.empty()) {
    c.out << doc.dump(2) << '\n';
  } else {
    write_text(out_path, doc.dump(2) + "\n");
    c.out << out_path << '\n';
  }
}

void model_options(CLI::App* s, ModelParams& p) {
  s->add_option("--d", p.d, "lattice dimension")->capture_default_str();
  s->add_option("--alpha", p.alpha, "coupling exponent, alpha > d")->capture_default_str();
  s->add_option("--J", p.J, "coupling amplitude")->capture_default_str();
  s->add_option("--delta", p.delta, "field exponent")->capture_default_str();
  s->add_option("--h-star", p.h_star, "field amplitude")->capture_default_str();
  s->add_option("--beta", p.beta, "inverse temperature")->capture_default_str();
}

FieldMode parse_field(const std::string& kind, double R) {
  if (kind == "zero") return FieldMode::zero();
  if (kind == "full") return FieldMode::full();
  if (kind == "truncated") return FieldMode::truncated(R);
  throw std::invalid_argument("field must be zero, full or truncated");
}

ContourParams contour_params(const ModelParams& p, double eps, double M) {
  auto cp = ContourParams::from_model(p.d, p.alpha, eps, M);
  cp.validate();
  return cp;
}

// The energy bound needs M above a threshold that does not depend on M; a
// nonpositive M selects twice the threshold.
double resolve_M(const ModelParams& p, double eps, double M) {
  if (M > 0) return M;
  return 2.0 * peierls_constants(p, contour_params(p, eps, 1.0), 1.0).M_threshold;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) v.push_back(std::stod(tok));
  return v;
}

McConfig mc_config_from(const json& cfg) {
  McConfig c;
  if (cfg.contains("model")) c.p = cfg.at("model").get<ModelParams>();
  const json mc = cfg.value("mc", json::object());
  c.L = mc.value("L", c.L);
  c.sweeps = mc.value("sweeps", c.sweeps);
  c.burn_in = mc.value("burn_in", c.burn_in);
  c.seed = mc.value("seed", c.seed);
  c.measure_every = mc.value("measure_every", c.measure_every);
  c.boundary = mc.value("boundary", c.boundary);
  c.keep_trace = mc.value("keep_trace", c.keep_trace);
  c.field = parse_field(mc.value("field", std::string("full")), mc.value("R", 0.0));
  c.validate();
  return c;
}

bool outside_regimes(const ModelParams& p) { return p.delta < std::min(p.alpha - p.d, 1.0); }

std::string regime_message(const ModelParams& p) {
  std::ostringstream s;
  s << "delta = " << p.delta << " < min(alpha-d, 1) = " << std::min(p.alpha - p.d, 1.0)
    << " at alpha = " << p.alpha << ": region marked Uniqueness? in the phase diagram";
  return s.str();
}

std::vector<std::string> replay_args(const std::vector<std::string>& argv) {
  std::vector<std::string> a;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    const auto& t = argv[i];
    if (t == "--out" || t == "--plot") {
      ++i;
      continue;
    }
    if (t.rfind("--out=", 0) == 0 || t.rfind("--plot=", 0) == 0) continue;
    a.push_back(t);
  }
  return a;
}

// Non-comment lines of a text artifact.
std::string data_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line, body;
  while (std::getline(in, line))
    if (line.empty() || line[0] != '#') body += line + "\n";
  return body;
}

int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contours, energies and sampling for the long-range Ising model with a decaying field", "ctk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Ctx c{out, err, {}};
  c.man.argv = args;
  c.man.started = utc_now();
  std::function<void()> action;

  ModelParams p;
  std::string out_path, plot_prefix, config_path, field_kind = "zero";
  double eps = 0.5, M = 0.0, R_trunc = 0.0;

  // geometry
  auto* geo = app.add_subcommand("geometry", "lattice counts, regions and covers");
  geo->require_subcommand(1);
  int g_d = 2;
  std::int64_t g_n = 1;
  auto* sph = geo->add_subcommand("sphere", "sphere and ball sizes");
  sph->add_option("--d", g_d)->capture_default_str();
  sph->add_option("--n", g_n)->capture_default_str();
  sph->callback([&] {
    action = [&] {
      c.man.command = "geometry sphere";
      c.man.params = {{"d", g_d}, {"n", g_n}};
      json data{{"sphere_count", sphere_count(g_d, g_n)}, {"ball_count", ball_count(g_d, g_n)}};
      if (g_n >= g_d && g_d >= 1) {
        data["lower"] = constants::c_d(g_d) * std::pow(static_cast<double>(g_n), g_d - 1);
        data["upper"] = constants::sphere_upper(g_d) * std::pow(static_cast<double>(g_n), g_d - 1);
      }
      emit(c, data, out_path);
    };
  });
  auto* reg = geo->add_subcommand("region", "size, diameter, boundary and covers of a region file");
  std::string region_path;
  int g_scale = -1, g_stride = 0;
  reg->add_option("--region", region_path, "JSON region {dim, points}")->required();
  reg->add_option("--scale", g_scale, "minimal cover at this dyadic scale");
  reg->add_option("--stride", g_stride, "total volume with this scale stride");
  reg->add_option("--out", out_path);
  reg->callback([&] {
    action = [&] {
      c.man.command = "geometry region";
      c.man.params = {{"region", region_path}, {"scale", g_scale}, {"stride", g_stride}};
      c.man.inputs = {region_path};
      json doc = load_config(region_path);
      const Region r = region_from_json(doc.contains("data") ? doc["data"] : doc);
      if (r.empty()) throw std::invalid_argument("region is empty");
      json data{{"size", r.size()},
                {"diameter", diameter(r)},
                {"inner_boundary", inner_boundary(r).size()},
                {"edge_boundary", edge_boundary_size(r)},
                {"components", connected_components(r).size()}};
      if (g_scale >= 0) {
        const auto cv = minimal_cover(r, g_scale);
        json cubes = json::array();
        for (const auto& q : cv.cubes) cubes.push_back({{"scale", q.scale}, {"index", q.index}});
        data["cover"] = {{"scale", g_scale}, {"size", cv.cubes.size()}, {"exact", cv.exact}, {"cubes", cubes}};
      }
      if (g_stride > 0) {
        const auto h = cover_hierarchy(r, g_stride);
        data["total_volume"] = {{"stride", g_stride}, {"value", h.total()}, {"exact", h.exact()}};
      }
      emit(c, data, out_path);
    };
  });

  // model
  auto* mod = app.add_subcommand("model", "lattice sums, surface energies, exact small volumes");
  mod->require_subcommand(1);
  auto* ls = mod->add_subcommand("lattice-sum", "sum of |y|^{-alpha} over nonzero y");
  std::int64_t partial_N = 0;
  model_options(ls, p);
  ls->add_option("--partial", partial_N, "also report the partial sum up to this shell");
  ls->callback([&] {
    action = [&] {
      c.man.command = "model lattice-sum";
      c.man.params = {{"model", p}, {"partial", partial_N}};
      const auto s = lattice_sum_radial(p);
      json data{{"c_alpha", s.value}, {"error_bound", s.error_bound}, {"sphere_polynomial", sphere_polynomial(p.d)}};
      if (partial_N > 0) {
        const auto q = lattice_sum_partial(p.d, p.alpha, partial_N);
        data["partial"] = {{"N", partial_N}, {"value", q.value}, {"tail_bound", q.error_bound}};
      }
      emit(c, data, out_path);
    };
  });
  auto* fbr = mod->add_subcommand("fbr", "surface energy of l1 balls and its log-log slope");
  std::int64_t rmin = 8, rmax = 64;
  model_options(fbr, p);
  fbr->add_option("--rmin", rmin)->capture_default_str();
  fbr->add_option("--rmax", rmax)->capture_default_str();
  fbr->add_option("--out", out_path);
  fbr->add_option("--plot", plot_prefix, "write PREFIX.dat and PREFIX.gp");
  fbr->callback([&] {
    action = [&] {
      c.man.command = "model fbr";
      c.man.params = {{"model", p}, {"rmin", rmin}, {"rmax", rmax}};
      const auto b = ball_scaling(p, rmin, rmax);
      json data{{"R", b.R},
                {"F", b.F},
                {"slope", b.loglog.slope},
                {"intercept", b.loglog.intercept},
                {"rss_power", b.rss_power},
                {"rss_power_log", b.rss_power_log}};
      emit(c, data, out_path);
      if (!plot_prefix.empty()) {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < b.R.size(); ++i)
          rows.push_back({std::log(static_cast<double>(b.R[i])), std::log(b.F[i])});
        emit_plot_data(PlotKind::FbrScaling, rows, plot_prefix, manifest_json(c.man));
      }
    };
  });
  auto* lz = mod->add_subcommand("logz", "exact partition function on a small square window");
  int window_side = 3, bsign = -1;
  model_options(lz, p);
  lz->add_option("--window", window_side, "side length")->capture_default_str();
  lz->add_option("--boundary", bsign)->capture_default_str()->check(CLI::IsMember({-1, 1}));
  lz->add_option("--field", field_kind, "zero, full or truncated")->capture_default_str();
  lz->add_option("--R", R_trunc, "truncation radius");
  lz->add_option("--out", out_path);
  lz->callback([&] {
    action = [&] {
      c.man.command = "model logz";
      const FieldMode fm = parse_field(field_kind, R_trunc);
      c.man.params = {{"model", p}, {"window", window_side}, {"boundary", bsign}, {"field", fm}};
      const Region w = square_window(p.d, window_side);
      const auto ex = exact_averages(w, p, bsign, fm);
      json data{{"log_z", ex.log_z}, {"mean_energy", ex.mean_energy}, {"mean_spin", ex.mean_spin}};
      const auto o = w.index_of(Point(p.d));
      if (o >= 0) data["mean_spin_origin"] = ex.mean_spin[static_cast<std::size_t>(o)];
      emit(c, data, out_path);
    };
  });

  // contours
  auto* con = app.add_subcommand("contours", "boundaries, partitions and contours of configurations");
  con->require_subcommand(1);
  auto* rnd = con->add_subcommand("random", "random configuration on a square window");
  double density = 0.2;
  std::uint64_t seed = 1;
  rnd->add_option("--d", p.d)->capture_default_str();
  rnd->add_option("--window", window_side)->capture_default_str();
  rnd->add_option("--density", density)->capture_default_str();
  rnd->add_option("--seed", seed)->capture_default_str();
  rnd->add_option("--out", out_path);
  rnd->callback([&] {
    action = [&] {
      c.man.command = "contours random";
      c.man.params = {{"d", p.d}, {"window", window_side}, {"density", density}, {"seed", seed}};
      emit(c, json(random_configuration(square_window(p.d, window_side), density, seed)), out_path);
    };
  });
  auto* ext = con->add_subcommand("extract", "partition the boundary and build contours");
  ext->add_option("--config", config_path, "configuration JSON {window, boundary, spins}")->required();
  ext->add_option("--alpha", p.alpha)->capture_default_str();
  ext->add_option("--epsilon", eps)->capture_default_str();
  ext->add_option("--M", M, "separation constant")->capture_default_str();
  ext->add_option("--out", out_path);
  ext->callback([&] {
    action = [&] {
      c.man.command = "contours extract";
      c.man.inputs = {config_path};
      json doc = load_config(config_path);
      const SpinConfiguration s = configuration_from_json(doc.contains("data") ? doc["data"] : doc);
      p.d = s.dim();
      const double Mv = M > 0 ? M : 1.0;
      const auto cp = contour_params(p, eps, Mv);
      c.man.params = {{"config", config_path}, {"d", p.d}, {"alpha", p.alpha}, {"contour", cp}};
      const Region bd = boundary(s);
      const auto P = build_partition(bd, cp);
      const auto rep = verify_partition(P, bd, cp);
      const auto G = label_and_build_contours(s, P);
      json viol = json::array();
      for (const auto& v : rep.violations)
        viol.push_back({{"kind", to_string(v.kind)}, {"i", v.i}, {"j", v.j}, {"detail", v.detail}});
      const auto erased = erase(s, G);
      json data{{"boundary", bd},
                {"partition", P},
                {"partition_ok", rep.ok},
                {"violations", viol},
                {"contours", G},
                {"external", external_contours(G)},
                {"erased_all_minus", std::all_of(erased.spins().begin(), erased.spins().end(),
                                                 [](std::int8_t v) { return v == -1; })}};
      emit(c, data, out_path);
    };
  });

  // entropy
  auto* ent = app.add_subcommand("entropy", "total volumes, counting bounds and small-contour sweeps");
  ent->require_subcommand(1);
  auto* ec_cmd = ent->add_subcommand("constants", "c, b, n0, kappa, c1");
  ec_cmd->add_option("--d", p.d)->capture_default_str();
  ec_cmd->add_option("--alpha", p.alpha)->capture_default_str();
  ec_cmd->add_option("--epsilon", eps)->capture_default_str();
  ec_cmd->add_option("--M", M, "separation constant (default: twice the energy-bound threshold)");
  ec_cmd->add_option("--out", out_path);
  ec_cmd->callback([&] {
    action = [&] {
      c.man.command = "entropy constants";
      const double Mv = resolve_M(p, eps, M);
      const auto cp = contour_params(p, eps, Mv);
      c.man.params = {{"d", p.d}, {"alpha", p.alpha}, {"contour", cp}};
      emit(c, json(entropy_constants(p.d, cp)), out_path);
    };
  });
  auto* en = ent->add_subcommand("enumerate", "contours of size m around the origin in a small box");
  int m_size = 1;
  Coord half_width = 3;
  int max_m = 6;
  en->add_option("--m", m_size)->required();
  en->add_option("--d", p.d)->capture_default_str();
  en->add_option("--alpha", p.alpha)->capture_default_str();
  en->add_option("--epsilon", eps)->capture_default_str();
  en->add_option("--M", M, "separation constant")->capture_default_str();
  en->add_option("--half-width", half_width)->capture_default_str();
  en->add_option("--max-m", max_m, "enumeration cap")->capture_default_str();
  en->add_option("--out", out_path);
  en->callback([&] {
    action = [&] {
      c.man.command = "entropy enumerate";
      const double Mv = M > 0 ? M : 2.0;
      const auto cp = contour_params(p, eps, Mv);
      c.man.params = {{"m", m_size}, {"d", p.d}, {"alpha", p.alpha}, {"contour", cp},
                      {"half_width", half_width}, {"max_m", max_m}};
      C0Options opt;
      opt.box_half_width = half_width;
      opt.max_m = max_m;
      const auto res = enumerate_contours_C0(m_size, p.d, cp, opt);
      const auto ec = entropy_constants(p.d, cp);
      emit(c,
           json{{"count", res.supports.size()},
                {"configurations", res.configurations},
                {"log_bound", ec.c1 * m_size},
                {"c1", ec.c1},
                {"supports", res.supports}},
           out_path);
    };
  });
  auto* fv = ent->add_subcommand("fv", "sets around the origin with total volume V");
  int V = 1, stride = 0;
  std::uint64_t max_cand = FVOptions{}.max_candidates;
  fv->add_option("--V", V)->required();
  fv->add_option("--d", p.d)->capture_default_str();
  fv->add_option("--alpha", p.alpha)->capture_default_str();
  fv->add_option("--epsilon", eps)->capture_default_str();
  fv->add_option("--stride", stride, "scale stride r (default from alpha, epsilon)");
  fv->add_option("--max-candidates", max_cand)->capture_default_str();
  fv->add_option("--out", out_path);
  fv->callback([&] {
    action = [&] {
      c.man.command = "entropy fv";
      const int r = stride > 0 ? stride : contour_params(p, eps, 1.0).r;
      c.man.params = {{"V", V}, {"d", p.d}, {"stride", r}, {"max_candidates", max_cand}};
      FVOptions o;
      o.max_candidates = max_cand;
      const auto n = count_FV(V, p.d, r, o);
      ContourParams cp = contour_params(p, eps, 1.0);
      cp.r = r;
      json data{{"count", n}, {"stride", r}};
      try {
        const auto ec = entropy_constants(p.d, cp);
        data["b"] = ec.b;
        data["log_bound"] = ec.b * V;
      } catch (const std::invalid_argument&) {
      }
      emit(c, data, out_path);
    };
  });

  // peierls
  auto* pei = app.add_subcommand("peierls", "energy bound constants, truncation radius, exact probabilities");
  pei->require_subcommand(1);
  auto* pconst = pei->add_subcommand("constants", "k_alpha, M thresholds, c2..c5, K_alpha");
  model_options(pconst, p);
  pconst->add_option("--epsilon", eps)->capture_default_str();
  pconst->add_option("--M", M, "separation constant (default: twice the threshold)");
  pconst->add_option("--out", out_path);
  pconst->callback([&] {
    action = [&] {
      c.man.command = "peierls constants";
      const double Mv = resolve_M(p, eps, M);
      const auto cp = contour_params(p, eps, Mv);
      c.man.params = {{"model", p}, {"contour", cp}};
      emit(c, json(peierls_constants(p, cp, Mv)), out_path);
    };
  });
  auto* betac = pei->add_subcommand("betac", "constant chain down to the Peierls beta_c");
  model_options(betac, p);
  betac->add_option("--epsilon", eps)->capture_default_str();
  betac->add_option("--M", M, "separation constant (default: twice the threshold)");
  betac->add_option("--out", out_path);
  betac->callback([&] {
    action = [&] {
      c.man.command = "peierls betac";
      const double Mv = resolve_M(p, eps, M);
      const auto cp = contour_params(p, eps, Mv);
      c.man.params = {{"model", p}, {"contour", cp}};
      const auto pc = peierls_constants(p, cp, Mv);
      const auto ec = entropy_constants(p.d, cp);
      json data{{"a", cp.a}, {"r", cp.r}, {"M", Mv}, {"k_alpha_1", pc.k_alpha_1}, {"M1", pc.M1},
                {"M2", pc.M2}, {"M_threshold", pc.M_threshold}, {"c2", pc.c2}, {"c3", pc.c3},
                {"c4", pc.c4}, {"c", ec.c}, {"b", ec.b}, {"kappa", ec.kappa}, {"c1", ec.c1}};
      if (pc.c2 > 0) {
        const double bc = peierls_beta_c(pc, ec.c1);
        data["beta_c"] = bc;
      } else {
        data["beta_c"] = nullptr;
        c.err << "warning: c2 <= 0 at this M, no Peierls beta_c\n";
      }
      emit(c, data, out_path);
    };
  });
  auto* trunc = pei->add_subcommand("truncation", "field truncation radius R");
  model_options(trunc, p);
  trunc->add_option("--epsilon", eps)->capture_default_str();
  trunc->add_option("--M", M, "separation constant (default: twice the threshold)");
  trunc->add_option("--out", out_path);
  trunc->callback([&] {
    action = [&] {
      c.man.command = "peierls truncation";
      const double Mv = resolve_M(p, eps, M);
      const auto cp = contour_params(p, eps, Mv);
      c.man.params = {{"model", p}, {"contour", cp}};
      const auto t = truncation_radius(p, peierls_constants(p, cp, Mv));
      if (t.critical && !t.h_star_ok) c.err << "warning: h_star exceeds the critical-line bound\n";
      emit(c, json(t), out_path);
    };
  });
  auto* nu = pei->add_subcommand("nu-exact", "exact probability of a plus origin given a minus collar");
  std::string betas_list;
  model_options(nu, p);
  nu->add_option("--window", window_side, "side length")->capture_default_str();
  nu->add_option("--betas", betas_list, "comma separated beta values (overrides --beta)");
  nu->add_option("--field", field_kind, "zero, full or truncated")->capture_default_str();
  nu->add_option("--R", R_trunc, "truncation radius");
  nu->add_option("--out", out_path);
  nu->add_option("--plot", plot_prefix, "write PREFIX.dat and PREFIX.gp");
  nu->callback([&] {
    action = [&] {
      c.man.command = "peierls nu-exact";
      const FieldMode fm = parse_field(field_kind, R_trunc);
      std::vector<double> betas = betas_list.empty() ? std::vector<double>{p.beta} : parse_list(betas_list);
      c.man.params = {{"model", p}, {"window", window_side}, {"betas", betas}, {"field", fm}};
      const Region w = square_window(p.d, window_side);
      json rows = json::array();
      std::vector<std::vector<double>> plot_rows;
      std::string warning;
      std::size_t n_free = 0;
      for (double b : betas) {
        ModelParams q = p;
        q.beta = b;
        const auto r = nu_exact(w, q, fm);
        rows.push_back({{"beta", b}, {"probability", r.probability}});
        plot_rows.push_back({b, r.probability});
        warning = r.warning;
        n_free = r.free.size();
      }
      if (!warning.empty()) c.err << "warning: " << warning << '\n';
      emit(c, json{{"free_sites", n_free}, {"values", rows}}, out_path);
      if (!plot_prefix.empty()) emit_plot_data(PlotKind::NuVsBeta, plot_rows, plot_prefix, manifest_json(c.man));
    };
  });
  auto* drop = pei->add_subcommand("droplet", "truncated droplet sum (diagnostic)");
  int R_max = 50;
  model_options(drop, p);
  drop->add_option("--rmax", R_max)->capture_default_str();
  drop->add_option("--out", out_path);
  drop->callback([&] {
    action = [&] {
      c.man.command = "peierls droplet";
      c.man.params = {{"model", p}, {"rmax", R_max}};
      const auto dr = droplet_heuristic(p, p.beta, R_max);
      if (!dr.warning.empty()) c.err << "warning: " << dr.warning << '\n';
      emit(c, json{{"sum", dr.sum}, {"terms", dr.terms}, {"increasing_tail", dr.increasing_tail}}, out_path);
    };
  });

  // mc
  auto* mc = app.add_subcommand("mc", "Metropolis runs and parameter scans");
  mc->require_subcommand(1);
  auto* mrun = mc->add_subcommand("run", "one chain from a TOML/JSON config");
  mrun->add_option("--config", config_path)->required();
  mrun->add_option("--out", out_path);
  mrun->callback([&] {
    action = [&] {
      c.man.command = "mc run";
      c.man.inputs = {config_path};
      const McConfig cfg = mc_config_from(load_config(config_path));
      c.man.params = json(cfg);
      const auto r = run(cfg);
      emit(c, json(r), out_path);
    };
  });
  auto* msc = mc->add_subcommand("scan", "grid over (beta, delta), CSV output");
  bool strict = false;
  msc->add_option("--config", config_path)->required();
  msc->add_option("--out", out_path, "CSV file (stdout if omitted)");
  msc->add_option("--plot", plot_prefix, "write PREFIX.dat and PREFIX.gp");
  msc->add_flag("--strict", strict, "refuse grid points with delta < min(alpha-d, 1)");
  msc->callback([&] {
    action = [&] {
      c.man.command = "mc scan";
      c.man.inputs = {config_path};
      const json cfg = load_config(config_path);
      const McConfig tmpl = mc_config_from(cfg);
      const json sc = cfg.value("scan", json::object());
      const auto betas = sc.value("betas", std::vector<double>{tmpl.p.beta});
      const auto deltas = sc.value("deltas", std::vector<double>{tmpl.p.delta});
      const std::uint64_t master = sc.value("master_seed", std::uint64_t{1});
      const unsigned threads = sc.value("threads", 0u);
      auto grid = beta_delta_grid(tmpl, betas, deltas);
      for (const auto& g : grid)
        if (outside_regimes(g.p)) {
          if (strict) throw OutsideRegimes(regime_message(g.p));
          c.err << "warning: " << regime_message(g.p) << '\n';
        }
      c.man.params = {{"template", tmpl}, {"betas", betas}, {"deltas", deltas}, {"master_seed", master}};
      const auto res = scan(grid, master, threads);
      std::ostringstream csv;
      csv << "# manifest " << manifest_json(c.man).dump() << '\n';
      write_scan_csv(csv, res);
      if (out_path.empty()) {
        c.out << csv.str();
      } else {
        write_text(out_path, csv.str());
        c.out << out_path << '\n';
      }
      if (!plot_prefix.empty()) {
        std::vector<std::vector<double>> rows;
        for (const auto& sp : res)
          rows.push_back({sp.cfg.p.alpha - sp.cfg.p.d, sp.cfg.p.delta, sp.cfg.p.beta, sp.result.m_abs});
        emit_plot_data(PlotKind::PhaseDiagram, rows, plot_prefix, manifest_json(c.man));
      }
    };
  });

  // plot
  auto* plt = app.add_subcommand("plot", "plot data and gnuplot scripts from earlier outputs");
  plt->require_subcommand(1);
  auto* pd = plt->add_subcommand("phase-diagram", "region plot from an mc scan CSV");
  pd->add_option("--csv", config_path)->required();
  pd->add_option("--out", plot_prefix, "output prefix")->required();
  pd->callback([&] {
    action = [&] {
      c.man.command = "plot phase-diagram";
      c.man.inputs = {config_path};
      c.man.params = {{"csv", config_path}};
      std::istringstream in(read_file(config_path));
      std::string line;
      std::vector<std::string> header;
      std::vector<std::vector<double>> rows;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) f.push_back(tok);
        if (header.empty()) {
          header = f;
          continue;
        }
        auto col = [&](const std::string& name) {
          for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return std::stod(f.at(i));
          throw ConfigError("CSV lacks column '" + name + "'");
        };
        rows.push_back({col("alpha") - col("d"), col("delta"), col("beta"), col("m_abs")});
      }
      const auto files = emit_plot_data(PlotKind::PhaseDiagram, rows, plot_prefix, manifest_json(c.man));
      for (const auto& f : files) c.out << f << '\n';
    };
  });

  // replay
  auto* rep = app.add_subcommand("replay", "re-run the command recorded in an output and compare data");
  rep->add_option("--file", config_path)->required();
  rep->callback([&] {
    action = [&] {
      const std::string text = read_file(config_path);
      json man;
      std::string data;
      if (!text.empty() && text[0] == '#') {
        const auto nl = text.find('\n');
        const std::string first = text.substr(0, nl);
        const std::string tag = "# manifest ";
        if (first.rfind(tag, 0) != 0) throw ConfigError("no manifest line in '" + config_path + "'");
        man = json::parse(first.substr(tag.size()));
        data = data_lines(text);
      } else {
        const json doc = json::parse(text);
        man = doc.at("manifest");
        data = doc.at("data").dump();
      }
      const auto args2 = replay_args(man.at("argv").get<std::vector<std::string>>());
      std::ostringstream o2, e2;
      const int code = dispatch(args2, o2, e2);
      if (code != 0) throw std::runtime_error("replayed command failed: " + e2.str());
      std::string again;
      const std::string t2 = o2.str();
      if (!t2.empty() && t2[0] == '#')
        again = data_lines(t2);
      else
        again = json::parse(t2).at("data").dump();
      c.out << json{{"command", man.at("command")}, {"identical", again == data}}.dump(2) << '\n';
      if (again != data) throw std::runtime_error("replayed data differ");
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* sub = &app;
    while (!sub->get_subcommands().empty()) sub = sub->get_subcommands().front();
    out << sub->help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
  if (!action) {
    err << "usage error: no command given\n";
    return 2;
  }
  try {
    action();
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    err << "usage error: malformed input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return run_app(args, out, err);
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_app(args, out, err);
}

}  // namespace ctk::cli
