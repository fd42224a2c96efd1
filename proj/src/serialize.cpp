#include "ctk/serialize.hpp"

namespace ctk {

void to_json(json& j, const Point& p) {
  j = json::array();
  for (int a = 0; a < p.dim(); ++a) j.push_back(p[a]);
}

void from_json(const json& j, Point& p) {
  std::vector<Coord> c = j.get<std::vector<Coord>>();
  p = Point(std::span<const Coord>(c));
}

void to_json(json& j, const Region& r) {
  j = json{{"dim", r.dim()}, {"points", json::array()}};
  for (const auto& p : r) j["points"].push_back(p);
}

Region region_from_json(const json& j) {
  const int d = j.at("dim").get<int>();
  std::vector<Point> pts;
  for (const auto& e : j.at("points")) {
    Point p = e.get<Point>();
    if (p.dim() != d) throw DimensionMismatch("region point has wrong dimension");
    pts.push_back(p);
  }
  return Region(d, pts);
}

void to_json(json& j, const ModelParams& p) {
  j = json{{"d", p.d},         {"alpha", p.alpha}, {"J", p.J},
           {"delta", p.delta}, {"h_star", p.h_star}, {"beta", p.beta},
           {"tail_tol", p.tail_tol}};
}

void from_json(const json& j, ModelParams& p) {
  p.d = j.value("d", p.d);
  p.alpha = j.value("alpha", p.alpha);
  p.J = j.value("J", p.J);
  p.delta = j.value("delta", p.delta);
  p.h_star = j.value("h_star", p.h_star);
  p.beta = j.value("beta", p.beta);
  p.tail_tol = j.value("tail_tol", p.tail_tol);
}

void to_json(json& j, const ContourParams& cp) {
  j = json{{"M", cp.M}, {"a", cp.a}, {"r", cp.r}, {"epsilon", cp.epsilon}};
}

void from_json(const json& j, ContourParams& cp) {
  cp.M = j.value("M", cp.M);
  cp.a = j.value("a", cp.a);
  cp.r = j.value("r", cp.r);
  cp.epsilon = j.value("epsilon", cp.epsilon);
}

void to_json(json& j, const FieldMode& f) {
  switch (f.kind) {
    case FieldMode::Zero: j = json{{"kind", "zero"}}; break;
    case FieldMode::Full: j = json{{"kind", "full"}}; break;
    case FieldMode::Truncated: j = json{{"kind", "truncated"}, {"R", f.R}}; break;
  }
}

void from_json(const json& j, FieldMode& f) {
  const std::string k = j.is_string() ? j.get<std::string>() : j.at("kind").get<std::string>();
  if (k == "zero")
    f = FieldMode::zero();
  else if (k == "full")
    f = FieldMode::full();
  else if (k == "truncated")
    f = FieldMode::truncated(j.at("R").get<double>());
  else
    throw std::invalid_argument("unknown field mode '" + k + "'");
}

void to_json(json& j, const Contour& g) {
  j = json{{"support", g.support},
           {"label_exterior", g.label_exterior},
           {"interior_plus", g.interior_plus},
           {"interior_minus", g.interior_minus},
           {"interior_labels", g.interior_labels},
           {"size", g.size()},
           {"volume_size", g.volume.size()},
           {"witness_family_size", g.witness_family.size()}};
}

void to_json(json& j, const PartitionOfBoundary& P) {
  j = json::array();
  for (const auto& part : P.parts)
    j.push_back({{"support", part.support}, {"scale", part.scale}, {"witness_family", part.witness_family}});
}

void to_json(json& j, const PeierlsConstants& pc) {
  j = json{{"d", pc.d},
           {"alpha", pc.alpha},
           {"J", pc.J},
           {"a", pc.a},
           {"r", pc.r},
           {"M", pc.M},
           {"c_alpha", pc.c_alpha},
           {"k_d", pc.k_d},
           {"k_alpha_1", pc.k_alpha_1},
           {"k_alpha_1_terms", {pc.k1_terms[0], pc.k1_terms[1]}},
           {"M1", pc.M1},
           {"M2", pc.M2},
           {"M_threshold", pc.M_threshold},
           {"c2", pc.c2},
           {"c3", pc.c3},
           {"c4", pc.c4},
           {"K_alpha", pc.K_alpha},
           {"c5", pc.c5},
           {"delta_used", pc.delta_used},
           {"above_threshold", pc.above_threshold},
           {"positive", pc.positive}};
}

void to_json(json& j, const EntropyConstants& ec) {
  j = json{{"a", ec.a},
           {"r", ec.r},
           {"M", ec.M},
           {"c", ec.c},
           {"b", ec.b},
           {"n0", ec.n0},
           {"kappa", ec.kappa},
           {"kappa_terms", {ec.kappa_terms[0], ec.kappa_terms[1], ec.kappa_terms[2]}},
           {"c1", ec.c1}};
}

void to_json(json& j, const Truncation& t) {
  j = json{{"regime", t.regime == Truncation::Short ? "alpha<d+1" : "alpha>=d+1"},
           {"critical", t.critical},
           {"delta_used", t.delta_used},
           {"R0", t.R0},
           {"R1", t.R1},
           {"R2", t.R2},
           {"R", t.R},
           {"c_prime", t.c_prime},
           {"b_alpha", t.b_alpha}};
  if (t.critical) {
    j["h_star_max"] = t.h_star_max;
    j["h_star_ok"] = t.h_star_ok;
  }
}

void to_json(json& j, const McConfig& c) {
  j = json{{"L", c.L},
           {"model", c.p},
           {"boundary", c.boundary},
           {"field", c.field},
           {"sweeps", c.sweeps},
           {"burn_in", c.burn_in},
           {"seed", c.seed},
           {"measure_every", c.measure_every},
           {"keep_trace", c.keep_trace}};
}

void from_json(const json& j, McConfig& c) {
  c.L = j.value("L", c.L);
  if (j.contains("model")) c.p = j.at("model").get<ModelParams>();
  c.boundary = j.value("boundary", c.boundary);
  if (j.contains("field")) c.field = j.at("field").get<FieldMode>();
  c.sweeps = j.value("sweeps", c.sweeps);
  c.burn_in = j.value("burn_in", c.burn_in);
  c.seed = j.value("seed", c.seed);
  c.measure_every = j.value("measure_every", c.measure_every);
  c.keep_trace = j.value("keep_trace", c.keep_trace);
}

void to_json(json& j, const McResult& r) {
  j = json{{"m_mean", r.m_mean},   {"m_abs", r.m_abs},   {"chi", r.chi},
           {"E_mean", r.E_mean},   {"se_m", r.se_m},     {"s0_mean", r.s0_mean},
           {"se_s0", r.se_s0},     {"acceptance", r.acceptance}, {"measurements", r.measurements}};
  if (!r.trace.empty()) j["trace"] = r.trace;
}

void to_json(json& j, const SpinConfiguration& s) {
  std::vector<int> sp(s.spins().begin(), s.spins().end());
  j = json{{"window", s.window()}, {"boundary", s.boundary()}, {"spins", sp}};
}

SpinConfiguration configuration_from_json(const json& j) {
  Region w = region_from_json(j.at("window"));
  const int b = j.value("boundary", -1);
  std::vector<std::int8_t> sp;
  for (const auto& v : j.at("spins")) {
    const int x = v.get<int>();
    if (x != 1 && x != -1) throw std::invalid_argument("spins must be +1 or -1");
    sp.push_back(static_cast<std::int8_t>(x));
  }
  return SpinConfiguration(std::move(w), b, std::move(sp));
}

}  // namespace ctk
