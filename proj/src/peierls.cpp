#include "ctk/peierls.hpp"

#include <algorithm>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <limits>

#include "ctk/constants.hpp"

namespace ctk {

namespace {

double delta_for_bound(const ModelParams& p) {
  if (p.delta < p.d) return p.delta;
  return (std::min(p.alpha - p.d, 1.0) + p.d) / 2.0;
}

}  // namespace

PeierlsConstants peierls_constants(const ModelParams& p, const ContourParams& cp, double M) {
  p.validate();
  cp.validate();
  if (p.d < 2) throw std::invalid_argument("energy bound constants need d >= 2");
  if (!(M > 0)) throw std::invalid_argument("M must be positive");
  const int d = p.d;
  const double al = p.alpha, J = p.J;
  PeierlsConstants pc;
  pc.d = d;
  pc.alpha = al;
  pc.J = J;
  pc.a = cp.a;
  pc.r = cp.r;
  pc.M = M;
  pc.c_alpha = lattice_sum_radial(d, al).value;
  pc.k_d = constants::k_d(d);
  const double fam = std::ldexp(1.0, cp.r) - 1.0;
  if (!(cp.a - d > 1)) throw std::invalid_argument("energy bound constants need a - d > 1");
  pc.k1_terms[0] = J * constants::sphere_upper(d) * fam / ((al - d) * std::pow(pc.k_d, cp.a * (al - d)));
  pc.k1_terms[1] = std::pow(fam, d + 1) * boost::math::zeta(cp.a - d) / std::pow(pc.k_d, d);
  pc.k_alpha_1 = std::max(pc.k1_terms[0], pc.k1_terms[1]);

  const double k1 = pc.k_alpha_1;
  const double base = (2.0 * d + 1.0) * std::pow(2.0, al);
  const double iso = std::pow(2.0 * d, static_cast<double>(d) / (d - 1));
  const double m = std::min(al - d, 1.0);
  pc.c2 = J * pc.c_alpha / base - 6.0 * iso * k1 / std::pow(M, al - d);
  pc.c3 = 2.0 * (1.0 / ((2.0 * d + 1.0) * std::pow(2.0, al - 1.0)) - 4.0 * k1 / M);
  pc.c4 = 1.0 / base - 2.0 * k1 / std::pow(M, m);
  pc.M1 = std::pow(12.0 * iso * k1 * base / (J * pc.c_alpha), 1.0 / (al - d));
  pc.M2 = std::pow(4.0 * k1 * base, 1.0 / m);
  pc.M_threshold = std::max({std::pow(fam, d + 1) / std::pow(pc.k_d, d), pc.M1, pc.M2});
  pc.above_threshold = M > pc.M_threshold;
  pc.positive = pc.c2 > 0 && pc.c3 > 0 && pc.c4 > 0;

  pc.K_alpha = constants::K_alpha(d, al, J);
  pc.delta_used = delta_for_bound(p);
  pc.c5 = constants::c5(d, pc.delta_used, p.h_star);
  return pc;
}

double energy_cost(const SpinConfiguration& s, const Contour& g, const ModelParams& p, const ContourParams& cp,
                   FieldMode mode, const PartitionOptions& opt) {
  p.validate();
  const Region& w = s.window();
  // Already erased: the support carries the minus spins tau leaves behind
  // and none of it is incorrect any more.
  {
    const Region bd = boundary(s);
    bool erased = !intersects(bd, g.support);
    for (const auto& x : g.support)
      if (erased && s.spin(x) != -1) erased = false;
    if (erased) return 0.0;
  }
  const SpinConfiguration t = erase(s, g);
  std::vector<std::size_t> flipped;
  std::vector<char> is_flipped(w.size(), 0);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (s.spins()[i] != t.spins()[i]) {
      flipped.push_back(i);
      is_flipped[i] = 1;
    }
  if (flipped.empty()) return 0.0;
  const auto G = extract_contours(s, cp, opt);
  const bool found = std::any_of(G.begin(), G.end(), [&](const Contour& h) { return h.support == g.support; });
  if (!found) throw NotAContour("support is not a contour of the configuration");

  // Flipping S changes only the S x (W \ S), exterior and field terms.
  const auto ext = exterior_couplings(w, p);
  CouplingTable tab(p.alpha, p.J, diameter(w));
  long double dH = 0;
  for (auto i : flipped) {
    long double loc = s.boundary() * ext[i] + mode.at(w[i], p);
    for (std::size_t j = 0; j < w.size(); ++j)
      if (!is_flipped[j]) loc += tab(l1_distance(w[i], w[j])) * s.spins()[j];
    dH += -2.0L * s.spins()[i] * loc;
  }
  return static_cast<double>(dH);
}

double energy_lower_bound(const Contour& g, const PeierlsConstants& pc, const ModelParams& p) {
  double fi = g.interior_plus.empty() ? 0.0 : surface_energy(g.interior_plus, p);
  double fs = surface_energy(g.support, p);
  return pc.c2 * static_cast<double>(g.size()) + pc.c3 * fi + pc.c4 * fs;
}

bool triangle_bound_holds(const Point& x, const Point& y, const ModelParams& p) {
  if (x == y) throw std::invalid_argument("triangle bound needs distinct points");
  long double s = coupling(x, y, p);
  for (const auto& n : neighbors(x)) s += coupling(n, y, p);
  const long double rhs = s / ((2.0L * p.d + 1.0L) * std::pow(2.0L, static_cast<long double>(p.alpha)));
  return static_cast<long double>(coupling(x, y, p)) >= rhs;
}

Truncation truncation_radius(const ModelParams& p, const PeierlsConstants& pc) {
  p.validate();
  const int d = p.d;
  const double lower = std::min(p.alpha - d, 1.0);
  if (p.delta < lower)
    throw OutsideRegimes("delta = " + std::to_string(p.delta) + " < min(alpha-d, 1) = " + std::to_string(lower) +
                         ": parameters lie in the region marked Uniqueness? of the phase diagram, no bound applies");
  if (!(pc.c2 > 0) || !(pc.c3 > 0)) throw std::invalid_argument("truncation radius needs c2 > 0 and c3 > 0");
  Truncation t;
  t.regime = p.alpha < d + 1 ? Truncation::Short : Truncation::Long;
  t.delta_used = pc.delta_used;
  const double delta = t.delta_used;
  const double h = p.h_star;
  if (h == 0) return t;
  t.R0 = std::pow(4.0 * h / pc.c2, 1.0 / delta);
  const double c3K = pc.c3 * pc.K_alpha;
  if (t.regime == Truncation::Short) {
    if (delta == p.alpha - d) {
      // Equal exponents: need c3 K >= 2 c5, and c5 is linear in h*.
      t.critical = true;
      t.h_star_max = h * c3K / (2.0 * pc.c5);
      t.h_star_ok = h <= t.h_star_max;
    } else {
      t.c_prime = std::pow(2.0 * pc.c5 / c3K, d / (delta - (p.alpha - d)));
      t.R1 = std::pow(t.c_prime / c3K, 1.0 / delta);
    }
  } else {
    if (delta == 1.0) {
      // |dI| >= 2d |I|^{1-1/d}: need d c3 K >= c5.
      t.critical = true;
      t.h_star_max = h * d * c3K / pc.c5;
      t.h_star_ok = h <= t.h_star_max;
    } else {
      t.b_alpha = std::pow(pc.c5 / (d * c3K), d / (delta - 1.0));
      t.R2 = std::pow(h * t.b_alpha / (d * c3K), 1.0 / delta);
    }
  }
  t.R = std::max({t.R0, t.R1, t.R2});
  return t;
}

double peierls_sum(double beta, const PeierlsConstants& pc, double c1) {
  if (!(pc.c2 > 0)) throw std::invalid_argument("Peierls sum needs c2 > 0");
  const double x = std::exp(c1 + std::log(2.0) - beta * pc.c2 / 2.0);
  if (x >= 1.0) return std::numeric_limits<double>::infinity();
  return x / (1.0 - x);
}

double peierls_beta_c(const PeierlsConstants& pc, double c1) {
  if (!(pc.c2 > 0)) throw std::invalid_argument("Peierls beta_c needs c2 > 0");
  return 2.0 / pc.c2 * (c1 + std::log(2.0) + std::log(3.0));
}

Droplet droplet_heuristic(const ModelParams& p, double beta, int R_max) {
  p.validate();
  if (R_max < 1) throw std::invalid_argument("R_max must be >= 1");
  Droplet out;
  const Point o(p.d);
  const double c = 2.0 * p.d * p.J;
  long double sum = 0;
  double log_prev = 0, log_last = 0;  // terms can overflow, compare logs
  for (int R = 1; R <= R_max; ++R) {
    const Region ball = l1_ball(o, R);
    const double e = c * std::pow(static_cast<double>(R), p.d - 1) + surface_energy(ball, p) - field_sum(ball, p);
    log_prev = log_last;
    log_last = p.d * std::log(static_cast<double>(R)) - beta * e;
    const double term = std::exp(log_last);
    out.terms.push_back(term);
    sum += term;
  }
  out.sum = static_cast<double>(sum);
  if (R_max >= 2) out.increasing_tail = log_last > log_prev;
  if (beta == 0)
    out.warning = "beta = 0: the sum is sum R^d and diverges with R_max";
  else if (out.increasing_tail)
    out.warning = "terms increase at R_max: the field sum outgrows the surface energy";
  return out;
}

NuExact nu_exact(const Region& window, const ModelParams& p, FieldMode mode, int boundary, int event,
                 std::size_t cap) {
  p.validate();
  if (boundary != 1 && boundary != -1) throw std::invalid_argument("boundary must be +1 or -1");
  if (event != 1 && event != -1) throw std::invalid_argument("event spin must be +1 or -1");
  NuExact out;
  Region forced(window.dim());
  std::vector<Point> fp;
  for (const auto& x : inner_boundary(window)) {
    if (window.contains(x)) fp.push_back(x);
    for (const auto& y : neighbors(x))
      if (window.contains(y)) fp.push_back(y);
  }
  out.forced = Region(window.dim(), fp);
  out.free = set_difference(window, out.forced);
  if (out.free.empty()) out.warning = "no free sites remain after conditioning";
  const Point o(window.dim());
  if (!out.free.contains(o)) {
    out.probability = event == boundary ? 1.0 : 0.0;
    return out;
  }
  const auto ex = exact_averages(out.free, p, boundary, mode, cap);
  const auto i0 = static_cast<std::size_t>(out.free.index_of(o));
  out.probability = event > 0 ? ex.prob_up[i0] : ex.prob_down[i0];
  return out;
}

double restricted_log_partition(const Region& window, const Region& sub, const ModelParams& p, FieldMode mode,
                                const ContourParams& cp, std::size_t cap) {
  p.validate();
  const std::size_t n = window.size();
  if (n > cap)
    throw CapExceeded("restricted partition function refused: " + std::to_string(n) + " sites exceeds cap " +
                      std::to_string(cap));
  double m = -INFINITY, acc = 0;
  SpinConfiguration s(window, -1, -1);
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    for (std::size_t i = 0; i < n; ++i) s.spins()[i] = (k >> i & 1u) ? 1 : -1;
    const auto G = extract_contours(s, cp);
    const bool inside = std::all_of(G.begin(), G.end(), [&](const Contour& g) { return is_subset(g.volume, sub); });
    if (!inside) continue;
    const double x = -p.beta * hamiltonian(s, p, mode);
    if (x > m) {
      acc = acc * std::exp(m - x) + 1.0;
      m = x;
    } else {
      acc += std::exp(x - m);
    }
  }
  return m + std::log(acc);
}

}  // namespace ctk
