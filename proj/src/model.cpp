#include "ctk/model.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/special_functions/zeta.hpp>
#include <cfloat>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "ctk/constants.hpp"

namespace ctk {

void ModelParams::validate() const {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("d must be in [1, 6]");
  if (!(alpha > d)) throw std::invalid_argument("alpha must exceed d");
  if (!(J > 0)) throw std::invalid_argument("J must be positive");
  if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
  if (!(h_star >= 0)) throw std::invalid_argument("h_star must be nonnegative");
  if (!(beta >= 0)) throw std::invalid_argument("beta must be nonnegative");
  if (!(tail_tol > 0)) throw std::invalid_argument("tail_tol must be positive");
}

double coupling(const Point& x, const Point& y, const ModelParams& p) {
  Coord r = l1_distance(x, y);
  if (r == 0) return 0.0;
  return p.J * std::pow(static_cast<double>(r), -p.alpha);
}

double field(const Point& x, const ModelParams& p) {
  Coord r = l1_norm(x);
  if (r == 0) return p.h_star;
  return p.h_star * std::pow(static_cast<double>(r), -p.delta);
}

double truncated_field(const Point& x, double R, const ModelParams& p) {
  if (R < 0) throw std::invalid_argument("truncation radius must be >= 0");
  if (static_cast<double>(l1_norm(x)) < R) return 0.0;
  return field(x, p);
}

double FieldMode::at(const Point& x, const ModelParams& p) const {
  switch (kind) {
    case Zero: return 0.0;
    case Full: return field(x, p);
    case Truncated: return truncated_field(x, R, p);
  }
  return 0.0;
}

std::vector<double> sphere_polynomial(int d) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  std::vector<double> poly(static_cast<std::size_t>(d), 0.0);
  for (int k = 0; k <= d - 1; ++k) {
    const int m = d - k - 1;
    // C(n-1, m) = prod_{i=1}^m (n - i) / m!, exact for every integer n >= 1.
    std::vector<double> c{1.0};
    for (int i = 1; i <= m; ++i) {
      std::vector<double> nc(c.size() + 1, 0.0);
      for (std::size_t j = 0; j < c.size(); ++j) {
        nc[j + 1] += c[j];
        nc[j] -= i * c[j];
      }
      c = std::move(nc);
    }
    double fact = 1, dk = 1;
    for (int i = 2; i <= m; ++i) fact *= i;
    for (int i = 1; i <= k; ++i) dk = dk * (d - k + i) / i;
    const double w = std::ldexp(1.0, d - k) * dk / fact;
    for (std::size_t j = 0; j < c.size(); ++j) poly[j] += w * c[j];
  }
  return poly;
}

namespace {

LatticeSum compute_radial(int d, double alpha) {
  if (!(alpha > d)) throw std::invalid_argument("lattice sum needs alpha > d");
  const auto poly = sphere_polynomial(d);
  long double s = 0, mag = 0;
  for (std::size_t j = 0; j < poly.size(); ++j) {
    if (poly[j] == 0.0) continue;
    const long double z = boost::math::zeta(static_cast<long double>(alpha) - j);
    s += poly[j] * z;
    mag += std::fabs(poly[j]) * z;
  }
  return {static_cast<double>(s), static_cast<double>(64 * LDBL_EPSILON * mag + DBL_EPSILON * std::fabs(s))};
}

}  // namespace

LatticeSum lattice_sum_radial(int d, double alpha) {
  static std::shared_mutex mu;
  static std::map<std::pair<int, double>, LatticeSum> cache;
  const auto key = std::make_pair(d, alpha);
  {
    std::shared_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  LatticeSum v = compute_radial(d, alpha);
  std::unique_lock lock(mu);
  cache.emplace(key, v);
  return v;
}

LatticeSum lattice_sum_radial(const ModelParams& p) {
  LatticeSum s = lattice_sum_radial(p.d, p.alpha);
  if (s.error_bound > p.tail_tol)
    throw std::runtime_error("lattice sum cannot meet tail_tol " + std::to_string(p.tail_tol));
  return s;
}

LatticeSum lattice_sum_partial(int d, double alpha, std::int64_t N) {
  if (!(alpha > d)) throw std::invalid_argument("lattice sum needs alpha > d");
  if (N < 1) throw std::invalid_argument("partial sum needs N >= 1");
  long double s = 0;
  // Smallest terms first.
  for (std::int64_t n = N; n >= 1; --n)
    s += static_cast<long double>(sphere_count(d, n)) * std::pow(static_cast<long double>(n), -static_cast<long double>(alpha));
  const double tail = constants::sphere_upper(d) / (alpha - d) * std::pow(static_cast<double>(N), d - alpha);
  return {static_cast<double>(s), tail};
}

CouplingTable::CouplingTable(double alpha, double J, std::int64_t max_distance)
    : table_(static_cast<std::size_t>(std::max<std::int64_t>(max_distance, 0) + 1), 0.0) {
  for (std::size_t r = 1; r < table_.size(); ++r) table_[r] = J * std::pow(static_cast<double>(r), -alpha);
}

SpinConfiguration::SpinConfiguration(Region window, int boundary, int fill)
    : window_(std::move(window)), boundary_(boundary) {
  if (boundary != 1 && boundary != -1) throw std::invalid_argument("boundary must be +1 or -1");
  if (fill != 1 && fill != -1) throw std::invalid_argument("spin must be +1 or -1");
  spins_.assign(window_.size(), static_cast<std::int8_t>(fill));
}

SpinConfiguration::SpinConfiguration(Region window, int boundary, std::vector<std::int8_t> spins)
    : window_(std::move(window)), boundary_(boundary), spins_(std::move(spins)) {
  if (boundary != 1 && boundary != -1) throw std::invalid_argument("boundary must be +1 or -1");
  if (spins_.size() != window_.size()) throw std::invalid_argument("spin count does not match window");
  for (auto s : spins_)
    if (s != 1 && s != -1) throw std::invalid_argument("spin must be +1 or -1");
}

int SpinConfiguration::spin(const Point& p) const {
  auto i = window_.index_of(p);
  return i < 0 ? boundary_ : spins_[static_cast<std::size_t>(i)];
}

void SpinConfiguration::set(const Point& p, int s) {
  if (s != 1 && s != -1) throw std::invalid_argument("spin must be +1 or -1");
  auto i = window_.index_of(p);
  if (i < 0) throw std::out_of_range("point " + p.str() + " outside window");
  spins_[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(s);
}

std::vector<double> exterior_couplings(const Region& window, const ModelParams& p) {
  const double total = p.J * lattice_sum_radial(p).value;
  const std::size_t n = window.size();
  std::vector<double> ext(n, total);
  if (n == 0) return ext;
  CouplingTable tab(p.alpha, p.J, diameter(window));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = tab(l1_distance(window[i], window[j]));
      ext[i] -= c;
      ext[j] -= c;
    }
  return ext;
}

double hamiltonian(const SpinConfiguration& s, const ModelParams& p, FieldMode mode) {
  const Region& w = s.window();
  const std::size_t n = w.size();
  if (n == 0) return 0.0;
  const double total = p.J * lattice_sum_radial(p).value;
  CouplingTable tab(p.alpha, p.J, diameter(w));
  const auto& sp = s.spins();
  long double pair = 0;
  std::vector<long double> inner(n, 0.0L);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = tab(l1_distance(w[i], w[j]));
      pair += c * sp[i] * sp[j];
      inner[i] += c;
      inner[j] += c;
    }
  long double ext = 0, fld = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ext += sp[i] * s.boundary() * (total - inner[i]);
    fld += mode.at(w[i], p) * sp[i];
  }
  return static_cast<double>(-pair - ext - fld);
}

std::vector<std::uint64_t> distance_histogram(const Region& r) {
  std::vector<std::uint64_t> h;
  if (r.size() < 2) return h;
  h.assign(static_cast<std::size_t>(diameter(r)) + 1, 0);
  const int d = r.dim();
  const auto& pts = r.points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      Coord s = 0;
      for (int a = 0; a < d; ++a) {
        Coord t = pts[i][a] - pts[j][a];
        s += t < 0 ? -t : t;
      }
      ++h[static_cast<std::size_t>(s)];
    }
  return h;
}

double pair_coupling_sum(const Region& r, const ModelParams& p) {
  const auto h = distance_histogram(r);
  long double s = 0;
  for (std::size_t k = h.size(); k-- > 1;)
    if (h[k]) s += static_cast<long double>(h[k]) * p.J * std::pow(static_cast<long double>(k), -static_cast<long double>(p.alpha));
  return static_cast<double>(s);
}

double surface_energy(const Region& r, const ModelParams& p) {
  if (r.empty()) throw std::invalid_argument("surface energy of empty region");
  const long double total = static_cast<long double>(p.J) * lattice_sum_radial(p).value;
  return static_cast<double>(total * r.size() - 2.0L * pair_coupling_sum(r, p));
}

double field_sum(const Region& r, const ModelParams& p) {
  long double s = 0;
  for (const auto& x : r) s += field(x, p);
  return static_cast<double>(s);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line needs two or more paired points");
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double den = n * sxx - sx * sx;
  if (den == 0) throw std::invalid_argument("fit_line needs distinct x values");
  LineFit f;
  f.slope = static_cast<double>((n * sxy - sx * sy) / den);
  f.intercept = static_cast<double>((sy - f.slope * sx) / n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    f.rss += e * e;
  }
  return f;
}

namespace {

// Residual of y = c + g with only c free.
double offset_rss(const std::vector<double>& y, const std::vector<double>& g) {
  long double c = 0;
  for (std::size_t i = 0; i < y.size(); ++i) c += y[i] - g[i];
  c /= y.size();
  double rss = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e = static_cast<double>(y[i] - g[i] - c);
    rss += e * e;
  }
  return rss;
}

}  // namespace

BallScaling ball_scaling(const ModelParams& p, std::int64_t R_min, std::int64_t R_max) {
  p.validate();
  if (R_min < 2 || R_max <= R_min) throw std::invalid_argument("need 2 <= R_min < R_max");
  BallScaling b;
  std::vector<double> lx, ly, pw, pwl;
  const Point o(p.d);
  for (std::int64_t R = R_min; R <= R_max; ++R) {
    const double F = surface_energy(l1_ball(o, R), p);
    b.R.push_back(R);
    b.F.push_back(F);
    const double lr = std::log(static_cast<double>(R));
    lx.push_back(lr);
    ly.push_back(std::log(F));
    pw.push_back((p.d - 1) * lr);
    pwl.push_back((p.d - 1) * lr + std::log(lr));
  }
  b.loglog = fit_line(lx, ly);
  b.rss_power = offset_rss(ly, pw);
  b.rss_power_log = offset_rss(ly, pwl);
  return b;
}

namespace {

struct Enumerator {
  std::size_t n;
  std::vector<double> J;  // n*n
  std::vector<double> b;  // exterior + field linear coefficient

  Enumerator(const Region& w, const ModelParams& p, int boundary, FieldMode mode, std::size_t cap) {
    p.validate();
    if (boundary != 1 && boundary != -1) throw std::invalid_argument("boundary must be +1 or -1");
    n = w.size();
    if (n > cap)
      throw CapExceeded("exact enumeration refused: " + std::to_string(n) + " sites exceeds cap " +
                        std::to_string(cap));
    J.assign(n * n, 0.0);
    CouplingTable tab(p.alpha, p.J, n ? diameter(w) : 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) J[i * n + j] = tab(l1_distance(w[i], w[j]));
    auto ext = exterior_couplings(w, p);
    b.resize(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = boundary * ext[i] + mode.at(w[i], p);
  }

  // Visits every configuration in Gray-code order with its energy.
  template <class F>
  void run(F&& visit) const {
    std::vector<std::int8_t> s(n, -1);
    std::vector<double> loc(n, 0.0);  // sum_j J_ij s_j
    double H = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) loc[i] += J[i * n + j] * s[j];
    }
    for (std::size_t i = 0; i < n; ++i) H += -0.5 * loc[i] * s[i] - b[i] * s[i];
    visit(s, H);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < total; ++k) {
      const std::size_t i = static_cast<std::size_t>(std::countr_zero(k));
      H += 2.0 * s[i] * (loc[i] + b[i]);
      s[i] = static_cast<std::int8_t>(-s[i]);
      const double ds = 2.0 * s[i];
      for (std::size_t j = 0; j < n; ++j) loc[j] += J[j * n + i] * ds;
      visit(s, H);
    }
  }
};

}  // namespace

double log_partition_function(const Region& window, const ModelParams& p, int boundary,
                              FieldMode mode, std::size_t cap) {
  Enumerator e(window, p, boundary, mode, cap);
  double m = -INFINITY, acc = 0;
  e.run([&](const std::vector<std::int8_t>&, double H) {
    const double x = -p.beta * H;
    if (x > m) {
      acc = acc * std::exp(m - x) + 1.0;
      m = x;
    } else {
      acc += std::exp(x - m);
    }
  });
  return m + std::log(acc);
}

double partition_function_exact(const Region& window, const ModelParams& p, int boundary,
                                FieldMode mode, std::size_t cap) {
  return std::exp(log_partition_function(window, p, boundary, mode, cap));
}

ExactAverages exact_averages(const Region& window, const ModelParams& p, int boundary,
                             FieldMode mode, std::size_t cap) {
  Enumerator e(window, p, boundary, mode, cap);
  const std::size_t n = e.n;
  double m = -INFINITY, acc = 0, accE = 0;
  std::vector<double> accS(n, 0.0), accU(n, 0.0), accD(n, 0.0);
  e.run([&](const std::vector<std::int8_t>& s, double H) {
    const double x = -p.beta * H;
    if (x > m) {
      const double r = std::exp(m - x);
      acc *= r;
      accE *= r;
      for (auto& v : accS) v *= r;
      for (auto& v : accU) v *= r;
      for (auto& v : accD) v *= r;
      m = x;
    }
    const double w = std::exp(x - m);
    acc += w;
    accE += w * H;
    for (std::size_t i = 0; i < n; ++i) {
      accS[i] += w * s[i];
      (s[i] > 0 ? accU : accD)[i] += w;
    }
  });
  ExactAverages out;
  out.log_z = m + std::log(acc);
  out.mean_energy = accE / acc;
  out.mean_spin.resize(n);
  out.prob_up.resize(n);
  out.prob_down.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.mean_spin[i] = accS[i] / acc;
    out.prob_up[i] = accU[i] / acc;
    out.prob_down[i] = accD[i] / acc;
  }
  return out;
}

}  // namespace ctk
