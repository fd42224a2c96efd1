#include "ctk/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ctk {

void McConfig::validate() const {
  p.validate();
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  if (boundary != 1 && boundary != -1) throw std::invalid_argument("boundary must be +1 or -1");
  if (!(sweeps > burn_in) || burn_in < 0) throw std::invalid_argument("need sweeps > burn_in >= 0");
  if (measure_every < 1) throw std::invalid_argument("measure_every must be >= 1");
}

std::vector<double> effective_fields(const Region& window, const ModelParams& p, int boundary, FieldMode mode) {
  auto ext = exterior_couplings(window, p);
  for (std::size_t i = 0; i < window.size(); ++i) ext[i] = mode.at(window[i], p) + boundary * ext[i];
  return ext;
}

double effective_field(const Point& x, const Region& window, const ModelParams& p, int boundary, FieldMode mode) {
  const auto i = window.index_of(x);
  if (i < 0) throw std::out_of_range("point " + x.str() + " outside window");
  long double inner = 0;
  for (const auto& y : window)
    if (y != x) inner += coupling(x, y, p);
  return mode.at(x, p) + boundary * static_cast<double>(p.J * lattice_sum_radial(p).value - inner);
}

std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

namespace {

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace

Sampler::Sampler(const Region& window, const ModelParams& p, int boundary, FieldMode mode, int fill)
    : window_(window), beta_(p.beta) {
  p.validate();
  const std::size_t n = window.size();
  if (n == 0) throw std::invalid_argument("sampler needs a nonempty window");
  const Box bb = bounding_box(window);
  const int d = window.dim();
  // Displacement kernel indexed by sum_a (dx_a + ext_a - 1) * stride_a.
  std::vector<std::int64_t> ext(d), stride(d);
  std::int64_t size = 1;
  for (int a = 0; a < d; ++a) {
    ext[a] = bb.hi[a] - bb.lo[a] + 1;
    stride[a] = size;
    size *= 2 * ext[a] - 1;
  }
  kernel_.assign(static_cast<std::size_t>(size), 0.0);
  CouplingTable tab(p.alpha, p.J, diameter(window));
  for (std::int64_t k = 0; k < size; ++k) {
    std::int64_t rem = k, dist = 0;
    for (int a = 0; a < d; ++a) {
      const std::int64_t c = rem % (2 * ext[a] - 1) - (ext[a] - 1);
      rem /= 2 * ext[a] - 1;
      dist += c < 0 ? -c : c;
    }
    kernel_[static_cast<std::size_t>(k)] = dist == 0 ? 0.0 : tab(dist);
  }
  center_ = 0;
  for (int a = 0; a < d; ++a) center_ += (ext[a] - 1) * stride[a];
  off_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t o = 0;
    for (int a = 0; a < d; ++a) o += (window[i][a] - bb.lo[a]) * stride[a];
    off_[i] = o;
  }
  b_ = effective_fields(window, p, boundary, mode);
  std::vector<std::int8_t> s(n, static_cast<std::int8_t>(fill == 0 ? boundary : fill));
  set_spins(s);
}

void Sampler::set_spins(const std::vector<std::int8_t>& s) {
  const std::size_t n = off_.size();
  if (s.size() != n) throw std::invalid_argument("spin vector size mismatch");
  spins_ = s;
  loc_.assign(n, 0.0);
  sum_ = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_ += spins_[i];
    long double acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += coupling(i, j) * spins_[j];
    loc_[i] = static_cast<double>(acc);
  }
}

void Sampler::flip(std::size_t i) {
  spins_[i] = static_cast<std::int8_t>(-spins_[i]);
  sum_ += 2 * spins_[i];
  const double ds = 2.0 * spins_[i];
  const double* k = kernel_.data() + center_ - off_[i];
  const std::size_t n = off_.size();
  for (std::size_t j = 0; j < n; ++j) loc_[j] += k[off_[j]] * ds;
}

double Sampler::energy() const {
  const std::size_t n = off_.size();
  long double pair = 0, lin = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pair += coupling(i, j) * spins_[i] * spins_[j];
    lin += b_[i] * spins_[i];
  }
  return static_cast<double>(-pair - lin);
}

double Sampler::magnetization() const { return static_cast<double>(sum_) / static_cast<double>(off_.size()); }

double Sampler::acceptance_probability(double dH) const { return dH <= 0 ? 1.0 : std::exp(-beta_ * dH); }

std::int64_t Sampler::sweep(std::mt19937_64& rng) {
  const std::size_t n = off_.size();
  std::int64_t acc = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = uniform_index(rng, n);
    const double dH = delta_h(i);
    if (dH <= 0 || u01(rng) < std::exp(-beta_ * dH)) {
      flip(i);
      ++acc;
    }
  }
  return acc;
}

namespace {

// Mean and batch-means standard error.
std::pair<double, double> batch_stats(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 0) return {0.0, 0.0};
  long double s = 0;
  for (double v : x) s += v;
  const double mean = static_cast<double>(s / n);
  const std::size_t B = std::min<std::size_t>(32, n);
  if (B < 2) return {mean, 0.0};
  const std::size_t per = n / B;
  std::vector<double> bm(B, 0.0);
  for (std::size_t b = 0; b < B; ++b) {
    long double t = 0;
    for (std::size_t k = b * per; k < (b + 1) * per; ++k) t += x[k];
    bm[b] = static_cast<double>(t / per);
  }
  long double mb = 0;
  for (double v : bm) mb += v;
  mb /= B;
  long double var = 0;
  for (double v : bm) var += (v - mb) * (v - mb);
  var /= (B - 1);
  return {mean, static_cast<double>(std::sqrt(var / B))};
}

}  // namespace

McResult run(const McConfig& cfg) {
  cfg.validate();
  const Region window = square_window(cfg.p.d, cfg.L);
  Sampler s(window, cfg.p, cfg.boundary, cfg.field);
  std::mt19937_64 rng(cfg.seed);
  const auto origin = window.index_of(Point(cfg.p.d));
  const double N = static_cast<double>(window.size());

  std::vector<double> ms, s0;
  long double m2 = 0, E = 0;
  std::int64_t accepted = 0, proposals = 0;
  double H = s.energy();
  for (std::int64_t t = 0; t < cfg.sweeps; ++t) {
    // Energy is tracked through delta_h on accepted flips.
    const std::size_t n = s.size();
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = uniform_index(rng, n);
      const double dH = s.delta_h(i);
      if (dH <= 0 || u01(rng) < std::exp(-cfg.p.beta * dH)) {
        s.flip(i);
        H += dH;
        ++accepted;
      }
    }
    proposals += static_cast<std::int64_t>(n);
    if (t < cfg.burn_in || (t - cfg.burn_in) % cfg.measure_every != 0) continue;
    const double m = s.magnetization();
    ms.push_back(m);
    m2 += static_cast<long double>(m) * m;
    E += H;
    if (origin >= 0) s0.push_back(s.spins()[static_cast<std::size_t>(origin)]);
  }
  McResult r;
  r.measurements = static_cast<std::int64_t>(ms.size());
  auto [mm, se] = batch_stats(ms);
  r.m_mean = mm;
  r.se_m = se;
  std::vector<double> ab(ms.size());
  std::transform(ms.begin(), ms.end(), ab.begin(), [](double v) { return std::fabs(v); });
  r.m_abs = batch_stats(ab).first;
  const double n_meas = static_cast<double>(ms.size());
  r.chi = cfg.p.beta * N * (static_cast<double>(m2) / n_meas - r.m_abs * r.m_abs);
  r.E_mean = static_cast<double>(E) / n_meas;
  if (!s0.empty()) std::tie(r.s0_mean, r.se_s0) = batch_stats(s0);
  r.acceptance = proposals ? static_cast<double>(accepted) / static_cast<double>(proposals) : 0.0;
  if (cfg.keep_trace) r.trace = ms;
  r.effective_fields = s.fields();
  return r;
}

std::vector<ScanPoint> scan(std::vector<McConfig> grid, std::uint64_t master_seed, unsigned threads) {
  std::vector<ScanPoint> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i].seed = child_seed(master_seed, i);
    grid[i].validate();
    out[i].cfg = grid[i];
  }
  unsigned w = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CTK_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) w = std::min<unsigned>(w, static_cast<unsigned>(cap));
  }
  w = std::max(1u, std::min<unsigned>(w, static_cast<unsigned>(grid.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < out.size();) out[i].result = run(out[i].cfg);
  };
  if (w <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < w; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

std::vector<McConfig> beta_delta_grid(const McConfig& tmpl, const std::vector<double>& betas,
                                      const std::vector<double>& deltas) {
  std::vector<McConfig> g;
  for (double b : betas)
    for (double dl : deltas) {
      McConfig c = tmpl;
      c.p.beta = b;
      c.p.delta = dl;
      g.push_back(c);
    }
  return g;
}

std::string scan_csv_header() { return "d,alpha,delta,J,h_star,beta,L,seed,sweeps,m_mean,m_abs,chi,E_mean,se_m"; }

void write_scan_csv(std::ostream& os, const std::vector<ScanPoint>& pts) {
  os << scan_csv_header() << '\n';
  std::ostringstream line;
  for (const auto& sp : pts) {
    const auto& c = sp.cfg;
    const auto& r = sp.result;
    line.str("");
    line << std::setprecision(17) << c.p.d << ',' << c.p.alpha << ',' << c.p.delta << ',' << c.p.J << ','
         << c.p.h_star << ',' << c.p.beta << ',' << c.L << ',' << c.seed << ',' << c.sweeps << ',' << r.m_mean << ','
         << r.m_abs << ',' << r.chi << ',' << r.E_mean << ',' << r.se_m;
    os << line.str() << '\n';
  }
}

}  // namespace ctk
