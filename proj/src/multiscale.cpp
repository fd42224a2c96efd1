#include "ctk/multiscale.hpp"

#include <algorithm>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

namespace ctk {

int n_r_of_diameter(Coord diam, int stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  if (diam <= 1) return 0;
  int n = 0;
  // smallest n with 2^{stride n} >= diam
  while (true) {
    const int e = stride * n;
    if (e >= 62 || (Coord{1} << e) >= diam) return n;
    ++n;
  }
}

int n_r(const Region& r, int stride) { return n_r_of_diameter(diameter(r), stride); }

bool CoverHierarchy::exact() const {
  return std::all_of(levels.begin(), levels.end(), [](const Cover& c) { return c.exact; });
}

std::uint64_t CoverHierarchy::total() const {
  std::uint64_t s = 0;
  for (const auto& c : levels) s += c.cubes.size();
  return s;
}

CoverHierarchy cover_hierarchy(const Region& r, int stride, const CoverOptions& opt) {
  if (r.empty()) throw std::invalid_argument("cover hierarchy of empty region");
  CoverHierarchy h;
  h.stride = stride;
  const int top = n_r(r, stride);
  for (int n = 0; n <= top; ++n) h.levels.push_back(minimal_cover(r, stride * n, opt));
  return h;
}

std::uint64_t total_volume(const Region& r, int stride, const CoverOptions& opt) {
  return cover_hierarchy(r, stride, opt).total();
}

namespace {

Coord floor_div(Coord a, Coord b) {
  Coord q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

Coord ceil_div(Coord a, Coord b) { return -floor_div(-a, b); }

// Some scale-n cube contains [lo, hi] on one axis.
bool axis_fits(Coord lo, Coord hi, int scale) {
  if (scale == 0) return lo == hi;
  const Coord h = Coord{1} << (scale - 1);
  return ceil_div(hi, h) - 1 <= floor_div(lo, h) + 1;
}

}  // namespace

int small_cover_size(const std::vector<Point>& pts, int scale) {
  const std::size_t k = pts.size();
  if (k == 0) return 0;
  if (k > 16) throw std::invalid_argument("small_cover_size handles at most 16 points");
  const int d = pts[0].dim();
  const std::uint32_t full = (1u << k) - 1;
  std::vector<char> fits(full + 1, 0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    bool ok = true;
    for (int a = 0; a < d && ok; ++a) {
      Coord lo = INT64_MAX, hi = INT64_MIN;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1u) {
          lo = std::min(lo, pts[i][a]);
          hi = std::max(hi, pts[i][a]);
        }
      ok = axis_fits(lo, hi, scale);
    }
    fits[mask] = ok;
  }
  if (fits[full]) return 1;
  std::vector<int> dp(full + 1, 1 << 20);
  dp[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t low = mask & (~mask + 1);
    for (std::uint32_t sub = mask; sub; sub = (sub - 1) & mask)
      if ((sub & low) && fits[sub]) dp[mask] = std::min(dp[mask], dp[mask ^ sub] + 1);
  }
  return dp[full];
}

std::uint64_t small_total_volume(const std::vector<Point>& pts, int stride) {
  if (pts.empty()) throw std::invalid_argument("total volume of empty set");
  Coord diam = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) diam = std::max(diam, l1_distance(pts[i], pts[j]));
  const int top = n_r_of_diameter(diam, stride);
  std::uint64_t v = pts.size();
  for (int n = 1; n <= top; ++n) v += static_cast<std::uint64_t>(small_cover_size(pts, stride * n));
  return v;
}

void Graph::add_edge(std::size_t u, std::size_t v) {
  if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
  if (u == v) return;
  if (std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end()) return;
  adj[u].push_back(v);
  adj[v].push_back(u);
}

bool Graph::induced_connected(const std::vector<std::size_t>& verts) const {
  if (verts.empty()) return false;
  std::vector<char> in(n, 0), seen(n, 0);
  for (auto v : verts) in[v] = 1;
  std::vector<std::size_t> stack{verts[0]};
  seen[verts[0]] = 1;
  std::size_t count = 0;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    ++count;
    for (auto w : adj[u])
      if (in[w] && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  std::size_t distinct = 0;
  for (std::size_t v = 0; v < n; ++v) distinct += in[v];
  return count == distinct;
}

bool Graph::connected() const {
  if (n == 0) return false;
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  return induced_connected(all);
}

std::vector<std::vector<std::size_t>> tree_cover(const Graph& g, std::size_t k) {
  if (k < 1) throw std::invalid_argument("tree_cover needs k >= 1");
  if (!g.connected()) throw DisconnectedGraph("tree_cover needs a nonempty connected graph");
  const std::size_t n = g.n;
  std::vector<std::vector<std::size_t>> out;
  if (n <= 2 * k) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    out.push_back(std::move(all));
    return out;
  }
  if (k == 1) {
    for (std::size_t v = 0; v < n; ++v) out.push_back({v});
    return out;
  }

  // BFS spanning tree rooted at 0.
  std::vector<std::size_t> parent(n, SIZE_MAX), depth(n, 0), order;
  std::vector<std::vector<std::size_t>> children(n);
  std::deque<std::size_t> q{0};
  parent[0] = 0;
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    order.push_back(u);
    auto nb = g.adj[u];
    std::sort(nb.begin(), nb.end());
    for (auto w : nb)
      if (parent[w] == SIZE_MAX) {
        parent[w] = u;
        depth[w] = depth[u] + 1;
        children[u].push_back(w);
        q.push_back(w);
      }
  }

  std::vector<char> alive(n, 1);
  std::size_t n_alive = n;
  std::vector<std::size_t> desc(n);
  auto collect = [&](std::size_t root, std::vector<std::size_t>& acc) {
    std::vector<std::size_t> st{root};
    while (!st.empty()) {
      auto u = st.back();
      st.pop_back();
      acc.push_back(u);
      for (auto c : children[u])
        if (alive[c]) st.push_back(c);
    }
  };

  while (n_alive > 2 * k) {
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto u = *it;
      if (!alive[u]) continue;
      desc[u] = 0;
      for (auto c : children[u])
        if (alive[c]) desc[u] += desc[c] + 1;
    }
    std::size_t star = SIZE_MAX;
    for (std::size_t u = 0; u < n; ++u) {
      if (!alive[u] || desc[u] < k) continue;
      if (star == SIZE_MAX || depth[u] > depth[star]) star = u;
    }
    std::vector<std::size_t> block{star};
    std::size_t sum = 0;
    for (auto c : children[star]) {
      if (!alive[c]) continue;
      collect(c, block);
      sum += desc[c] + 1;
      if (sum >= k) break;
    }
    for (std::size_t i = 1; i < block.size(); ++i) alive[block[i]] = 0;
    n_alive -= block.size() - 1;
    std::sort(block.begin(), block.end());
    out.push_back(std::move(block));
  }
  std::vector<std::size_t> rest;
  for (std::size_t v = 0; v < n; ++v)
    if (alive[v]) rest.push_back(v);
  out.push_back(std::move(rest));
  return out;
}

std::uint64_t count_subordinate_covers(const std::vector<Cube>& parent, int child_scale, std::size_t v_target,
                                       std::uint64_t max_subsets) {
  if (parent.empty()) return v_target == 0 ? 1 : 0;
  if (v_target == 0) return 0;
  const int pscale = parent[0].scale;
  for (const auto& c : parent)
    if (c.scale != pscale) throw std::invalid_argument("parent cubes must share one scale");
  if (child_scale > pscale) throw std::invalid_argument("child scale exceeds parent scale");
  const int d = parent[0].index.dim();

  Region up(d);
  for (const auto& c : parent) up = set_union(up, cube_points(c));

  std::set<Cube> cand_set;
  for (const auto& p : up)
    for (const auto& c : cubes_containing(p, child_scale))
      if (!cand_set.count(c) && is_subset(cube_points(c), up)) cand_set.insert(c);
  const std::vector<Cube> cand(cand_set.begin(), cand_set.end());
  const std::size_t m = cand.size();
  if (v_target > m) return 0;

  long double subsets = 1;
  for (std::size_t i = 0; i < v_target; ++i) subsets = subsets * (m - i) / (i + 1);
  if (subsets > static_cast<long double>(max_subsets))
    throw EnumerationCapExceeded("subordinate cover count needs " + std::to_string(static_cast<double>(subsets)) +
                                 " subsets, cap is " + std::to_string(max_subsets));

  std::vector<Region> pts;
  for (const auto& c : cand) pts.push_back(cube_points(c));

  CoverOptions exact;
  exact.mode = CoverMode::Exact;
  std::uint64_t count = 0;
  std::vector<std::size_t> idx(v_target);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    Region u(d);
    for (auto i : idx) u = set_union(u, pts[i]);
    if (minimal_cover_size(u, pscale, exact) == parent.size()) ++count;
    std::size_t i = v_target;
    while (i > 0 && idx[i - 1] == m - v_target + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < v_target; ++j) idx[j] = idx[j - 1] + 1;
  }
  return count;
}

namespace {

Coord radius_for(int V, int k, int stride) {
  // A set of k points with V_r = V has n_r <= V - k, so diam <= 2^{r(V-k)}.
  const int e = stride * (V - k);
  if (e < 0) return -1;
  if (e > 40) throw EnumerationCapExceeded("search radius 2^" + std::to_string(e) + " is too large");
  return Coord{1} << e;
}

std::uint64_t pair_total_volume(const Point& y, int stride) {
  const Coord diam = l1_norm(y);
  const int top = n_r_of_diameter(diam, stride);
  std::uint64_t v = 2;
  for (int n = 1; n <= top; ++n) {
    bool fits = true;
    for (int a = 0; a < y.dim() && fits; ++a) fits = axis_fits(std::min<Coord>(0, y[a]), std::max<Coord>(0, y[a]), stride * n);
    v += fits ? 1 : 2;
  }
  return v;
}

bool norm_lex_less(const Point& a, const Point& b) {
  const Coord na = l1_norm(a), nb = l1_norm(b);
  return na != nb ? na < nb : a < b;
}

template <class F>
void for_each_in_ball(int d, Coord R, F&& f) {
  Point p(d);
  std::function<void(int, Coord)> rec = [&](int axis, Coord budget) {
    if (axis == d) {
      f(p);
      return;
    }
    for (Coord t = -budget; t <= budget; ++t) {
      p[axis] = t;
      rec(axis + 1, budget - (t < 0 ? -t : t));
    }
    p[axis] = 0;
  };
  rec(0, R);
}

}  // namespace

std::uint64_t visit_FV(int V, int d, int stride, const std::function<void(const std::vector<Point>&)>& fn,
                       const FVOptions& opt) {
  if (V < 1) throw std::invalid_argument("V must be >= 1");
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  const Point origin(d);
  std::uint64_t count = 0;
  auto emit = [&](std::vector<Point> s) {
    std::sort(s.begin(), s.end());
    ++count;
    if (fn) fn(s);
  };
  if (V == 1) {  // {0} has V_r = 1 and is the only such set
    emit({origin});
    return count;
  }

  const Coord R2 = radius_for(V, 2, stride);
  const auto ball = ball_count(d, R2);
  if (ball > opt.max_candidates)
    throw EnumerationCapExceeded("pair search ball holds " + std::to_string(ball) + " points, cap is " +
                                 std::to_string(opt.max_candidates));
  for_each_in_ball(d, R2, [&](const Point& y) {
    if (y == origin) return;
    if (pair_total_volume(y, stride) == static_cast<std::uint64_t>(V)) emit({origin, y});
  });

  if (V < 3) return count;
  const Coord R3 = radius_for(V, 3, stride);
  std::vector<Point> pool;
  for (const auto& p : l1_ball(origin, R3))
    if (p != origin) pool.push_back(p);
  std::sort(pool.begin(), pool.end(), norm_lex_less);

  std::vector<Point> cur{origin};
  std::function<void(std::size_t)> extend = [&](std::size_t from) {
    const int k = static_cast<int>(cur.size()) + 1;
    const Coord R = radius_for(V, k, stride);
    if (R < 1) return;
    for (std::size_t i = from; i < pool.size(); ++i) {
      const Point& z = pool[i];
      if (l1_norm(z) > R) break;
      bool close = true;
      for (const auto& p : cur)
        if (l1_distance(p, z) > R) {
          close = false;
          break;
        }
      if (!close) continue;
      cur.push_back(z);
      const auto v = small_total_volume(cur, stride);
      if (v == static_cast<std::uint64_t>(V)) {
        if (k >= 3) emit(cur);
      } else if (v < static_cast<std::uint64_t>(V)) {
        extend(i + 1);
      }
      cur.pop_back();
    }
  };
  // Seeds: pairs {0, y} with V_r < V, y in canonical order.
  for (std::size_t i = 0; i < pool.size(); ++i) {
    cur.push_back(pool[i]);
    if (pair_total_volume(pool[i], stride) < static_cast<std::uint64_t>(V)) extend(i + 1);
    cur.pop_back();
  }
  return count;
}

std::uint64_t count_FV(int V, int d, int stride, const FVOptions& opt) {
  return visit_FV(V, d, stride, nullptr, opt);
}

std::vector<Region> enumerate_FV(int V, int d, int stride, const FVOptions& opt) {
  std::vector<Region> out;
  visit_FV(V, d, stride, [&](const std::vector<Point>& s) { out.emplace_back(d, s); }, opt);
  std::sort(out.begin(), out.end(), [](const Region& a, const Region& b) { return a.points() < b.points(); });
  return out;
}

C0Result enumerate_contours_C0(int m, int d, const ContourParams& cp, const C0Options& opt) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (m > opt.max_m) throw EnumerationCapExceeded("m = " + std::to_string(m) + " exceeds cap " + std::to_string(opt.max_m));
  const Coord w = opt.box_half_width;
  Box box{Point(d), Point(d)};
  for (int a = 0; a < d; ++a) {
    box.lo[a] = -w;
    box.hi[a] = w;
  }
  const BoxIndexer sites(box);
  if (sites.size() > 64) throw EnumerationCapExceeded("C0 sweep box holds more than 64 sites");
  const Box halo = inflate(box, 1);
  const BoxIndexer hix(halo);
  const double halo_diam = static_cast<double>(2 * d * (w + 1));
  if (cp.M * std::pow(static_cast<double>(d), cp.a) < halo_diam ||
      static_cast<std::size_t>(m) > cp.max_family())
    throw std::invalid_argument("C0 sweep needs M d^a >= box diameter and m <= 2^r - 1");

  // Halo points become decidable once their last box neighbour is assigned.
  const std::size_t N = sites.size();
  std::vector<std::vector<std::size_t>> ready(N);
  std::vector<std::vector<std::size_t>> nbr_sites(hix.size());
  for (std::size_t h = 0; h < hix.size(); ++h) {
    const Point x = hix.point(h);
    std::vector<Point> ball = neighbors(x);
    ball.push_back(x);
    std::size_t last = SIZE_MAX;
    for (const auto& y : ball)
      if (box.contains(y)) {
        const auto s = sites.index(y);
        nbr_sites[h].push_back(s);
        last = last == SIZE_MAX ? s : std::max(last, s);
      }
    if (last != SIZE_MAX) ready[last].push_back(h);
  }

  std::vector<std::int8_t> spin(N, -1);
  auto by_points = [](const Region& x, const Region& y) { return x.points() < y.points(); };
  std::set<Region, decltype(by_points)> found(by_points);
  C0Result res;
  const Region window = square_window(d, 2 * w + 1);

  std::function<void(std::size_t, int)> dfs = [&](std::size_t t, int bad) {
    if (t == N) {
      if (bad != m) return;
      ++res.configurations;
      SpinConfiguration s(window, -1, -1);
      for (std::size_t i = 0; i < N; ++i) s.set(sites.point(i), spin[i]);
      for (const auto& g : extract_contours(s, cp, opt.partition)) {
        if (g.size() != static_cast<std::size_t>(m) || g.label_exterior != -1) continue;
        if (!g.volume.contains(Point(d))) continue;
        found.insert(g.support);
      }
      return;
    }
    for (std::int8_t v : {std::int8_t{-1}, std::int8_t{1}}) {
      spin[t] = v;
      int nb = bad;
      for (auto h : ready[t]) {
        const auto& ns = nbr_sites[h];
        // Neighbours outside the box are -1.
        const bool outside = ns.size() < static_cast<std::size_t>(2 * d + 1);
        int plus = 0;
        for (auto s : ns) plus += spin[s] > 0;
        const int total = static_cast<int>(ns.size());
        const bool all_minus = plus == 0;
        const bool all_plus = plus == total && !outside;
        if (!all_minus && !all_plus) ++nb;
      }
      if (nb <= m) dfs(t + 1, nb);
    }
    spin[t] = -1;
  };
  dfs(0, 0);
  res.supports.assign(found.begin(), found.end());
  return res;
}

namespace {

// Sum of the tail of a p-series at argument s > 1 (Riemann zeta).
double zeta(double s) { return boost::math::zeta(s); }

}  // namespace

EntropyConstants entropy_constants(int d, const ContourParams& cp) {
  if (d < 2) throw std::invalid_argument("entropy constants need d >= 2");
  cp.validate();
  EntropyConstants ec;
  ec.a = cp.a;
  ec.r = cp.r;
  ec.M = cp.M;
  const double ln2 = std::log(2.0);
  const int r = cp.r;
  ec.c = (2 * d + 1) * ln2 + d * std::log(std::ldexp(1.0, r + 1) - 1.0);
  ec.b = d * std::log(3.0) + ln2 + ec.c + 1.0;
  if (!(cp.a > 1)) throw std::invalid_argument("kappa needs a > 1");
  const double L = std::log(2.0 * cp.M * std::pow(static_cast<double>(d), cp.a)) / (r * ln2);
  ec.n0 = (cp.a + 2.0 + L) / (cp.a - 1.0);
  const double e = (r - d - 1) / std::log2(cp.a);
  if (!(e > 1)) throw std::invalid_argument("kappa needs (r-d-1)/log2(a) > 1");
  const double n0e = std::pow(ec.n0, e);
  ec.kappa_terms[0] = 3.0 + L;
  ec.kappa_terms[1] = ec.n0 + 1.0 + std::ldexp(1.0, 2 * (r - d - 1)) * n0e * (2.0 + L);
  ec.kappa_terms[2] = ec.n0 + 1.0 + std::ldexp(1.0, r - d - 1) * n0e * zeta(e);
  ec.kappa = std::max({ec.kappa_terms[0], ec.kappa_terms[1], ec.kappa_terms[2]});
  ec.c1 = 2.0 * ec.b * ec.kappa + 1.0 + 1.0 / (d - 1);
  return ec;
}

bool check_kappa(const Contour& g, const EntropyConstants& ec, const CoverOptions& opt) {
  const auto v = total_volume(g.support, ec.r, opt);
  return static_cast<double>(v) <= ec.kappa * static_cast<double>(g.size());
}

}  // namespace ctk
