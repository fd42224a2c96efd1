#include "ctk/lattice.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

namespace ctk {

namespace {

void check_dim(int d) {
  if (d < 1 || d > kMaxDim)
    throw std::invalid_argument("dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                                std::to_string(d));
}

void same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
}

void same_dim(const Region& a, const Region& b) {
  if (a.dim() != b.dim() && !a.empty() && !b.empty())
    throw DimensionMismatch("region dimension mismatch");
}

int common_dim(const Region& a, const Region& b) { return a.dim() ? a.dim() : b.dim(); }

// Floor division for a positive divisor.
Coord floor_div(Coord a, Coord b) {
  Coord q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

}  // namespace

Point::Point(int dim) : dim_(static_cast<std::int8_t>(dim)) { check_dim(dim); }

Point::Point(std::initializer_list<Coord> coords)
    : Point(std::span<const Coord>(coords.begin(), coords.size())) {}

Point::Point(std::span<const Coord> coords) {
  check_dim(static_cast<int>(coords.size()));
  dim_ = static_cast<std::int8_t>(coords.size());
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Point& Point::operator+=(const Point& o) {
  same_dim(*this, o);
  for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  same_dim(*this, o);
  for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Point Point::operator-() const {
  Point r = *this;
  for (int i = 0; i < dim_; ++i) r.c_[i] = -r.c_[i];
  return r;
}

std::string Point::str() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << c_[i];
  os << ')';
  return os.str();
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(p.dim());
  for (int i = 0; i < p.dim(); ++i) {
    h ^= static_cast<std::uint64_t>(p[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

Point unit_vector(int dim, int axis, Coord sign) {
  Point p(dim);
  p[axis] = sign;
  return p;
}

Region::Region(int dim, std::vector<Point> pts) : dim_(dim), pts_(std::move(pts)) {
  check_dim(dim);
  for (const auto& p : pts_)
    if (p.dim() != dim) throw DimensionMismatch("point " + p.str() + " has wrong dimension");
  std::sort(pts_.begin(), pts_.end());
  pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
}

Region::Region(int dim, std::initializer_list<Point> pts)
    : Region(dim, std::vector<Point>(pts)) {}

bool Region::contains(const Point& p) const {
  return std::binary_search(pts_.begin(), pts_.end(), p);
}

std::ptrdiff_t Region::index_of(const Point& p) const {
  auto it = std::lower_bound(pts_.begin(), pts_.end(), p);
  if (it == pts_.end() || *it != p) return -1;
  return it - pts_.begin();
}

Region set_union(const Region& a, const Region& b) {
  same_dim(a, b);
  std::vector<Point> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  int d = common_dim(a, b);
  return d ? Region(d, std::move(out)) : Region();
}

Region set_intersection(const Region& a, const Region& b) {
  same_dim(a, b);
  std::vector<Point> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  int d = common_dim(a, b);
  return d ? Region(d, std::move(out)) : Region();
}

Region set_difference(const Region& a, const Region& b) {
  same_dim(a, b);
  std::vector<Point> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  int d = common_dim(a, b);
  return d ? Region(d, std::move(out)) : Region();
}

bool is_subset(const Region& a, const Region& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const Region& a, const Region& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else return true;
  }
  return false;
}

Region translate(const Region& a, const Point& t) {
  if (a.empty()) return a;
  std::vector<Point> out;
  out.reserve(a.size());
  for (const auto& p : a) out.push_back(p + t);
  return Region(a.dim(), std::move(out));
}

Coord l1_norm(const Point& p) {
  Coord s = 0;
  for (int i = 0; i < p.dim(); ++i) s += p[i] < 0 ? -p[i] : p[i];
  return s;
}

Coord l1_distance(const Point& p, const Point& q) {
  same_dim(p, q);
  Coord s = 0;
  for (int i = 0; i < p.dim(); ++i) {
    Coord t = p[i] - q[i];
    s += t < 0 ? -t : t;
  }
  return s;
}

Coord set_distance(const Region& a, const Region& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("set_distance of empty region");
  same_dim(a, b);
  Coord best = std::numeric_limits<Coord>::max();
  for (const auto& p : a)
    for (const auto& q : b) {
      best = std::min(best, l1_distance(p, q));
      if (best == 0) return 0;
    }
  return best;
}

namespace {

void ball_rec(int axis, Coord budget, Point& cur, int d, std::vector<Point>& out, bool sphere) {
  if (axis == d - 1) {
    if (sphere) {
      Coord c0 = cur[axis];
      cur[axis] = c0 - budget;
      out.push_back(cur);
      if (budget != 0) {
        cur[axis] = c0 + budget;
        out.push_back(cur);
      }
      cur[axis] = c0;
    } else {
      Coord c0 = cur[axis];
      for (Coord t = -budget; t <= budget; ++t) {
        cur[axis] = c0 + t;
        out.push_back(cur);
      }
      cur[axis] = c0;
    }
    return;
  }
  Coord c0 = cur[axis];
  for (Coord t = -budget; t <= budget; ++t) {
    cur[axis] = c0 + t;
    ball_rec(axis + 1, budget - (t < 0 ? -t : t), cur, d, out, sphere);
  }
  cur[axis] = c0;
}

}  // namespace

Region l1_ball(const Point& center, Coord radius) {
  if (radius < 0) throw std::invalid_argument("ball radius must be >= 0");
  std::vector<Point> out;
  Point cur = center;
  ball_rec(0, radius, cur, center.dim(), out, false);
  return Region(center.dim(), std::move(out));
}

Region l1_sphere(const Point& center, Coord radius) {
  if (radius < 0) throw std::invalid_argument("sphere radius must be >= 0");
  std::vector<Point> out;
  Point cur = center;
  ball_rec(0, radius, cur, center.dim(), out, true);
  return Region(center.dim(), std::move(out));
}

namespace {

unsigned __int128 binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<unsigned __int128>(n - k + i) / i;
  return r;
}

}  // namespace

std::uint64_t sphere_count(int d, std::int64_t n) {
  check_dim(d);
  if (n < 1) throw std::invalid_argument("sphere_count needs n >= 1");
  unsigned __int128 s = 0;
  for (int k = 0; k <= d - 1; ++k) {
    s += (static_cast<unsigned __int128>(1) << (d - k)) * binom(d, k) * binom(n - 1, d - k - 1);
  }
  if (s > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("sphere_count overflow");
  return static_cast<std::uint64_t>(s);
}

std::uint64_t ball_count(int d, std::int64_t radius) {
  if (radius < 0) throw std::invalid_argument("ball radius must be >= 0");
  std::uint64_t s = 1;
  for (std::int64_t n = 1; n <= radius; ++n) s += sphere_count(d, n);
  return s;
}

Coord diameter(const Region& r) {
  if (r.empty()) throw std::invalid_argument("diameter of empty region");
  const int d = r.dim();
  Coord best = 0;
  // s and -s give the same spread, so fix the sign of the first axis.
  for (unsigned mask = 0; mask < (1u << (d - 1)); ++mask) {
    Coord lo = std::numeric_limits<Coord>::max();
    Coord hi = std::numeric_limits<Coord>::min();
    for (const auto& p : r) {
      Coord v = p[0];
      for (int i = 1; i < d; ++i) v += (mask >> (i - 1) & 1u) ? -p[i] : p[i];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    best = std::max(best, hi - lo);
  }
  return best;
}

bool Box::contains(const Point& p) const {
  for (int i = 0; i < lo.dim(); ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

std::size_t Box::volume() const {
  std::size_t v = 1;
  for (int i = 0; i < lo.dim(); ++i) v *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
  return v;
}

Box bounding_box(const Region& r) {
  if (r.empty()) throw std::invalid_argument("bounding box of empty region");
  Box b{r[0], r[0]};
  for (const auto& p : r)
    for (int i = 0; i < r.dim(); ++i) {
      b.lo[i] = std::min(b.lo[i], p[i]);
      b.hi[i] = std::max(b.hi[i], p[i]);
    }
  return b;
}

Box inflate(const Box& b, Coord by) {
  Box o = b;
  for (int i = 0; i < b.lo.dim(); ++i) {
    o.lo[i] -= by;
    o.hi[i] += by;
  }
  return o;
}

BoxIndexer::BoxIndexer(const Box& b) : box_(b) {
  const int d = b.lo.dim();
  size_ = 1;
  for (int i = d - 1; i >= 0; --i) {
    extent_[i] = b.hi[i] - b.lo[i] + 1;
    stride_[i] = size_;
    size_ *= static_cast<std::size_t>(extent_[i]);
  }
}

std::size_t BoxIndexer::index(const Point& p) const {
  std::size_t idx = 0;
  for (int i = 0; i < box_.lo.dim(); ++i)
    idx += static_cast<std::size_t>(p[i] - box_.lo[i]) * stride_[i];
  return idx;
}

Point BoxIndexer::point(std::size_t idx) const {
  Point p(box_.lo.dim());
  for (int i = 0; i < box_.lo.dim(); ++i) {
    p[i] = box_.lo[i] + static_cast<Coord>(idx / stride_[i]);
    idx %= stride_[i];
  }
  return p;
}

std::vector<Point> neighbors(const Point& p) {
  std::vector<Point> out;
  out.reserve(2 * static_cast<std::size_t>(p.dim()));
  for (int i = 0; i < p.dim(); ++i) {
    Point q = p;
    q[i] -= 1;
    out.push_back(q);
    q[i] += 2;
    out.push_back(q);
  }
  return out;
}

Region inner_boundary(const Region& r) {
  std::vector<Point> out;
  for (const auto& p : r) {
    for (const auto& q : neighbors(p))
      if (!r.contains(q)) {
        out.push_back(p);
        break;
      }
  }
  return r.dim() ? Region(r.dim(), std::move(out)) : Region();
}

std::vector<Edge> edge_boundary(const Region& r) {
  std::vector<Edge> out;
  for (const auto& p : r)
    for (const auto& q : neighbors(p))
      if (!r.contains(q)) out.push_back({p, q});
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t edge_boundary_size(const Region& r) {
  std::size_t n = 0;
  for (const auto& p : r)
    for (const auto& q : neighbors(p))
      if (!r.contains(q)) ++n;
  return n;
}

std::vector<Region> connected_components(const Region& r) {
  std::vector<Region> out;
  if (r.empty()) return out;
  std::vector<int> comp(r.size(), -1);
  int next = 0;
  for (std::size_t s = 0; s < r.size(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<Point> members;
    std::deque<std::size_t> q{s};
    comp[s] = next;
    while (!q.empty()) {
      std::size_t i = q.front();
      q.pop_front();
      members.push_back(r[i]);
      for (const auto& nb : neighbors(r[i])) {
        auto j = r.index_of(nb);
        if (j >= 0 && comp[static_cast<std::size_t>(j)] < 0) {
          comp[static_cast<std::size_t>(j)] = next;
          q.push_back(static_cast<std::size_t>(j));
        }
      }
    }
    ++next;
    out.emplace_back(r.dim(), std::move(members));
  }
  return out;
}

ComplementComponents::ComplementComponents(const Region& r, Coord halo) : region_(r) {
  if (halo < 1) throw std::invalid_argument("halo must be >= 1");
  if (r.empty()) return;
  box_ = inflate(bounding_box(r), halo);
  BoxIndexer ix(box_);
  const int d = r.dim();
  labels_.assign(ix.size(), -2);
  for (const auto& p : r) labels_[ix.index(p)] = -1;

  auto flood = [&](std::size_t seed, int lab, std::vector<Point>* members) {
    std::vector<std::size_t> stack{seed};
    labels_[seed] = lab;
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      Point p = ix.point(i);
      if (members) members->push_back(p);
      for (int a = 0; a < d; ++a) {
        for (int s : {-1, 1}) {
          Coord c = p[a] + s;
          if (c < box_.lo[a] || c > box_.hi[a]) continue;
          std::size_t j = s < 0 ? i - ix.stride(a) : i + ix.stride(a);
          if (labels_[j] == -2) {
            labels_[j] = lab;
            stack.push_back(j);
          }
        }
      }
    }
  };

  // The box border lies outside the halo, hence in the unbounded component,
  // and the border is connected, so one seed per border cell suffices.
  for (std::size_t i = 0; i < ix.size(); ++i) {
    if (labels_[i] != -2) continue;
    Point p = ix.point(i);
    bool border = false;
    for (int a = 0; a < d && !border; ++a) border = p[a] == box_.lo[a] || p[a] == box_.hi[a];
    if (border) flood(i, 0, nullptr);
  }
  // Row-major order visits points lexicographically, so components come out
  // ordered by smallest point.
  for (std::size_t i = 0; i < ix.size(); ++i) {
    if (labels_[i] != -2) continue;
    std::vector<Point> members;
    flood(i, static_cast<int>(bounded_.size()) + 1, &members);
    bounded_.emplace_back(d, std::move(members));
  }
}

int ComplementComponents::label(const Point& p) const {
  if (region_.empty()) return 0;
  if (!box_.contains(p)) return 0;
  BoxIndexer ix(box_);
  return labels_[ix.index(p)];
}

VolumeInterior volume_and_interior(const Region& r, Coord halo) {
  VolumeInterior vi;
  vi.volume = r;
  vi.interior = Region(r.dim());
  if (r.empty()) return vi;
  ComplementComponents cc(r, halo);
  std::vector<Point> hole;
  for (const auto& h : cc.bounded()) hole.insert(hole.end(), h.begin(), h.end());
  vi.interior = Region(r.dim(), std::move(hole));
  vi.volume = set_union(r, vi.interior);
  return vi;
}

Region square_window(int dim, Coord side) {
  check_dim(dim);
  if (side < 1) throw std::invalid_argument("window side must be >= 1");
  Box b{Point(dim), Point(dim)};
  for (int i = 0; i < dim; ++i) {
    b.lo[i] = -((side - 1) / 2);
    b.hi[i] = b.lo[i] + side - 1;
  }
  BoxIndexer ix(b);
  std::vector<Point> pts;
  pts.reserve(ix.size());
  for (std::size_t i = 0; i < ix.size(); ++i) pts.push_back(ix.point(i));
  return Region(dim, std::move(pts));
}

Box cube_box(const Cube& c) {
  if (c.scale < 0) throw std::invalid_argument("cube scale must be >= 0");
  if (c.scale == 0) return {c.index, c.index};
  if (c.scale > 60) throw std::overflow_error("cube scale too large");
  const Coord h = Coord{1} << (c.scale - 1);
  Box b{c.index, c.index};
  for (int i = 0; i < c.index.dim(); ++i) {
    b.lo[i] = h * c.index[i] - h;
    b.hi[i] = h * c.index[i] + h;
  }
  return b;
}

Region cube_points(const Cube& c) {
  BoxIndexer ix(cube_box(c));
  std::vector<Point> pts;
  pts.reserve(ix.size());
  for (std::size_t i = 0; i < ix.size(); ++i) pts.push_back(ix.point(i));
  return Region(c.index.dim(), std::move(pts));
}

bool cube_contains(const Cube& c, const Point& p) { return cube_box(c).contains(p); }

std::vector<Cube> cubes_containing(const Point& p, int scale) {
  if (scale < 0) throw std::invalid_argument("cube scale must be >= 0");
  if (scale == 0) return {Cube{0, p}};
  const int d = p.dim();
  const Coord h = Coord{1} << (scale - 1);
  // Per axis: p_i in [h(x-1), h(x+1)] iff x in {q-1, q, q+1} when h | p_i,
  // else x in {q, q+1}, with q = floor(p_i / h).
  std::array<std::array<Coord, 3>, kMaxDim> opts{};
  std::array<int, kMaxDim> nopt{};
  for (int i = 0; i < d; ++i) {
    Coord q = floor_div(p[i], h);
    if (q * h == p[i]) {
      opts[i] = {q - 1, q, q + 1};
      nopt[i] = 3;
    } else {
      opts[i] = {q, q + 1, 0};
      nopt[i] = 2;
    }
  }
  std::vector<Cube> out;
  std::array<int, kMaxDim> ctr{};
  while (true) {
    Point x(d);
    for (int i = 0; i < d; ++i) x[i] = opts[i][ctr[i]];
    out.push_back(Cube{scale, x});
    int a = d - 1;
    while (a >= 0 && ++ctr[a] == nopt[a]) ctr[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

Coord box_distance(const Box& a, const Box& b) {
  Coord s = 0;
  for (int i = 0; i < a.lo.dim(); ++i) {
    if (b.lo[i] > a.hi[i]) s += b.lo[i] - a.hi[i];
    else if (a.lo[i] > b.hi[i]) s += a.lo[i] - b.hi[i];
  }
  return s;
}

Coord cube_distance(const Cube& a, const Cube& b) { return box_distance(cube_box(a), cube_box(b)); }

}  // namespace ctk
