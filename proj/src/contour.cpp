#include "ctk/contour.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "ctk/constants.hpp"

namespace ctk {

SpinConfiguration random_configuration(const Region& window, double density, std::uint64_t seed, int boundary) {
  if (!(density >= 0 && density <= 1)) throw std::invalid_argument("density must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<std::int8_t> sp(window.size());
  for (auto& v : sp) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 < density ? 1 : -1;
  return SpinConfiguration(window, boundary, std::move(sp));
}


ContourParams ContourParams::from_model(int d, double alpha, double epsilon, double M) {
  ContourParams cp;
  cp.epsilon = epsilon;
  cp.a = constants::separation_exponent(d, alpha, epsilon);
  cp.r = constants::scale_stride(d, cp.a);
  cp.M = M;
  cp.validate();
  return cp;
}

std::size_t ContourParams::max_family() const { return (std::size_t{1} << r) - 1; }

void ContourParams::validate() const {
  if (!(M > 0)) throw std::invalid_argument("M must be positive");
  if (!(a > 0)) throw std::invalid_argument("a must be positive");
  if (r < 1 || r > 30) throw std::invalid_argument("r must be in [1, 30]");
}

int theta(const SpinConfiguration& s, const Point& x) {
  const int s0 = s.spin(x);
  for (const auto& y : neighbors(x))
    if (s.spin(y) != s0) return 0;
  return s0;
}

namespace {

// Dense spin lookup on the window's bounding box plus a margin.
class SpinGrid {
 public:
  explicit SpinGrid(const SpinConfiguration& s, Coord margin = 2)
      : omega_(s.boundary()), ix_(inflate(bounding_box(s.window()), margin)) {
    vals_.assign(ix_.size(), static_cast<std::int8_t>(omega_));
    const auto& w = s.window();
    for (std::size_t i = 0; i < w.size(); ++i) vals_[ix_.index(w[i])] = s.spins()[i];
  }
  int operator()(const Point& p) const { return ix_.contains(p) ? vals_[ix_.index(p)] : omega_; }

 private:
  int omega_;
  BoxIndexer ix_;
  std::vector<std::int8_t> vals_;
};

}  // namespace

Region boundary(const SpinConfiguration& s) {
  const Region& w = s.window();
  if (w.empty()) return Region(w.dim());
  SpinGrid g(s);
  const Box box = inflate(bounding_box(w), 1);
  BoxIndexer ix(box);
  std::vector<Point> out;
  for (std::size_t i = 0; i < ix.size(); ++i) {
    const Point x = ix.point(i);
    const int s0 = g(x);
    for (const auto& y : neighbors(x))
      if (g(y) != s0) {
        out.push_back(x);
        break;
      }
  }
  return Region(w.dim(), std::move(out));
}

namespace {

double separation_threshold(const ContourParams& cp, int d, int n) {
  return cp.M * std::pow(static_cast<double>(d), cp.a) * std::pow(2.0, cp.a * n);
}

std::vector<std::size_t> graph_components(const std::vector<Cube>& cubes, double thr) {
  const std::size_t k = cubes.size();
  std::vector<std::size_t> comp(k, SIZE_MAX);
  std::vector<Box> boxes;
  boxes.reserve(k);
  for (const auto& c : cubes) boxes.push_back(cube_box(c));
  std::size_t next = 0;
  for (std::size_t s = 0; s < k; ++s) {
    if (comp[s] != SIZE_MAX) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < k; ++v)
        if (comp[v] == SIZE_MAX && static_cast<double>(box_distance(boxes[u], boxes[v])) <= thr) {
          comp[v] = next;
          stack.push_back(v);
        }
    }
    ++next;
  }
  return comp;
}

void sort_parts(PartitionOfBoundary& P) {
  std::sort(P.parts.begin(), P.parts.end(),
            [](const BoundaryPart& x, const BoundaryPart& y) { return x.support[0] < y.support[0]; });
}

double max_diam(const std::vector<Region>& fam) {
  Coord m = 0;
  for (const auto& f : fam) m = std::max(m, diameter(f));
  return static_cast<double>(m);
}

}  // namespace

PartitionOfBoundary build_partition(const Region& boundary_set, const ContourParams& cp,
                                    const PartitionOptions& opt) {
  cp.validate();
  PartitionOfBoundary P;
  Region remaining = boundary_set;
  const int d = boundary_set.dim();
  for (int n = 0; !remaining.empty(); ++n) {
    if (n > 60) throw std::runtime_error("partition construction did not terminate");
    const Cover cov = minimal_cover(remaining, n, opt.cover);
    const auto comp = graph_components(cov.cubes, separation_threshold(cp, d, n));
    const std::size_t ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<std::size_t> csize(ncomp, 0);
    for (auto c : comp) ++csize[c];

    std::map<Cube, std::size_t> where;
    for (std::size_t i = 0; i < cov.cubes.size(); ++i) where.emplace(cov.cubes[i], i);

    // Each point goes to the smallest cover cube containing it.
    std::vector<std::vector<Point>> pieces(cov.cubes.size());
    std::vector<Point> keep;
    for (const auto& p : remaining) {
      std::size_t owner = SIZE_MAX;
      for (const auto& c : cubes_containing(p, n)) {
        auto it = where.find(c);
        if (it != where.end()) {
          owner = it->second;
          break;
        }
      }
      if (owner == SIZE_MAX) throw std::logic_error("cover misses a boundary point");
      if (csize[comp[owner]] <= cp.max_family()) pieces[owner].push_back(p);
      else keep.push_back(p);
    }
    for (std::size_t g = 0; g < ncomp; ++g) {
      if (csize[g] > cp.max_family()) continue;
      BoundaryPart part;
      part.scale = n;
      std::vector<Point> all;
      for (std::size_t i = 0; i < cov.cubes.size(); ++i) {
        if (comp[i] != g || pieces[i].empty()) continue;
        all.insert(all.end(), pieces[i].begin(), pieces[i].end());
        part.witness_family.emplace_back(d, pieces[i]);
      }
      if (all.empty()) continue;
      part.support = Region(d, std::move(all));
      P.parts.push_back(std::move(part));
    }
    remaining = Region(d, std::move(keep));
  }
  sort_parts(P);
  return P;
}

std::string to_string(Violation::Kind k) {
  switch (k) {
    case Violation::NotDisjoint: return "not_disjoint";
    case Violation::UnionMismatch: return "union_mismatch";
    case Violation::SplitByOther: return "condition_A_split";
    case Violation::FamilySize: return "condition_B1_family_size";
    case Violation::FamilyUnion: return "condition_B1_union";
    case Violation::TooClose: return "condition_B2_distance";
  }
  return "unknown";
}

PartitionReport verify_partition(const PartitionOfBoundary& P, const Region& boundary_set,
                                 const ContourParams& cp) {
  PartitionReport rep;
  auto fail = [&](Violation::Kind k, std::size_t i, std::size_t j, std::string msg) {
    rep.ok = false;
    rep.violations.push_back({k, i, j, std::move(msg)});
  };
  const std::size_t m = P.parts.size();

  std::vector<Point> all;
  for (const auto& part : P.parts) all.insert(all.end(), part.support.begin(), part.support.end());
  std::size_t total = all.size();
  Region uni = boundary_set.dim() ? Region(boundary_set.dim(), std::move(all)) : Region();
  if (uni.size() != total) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (intersects(P.parts[i].support, P.parts[j].support))
          fail(Violation::NotDisjoint, i, j, "parts overlap");
  }
  if (!(uni == boundary_set) && !(uni.empty() && boundary_set.empty()))
    fail(Violation::UnionMismatch, 0, 0, "union of parts differs from the boundary");

  std::vector<double> fam_diam(m, 0.0);
  std::vector<Box> boxes;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& part = P.parts[i];
    if (part.support.empty()) {
      fail(Violation::FamilyUnion, i, i, "empty part");
      boxes.push_back(Box{});
      continue;
    }
    boxes.push_back(bounding_box(part.support));
    const auto& fam = part.witness_family;
    if (fam.empty() || fam.size() > cp.max_family())
      fail(Violation::FamilySize, i, i, "family size " + std::to_string(fam.size()));
    Region fu(part.support.dim());
    for (const auto& f : fam) fu = set_union(fu, f);
    if (!(fu == part.support)) fail(Violation::FamilyUnion, i, i, "family union differs from part");
    fam_diam[i] = fam.empty() ? 0.0 : max_diam(fam);
  }

  // (A): every other part inside a single complement component.
  for (std::size_t i = 0; i < m; ++i) {
    if (P.parts[i].support.empty()) continue;
    ComplementComponents cc(P.parts[i].support);
    if (cc.bounded_count() == 0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i || P.parts[j].support.empty()) continue;
      int lab = -2;
      for (const auto& p : P.parts[j].support) {
        int l = cc.label(p);
        if (l < 0) continue;  // overlap, reported above
        if (lab == -2) lab = l;
        else if (l != lab) {
          fail(Violation::SplitByOther, j, i, "part split by the complement of another");
          break;
        }
      }
    }
  }

  // (B2)
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      if (P.parts[i].support.empty() || P.parts[j].support.empty()) continue;
      const double need = cp.M * std::pow(std::min(fam_diam[i], fam_diam[j]), cp.a);
      if (static_cast<double>(box_distance(boxes[i], boxes[j])) > need) continue;
      const Coord dist = set_distance(P.parts[i].support, P.parts[j].support);
      if (!(static_cast<double>(dist) > need))
        fail(Violation::TooClose, i, j,
             "distance " + std::to_string(dist) + " <= " + std::to_string(need));
    }
  return rep;
}

PartitionOfBoundary intersect_partitions(const PartitionOfBoundary& P, const PartitionOfBoundary& Q,
                                         const ContourParams&) {
  auto support_union = [](const PartitionOfBoundary& X) {
    std::vector<Point> all;
    int d = 0;
    for (const auto& part : X.parts) {
      all.insert(all.end(), part.support.begin(), part.support.end());
      d = part.support.dim();
    }
    return d ? Region(d, std::move(all)) : Region();
  };
  const Region up = support_union(P), uq = support_union(Q);
  if (!(up == uq) && !(up.empty() && uq.empty()))
    throw PartitionMismatch("partitions cover different boundary sets");

  auto restrict = [](const std::vector<Region>& fam, const Region& to) {
    std::vector<Region> out;
    for (const auto& f : fam) {
      Region x = set_intersection(f, to);
      if (!x.empty()) out.push_back(std::move(x));
    }
    return out;
  };

  PartitionOfBoundary R;
  for (const auto& a : P.parts)
    for (const auto& b : Q.parts) {
      Region x = set_intersection(a.support, b.support);
      if (x.empty()) continue;
      BoundaryPart part;
      part.scale = std::min(a.scale, b.scale);
      auto fa = restrict(a.witness_family, x);
      auto fb = restrict(b.witness_family, x);
      part.witness_family = max_diam(fb) < max_diam(fa) ? std::move(fb) : std::move(fa);
      part.support = std::move(x);
      R.parts.push_back(std::move(part));
    }
  sort_parts(R);
  return R;
}

bool is_finer(const PartitionOfBoundary& P, const PartitionOfBoundary& Q) {
  for (const auto& a : P.parts) {
    bool found = false;
    for (const auto& b : Q.parts)
      if (is_subset(a.support, b.support)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

namespace {

template <class SpinFn>
int constant_sign(const Region& r, SpinFn&& spin, const char* what) {
  int sign = 0;
  for (const auto& p : r) {
    int s = spin(p);
    if (sign == 0) sign = s;
    else if (s != sign)
      throw LabelError(std::string("configuration is not constant on ") + what);
  }
  if (sign == 0) throw LabelError(std::string("empty ") + what);
  return sign;
}

template <class SpinFn>
Contour make_contour(const BoundaryPart& part, SpinFn&& spin) {
  Contour c;
  c.support = part.support;
  c.witness_family = part.witness_family;
  const int d = part.support.dim();
  const VolumeInterior vi = volume_and_interior(part.support);
  c.label_exterior = constant_sign(inner_boundary(vi.volume), spin, "the inner boundary of V(support)");
  c.interior_components = connected_components(vi.interior);
  std::vector<Point> plus, minus;
  for (const auto& comp : c.interior_components) {
    const Region v = volume_and_interior(comp).volume;
    const int lab = constant_sign(inner_boundary(v), spin, "the inner boundary of an interior component");
    c.interior_labels.push_back(lab);
    auto& dst = lab > 0 ? plus : minus;
    dst.insert(dst.end(), comp.begin(), comp.end());
  }
  c.interior_plus = Region(d, std::move(plus));
  c.interior_minus = Region(d, std::move(minus));
  c.volume = vi.volume;
  c.support_spins.reserve(c.support.size());
  for (const auto& p : c.support) c.support_spins.push_back(static_cast<std::int8_t>(spin(p)));
  return c;
}

}  // namespace

std::vector<Contour> label_and_build_contours(const SpinConfiguration& s, const PartitionOfBoundary& P) {
  std::vector<Contour> out;
  if (P.parts.empty()) return out;
  SpinGrid g(s);
  for (const auto& part : P.parts) out.push_back(make_contour(part, g));
  return out;
}

std::vector<Contour> extract_contours(const SpinConfiguration& s, const ContourParams& cp,
                                      const PartitionOptions& opt) {
  return label_and_build_contours(s, build_partition(boundary(s), cp, opt));
}

std::vector<std::size_t> external_contours(const std::vector<Contour>& G) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < G.size(); ++i) {
    bool inside = false;
    for (std::size_t j = 0; j < G.size() && !inside; ++j)
      if (j != i && intersects(G[i].support, G[j].volume)) inside = true;
    if (!inside) out.push_back(i);
  }
  return out;
}

namespace {

// Points outside the window hold the boundary spin and cannot change.
void assign(SpinConfiguration& w, const Point& p, int v) {
  if (w.window().contains(p)) w.set(p, v);
  else if (v != w.boundary())
    throw NotAContour("erase would change the exterior at " + p.str());
}

// One step of the erase map; interior labels come from the current spins.
void erase_one(SpinConfiguration& w, const Contour& g) {
  for (std::size_t k = 0; k < g.interior_components.size(); ++k) {
    const Region v = volume_and_interior(g.interior_components[k]).volume;
    int lab = 0;
    for (const auto& p : inner_boundary(v)) {
      lab = w.spin(p);
      break;
    }
    if (lab > 0)
      for (const auto& p : g.interior_components[k]) assign(w, p, -w.spin(p));
  }
  for (const auto& p : g.support) assign(w, p, -1);
}

void check_support(const SpinConfiguration& s, const Contour& g) {
  if (g.support_spins.size() != g.support.size()) throw NotAContour("contour has no stored spins");
  for (std::size_t i = 0; i < g.support.size(); ++i)
    if (s.spin(g.support[i]) != g.support_spins[i])
      throw NotAContour("contour support spins do not match the configuration");
}

}  // namespace

SpinConfiguration erase(const SpinConfiguration& s, const Contour& g) {
  if (s.boundary() != -1) throw NotAContour("erase needs the minus boundary condition");
  check_support(s, g);
  SpinConfiguration w = s;
  for (const auto& p : g.interior_plus) assign(w, p, -s.spin(p));
  for (const auto& p : g.support) assign(w, p, -1);
  return w;
}

SpinConfiguration erase(const SpinConfiguration& s, const std::vector<Contour>& G) {
  if (s.boundary() != -1) throw NotAContour("erase needs the minus boundary condition");
  for (const auto& g : G) check_support(s, g);
  std::vector<std::size_t> order(G.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return G[a].volume.size() > G[b].volume.size(); });
  SpinConfiguration w = s;
  for (auto i : order) erase_one(w, G[i]);
  return w;
}

bool verify_erasure(const SpinConfiguration&, const SpinConfiguration& after, const std::vector<Contour>& G) {
  const Region b = boundary(after);
  for (const auto& g : G)
    if (intersects(b, g.support)) return false;
  return true;
}

bool is_compatible(const std::vector<Contour>& G, const Region& window, const ContourParams& cp,
                   const PartitionOptions& opt) {
  if (window.empty()) return G.empty();
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = i + 1; j < G.size(); ++j)
      if (intersects(G[i].support, G[j].support)) return false;
  for (const auto& g : G) {
    if (g.support_spins.size() != g.support.size()) return false;
    if (!is_subset(g.interior(), window)) return false;
    for (std::size_t k = 0; k < g.support.size(); ++k)
      if (!window.contains(g.support[k]) && g.support_spins[k] != -1) return false;
  }

  SpinConfiguration s(window, -1, -1);
  std::vector<std::size_t> order(G.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return G[a].volume.size() > G[b].volume.size(); });
  for (auto i : order) {
    const auto& g = G[i];
    for (std::size_t k = 0; k < g.interior_components.size(); ++k)
      for (const auto& p : g.interior_components[k]) s.set(p, g.interior_labels[k]);
    for (std::size_t k = 0; k < g.support.size(); ++k)
      if (window.contains(g.support[k])) s.set(g.support[k], g.support_spins[k]);
  }

  std::vector<Contour> again;
  try {
    again = extract_contours(s, cp, opt);
  } catch (const LabelError&) {
    return false;
  }
  for (const auto& g : G) {
    bool found = false;
    for (const auto& h : again)
      if (h.support == g.support && h.label_exterior == g.label_exterior &&
          h.interior_labels == g.interior_labels) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace ctk
