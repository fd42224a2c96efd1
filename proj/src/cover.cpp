#include "ctk/cover.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

namespace ctk {

namespace {

using Bits = std::vector<std::uint64_t>;

struct Instance {
  std::size_t n = 0;  // points
  std::size_t words = 0;
  std::vector<Cube> cubes;                   // sorted candidates
  std::vector<Bits> cov;                     // cube -> covered points
  std::vector<std::vector<std::size_t>> of;  // point -> candidate cubes
};

bool test(const Bits& b, std::size_t i) { return b[i >> 6] >> (i & 63) & 1u; }
void set(Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); }

std::size_t popcount(const Bits& b) {
  std::size_t s = 0;
  for (auto w : b) s += static_cast<std::size_t>(std::popcount(w));
  return s;
}

std::size_t popcount_and(const Bits& a, const Bits& b) {
  std::size_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return s;
}

bool subset_of(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

bool none(const Bits& b) {
  for (auto w : b)
    if (w) return false;
  return true;
}

// Drop candidates whose coverage is contained in another candidate's; among
// equal coverages keep the lexicographically smallest cube.
void reduce_dominated(Instance& in) {
  const std::size_t m = in.cubes.size();
  std::vector<std::size_t> cnt(m);
  for (std::size_t c = 0; c < m; ++c) cnt[c] = popcount(in.cov[c]);
  std::vector<bool> keep(m, true);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t e = 0; e < m && keep[c]; ++e) {
      if (e == c || !keep[e] || cnt[e] < cnt[c]) continue;
      if (!subset_of(in.cov[c], in.cov[e])) continue;
      if (cnt[e] > cnt[c] || e < c) keep[c] = false;
    }
  }
  Instance out;
  out.n = in.n;
  out.words = in.words;
  out.of.assign(in.n, {});
  for (std::size_t c = 0; c < m; ++c) {
    if (!keep[c]) continue;
    std::size_t id = out.cubes.size();
    out.cubes.push_back(in.cubes[c]);
    out.cov.push_back(in.cov[c]);
    for (std::size_t p = 0; p < in.n; ++p)
      if (test(in.cov[c], p)) out.of[p].push_back(id);
  }
  in = std::move(out);
}

std::vector<std::size_t> greedy(const Instance& in) {
  Bits unc(in.words, 0);
  for (std::size_t p = 0; p < in.n; ++p) set(unc, p);
  std::vector<std::size_t> chosen;
  while (!none(unc)) {
    std::size_t best = 0, gain = 0;
    for (std::size_t c = 0; c < in.cubes.size(); ++c) {
      std::size_t g = popcount_and(in.cov[c], unc);
      if (g > gain) {
        gain = g;
        best = c;
      }
    }
    chosen.push_back(best);
    for (std::size_t w = 0; w < in.words; ++w) unc[w] &= ~in.cov[best][w];
  }
  return chosen;
}

class BranchAndBound {
 public:
  BranchAndBound(const Instance& in, std::uint64_t budget) : in_(in), budget_(budget) {
    max_cov_ = 1;
    for (const auto& c : in.cov) max_cov_ = std::max(max_cov_, popcount(c));
    // Union of coverages of all candidates of p: points sharing a cube with p.
    reach_.assign(in.n, Bits(in.words, 0));
    for (std::size_t p = 0; p < in.n; ++p)
      for (auto c : in.of[p])
        for (std::size_t w = 0; w < in.words; ++w) reach_[p][w] |= in.cov[c][w];
  }

  // Returns false if the node budget ran out.
  bool run(std::vector<std::size_t> incumbent) {
    best_ = std::move(incumbent);
    Bits unc(in_.words, 0);
    for (std::size_t p = 0; p < in_.n; ++p) set(unc, p);
    std::vector<std::size_t> cur;
    return rec(unc, cur);
  }

  const std::vector<std::size_t>& best() const { return best_; }

 private:
  std::size_t lower_bound(const Bits& unc) const {
    std::size_t rem = popcount(unc);
    std::size_t lb = (rem + max_cov_ - 1) / max_cov_;
    // Points pairwise not sharing any cube each need their own cube.
    Bits blocked(in_.words, 0);
    std::size_t pack = 0;
    for (std::size_t p = 0; p < in_.n; ++p) {
      if (!test(unc, p) || test(blocked, p)) continue;
      ++pack;
      for (std::size_t w = 0; w < in_.words; ++w) blocked[w] |= reach_[p][w];
    }
    return std::max(lb, pack);
  }

  bool rec(const Bits& unc, std::vector<std::size_t>& cur) {
    if (++nodes_ > budget_) return false;
    if (none(unc)) {
      if (cur.size() < best_.size()) best_ = cur;
      return true;
    }
    if (cur.size() + lower_bound(unc) >= best_.size()) return true;

    std::size_t pivot = in_.n, fewest = SIZE_MAX;
    for (std::size_t p = 0; p < in_.n; ++p) {
      if (!test(unc, p)) continue;
      if (in_.of[p].size() < fewest) {
        fewest = in_.of[p].size();
        pivot = p;
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> order;  // (-gain, cube)
    for (auto c : in_.of[pivot]) order.push_back({popcount_and(in_.cov[c], unc), c});
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    Bits next(in_.words);
    for (const auto& [gain, c] : order) {
      for (std::size_t w = 0; w < in_.words; ++w) next[w] = unc[w] & ~in_.cov[c][w];
      cur.push_back(c);
      bool ok = rec(next, cur);
      cur.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  const Instance& in_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::size_t max_cov_ = 1;
  std::vector<Bits> reach_;
  std::vector<std::size_t> best_;
};

struct Dsu {
  std::vector<std::size_t> p;
  explicit Dsu(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Cover minimal_cover(const Region& r, int scale, const CoverOptions& opt) {
  Cover out;
  out.scale = scale;
  if (r.empty()) return out;
  if (scale < 0) throw std::invalid_argument("cover scale must be >= 0");
  if (scale == 0) {
    for (const auto& p : r) out.cubes.push_back(Cube{0, p});
    return out;
  }

  std::map<Cube, std::vector<std::size_t>> cand;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (auto& c : cubes_containing(r[i], scale)) cand[c].push_back(i);

  Dsu dsu(r.size());
  for (const auto& [c, pts] : cand)
    for (std::size_t k = 1; k < pts.size(); ++k) dsu.unite(pts[0], pts[k]);

  std::map<std::size_t, std::vector<std::size_t>> comps;
  for (std::size_t i = 0; i < r.size(); ++i) comps[dsu.find(i)].push_back(i);

  for (const auto& [root, members] : comps) {
    Instance in;
    in.n = members.size();
    in.words = (in.n + 63) / 64;
    in.of.assign(in.n, {});
    std::map<std::size_t, std::size_t> local;
    for (std::size_t k = 0; k < members.size(); ++k) local[members[k]] = k;
    for (const auto& [c, pts] : cand) {
      if (dsu.find(pts[0]) != root) continue;
      Bits b(in.words, 0);
      for (auto gi : pts) set(b, local[gi]);
      in.cubes.push_back(c);
      in.cov.push_back(std::move(b));
    }
    reduce_dominated(in);

    std::vector<std::size_t> pick = greedy(in);
    bool exact = false;
    if (opt.mode != CoverMode::Greedy) {
      if (in.n <= opt.max_exact_points) {
        BranchAndBound bb(in, opt.node_budget);
        if (bb.run(pick)) {
          pick = bb.best();
          exact = true;
        }
      }
      if (!exact && opt.mode == CoverMode::Exact)
        throw CoverRefused("exact cover refused: component of " + std::to_string(in.n) +
                           " points exceeds the search limits");
    }
    out.exact = out.exact && exact;
    for (auto c : pick) out.cubes.push_back(in.cubes[c]);
  }
  std::sort(out.cubes.begin(), out.cubes.end());
  return out;
}

std::size_t minimal_cover_size(const Region& r, int scale, const CoverOptions& opt) {
  return minimal_cover(r, scale, opt).cubes.size();
}

}  // namespace ctk
