#pragma once

// Total volume over stride-r dyadic scales, tree covers, exhaustive counts
// of bounded-total-volume sets and small contours, entropy constants.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ctk/contour.hpp"
#include "ctk/cover.hpp"
#include "ctk/lattice.hpp"
#include "ctk/model.hpp"

namespace ctk {

class EnumerationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ceil(log_{2^r} diam), with 0 for diam <= 1.
int n_r(const Region& r, int stride);
int n_r_of_diameter(Coord diam, int stride);

struct CoverHierarchy {
  int stride = 1;
  std::vector<Cover> levels;  // level n is a minimal cover at scale stride*n
  bool exact() const;
  std::uint64_t total() const;
};

CoverHierarchy cover_hierarchy(const Region& r, int stride, const CoverOptions& opt = {});

/// V_r = sum_{n=0}^{n_r} |C_{rn}(L)|. Throws CoverRefused unless every level
/// is exact when opt.mode is Exact.
std::uint64_t total_volume(const Region& r, int stride, const CoverOptions& opt = {});

/// Minimal cover size of a set of at most 16 points at one scale, by subset
/// DP over cube-fitting groups. Same value as minimal_cover, much faster.
int small_cover_size(const std::vector<Point>& pts, int scale);
std::uint64_t small_total_volume(const std::vector<Point>& pts, int stride);

struct Graph {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> adj;

  explicit Graph(std::size_t n_ = 0) : n(n_), adj(n_) {}
  void add_edge(std::size_t u, std::size_t v);
  bool connected() const;
  /// Whether the induced subgraph on `verts` is connected.
  bool induced_connected(const std::vector<std::size_t>& verts) const;
};

class DisconnectedGraph : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Covers a connected graph by at most ceil(n/k) connected vertex sets of
/// size at most 2k. Works on a BFS spanning tree rooted at vertex 0: the
/// deepest vertex with at least k descendants donates a block of children
/// whose subtrees total in [k, 2k), and the rest is processed again.
std::vector<std::vector<std::size_t>> tree_cover(const Graph& g, std::size_t k);

/// Number of collections of `child_scale` cubes of size v_target for which
/// `parent` (cubes of one scale) is a minimal cover of their union.
std::uint64_t count_subordinate_covers(const std::vector<Cube>& parent, int child_scale,
                                       std::size_t v_target, std::uint64_t max_subsets = 50000000);

struct FVOptions {
  std::uint64_t max_candidates = 60000000;  // points in the pair search ball
};

/// Sets L containing 0 with V_r(L) = V. Visits each set once, points sorted.
/// Pruning: V_r is monotone under inclusion and V_r(L) >= |L| + n_r(L), so a
/// set of k points has diameter at most 2^{r(V-k)}.
std::uint64_t visit_FV(int V, int d, int stride, const std::function<void(const std::vector<Point>&)>& fn,
                       const FVOptions& opt = {});
std::uint64_t count_FV(int V, int d, int stride, const FVOptions& opt = {});
std::vector<Region> enumerate_FV(int V, int d, int stride, const FVOptions& opt = {});

struct C0Options {
  Coord box_half_width = 3;
  int max_m = 6;
  PartitionOptions partition;
};

struct C0Result {
  std::vector<Region> supports;          // sorted, distinct
  std::uint64_t configurations = 0;      // configurations reaching the leaf check
};

/// Supports of size m with 0 in V(gamma) and exterior label -1, over every
/// configuration of the box (minus outside). The sweep keeps configurations
/// with |boundary| <= m, which is exhaustive when a whole boundary of at most
/// 2^r - 1 points in the box always forms a single part.
C0Result enumerate_contours_C0(int m, int d, const ContourParams& cp, const C0Options& opt = {});

struct EntropyConstants {
  double a = 0;
  int r = 0;
  double M = 0;
  double c = 0;
  double b = 0;
  double n0 = 0;
  double kappa = 0;
  double kappa_terms[3] = {0, 0, 0};
  double c1 = 0;
};

EntropyConstants entropy_constants(int d, const ContourParams& cp);

/// V_r(sp) <= kappa |gamma|.
bool check_kappa(const Contour& g, const EntropyConstants& ec, const CoverOptions& opt = {});

}  // namespace ctk
