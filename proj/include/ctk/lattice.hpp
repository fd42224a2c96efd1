#pragma once

// Integer lattice geometry on Z^d with the l1 metric.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctk {

inline constexpr int kMaxDim = 6;

using Coord = std::int64_t;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point of Z^d, 1 <= d <= kMaxDim. Unused coordinate slots stay zero so
/// that the defaulted comparison is lexicographic within a dimension.
class Point {
 public:
  Point() = default;
  explicit Point(int dim);
  Point(std::initializer_list<Coord> coords);
  explicit Point(std::span<const Coord> coords);

  int dim() const { return dim_; }
  Coord operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  Coord& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  Point operator-() const;

  friend auto operator<=>(const Point&, const Point&) = default;
  friend bool operator==(const Point&, const Point&) = default;

  std::string str() const;

 private:
  std::int8_t dim_ = 0;
  std::array<Coord, kMaxDim> c_{};
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};

Point unit_vector(int dim, int axis, Coord sign = 1);

/// Finite set of lattice points of a common dimension, kept sorted and
/// deduplicated.
class Region {
 public:
  Region() = default;
  explicit Region(int dim) : dim_(dim) {}
  Region(int dim, std::vector<Point> pts);
  Region(int dim, std::initializer_list<Point> pts);

  int dim() const { return dim_; }
  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  bool contains(const Point& p) const;
  /// Index of p in points(), or -1.
  std::ptrdiff_t index_of(const Point& p) const;

  const std::vector<Point>& points() const { return pts_; }
  auto begin() const { return pts_.begin(); }
  auto end() const { return pts_.end(); }
  const Point& operator[](std::size_t i) const { return pts_[i]; }

  friend bool operator==(const Region&, const Region&) = default;

 private:
  int dim_ = 0;
  std::vector<Point> pts_;
};

Region set_union(const Region& a, const Region& b);
Region set_intersection(const Region& a, const Region& b);
Region set_difference(const Region& a, const Region& b);
bool is_subset(const Region& a, const Region& b);
bool intersects(const Region& a, const Region& b);
Region translate(const Region& a, const Point& t);

Coord l1_norm(const Point& p);
Coord l1_distance(const Point& p, const Point& q);

/// min over pairs of l1 distances; throws on empty input.
Coord set_distance(const Region& a, const Region& b);

Region l1_ball(const Point& center, Coord radius);
Region l1_sphere(const Point& center, Coord radius);

/// Number of integer points with |x|_1 = n in Z^d, n >= 1, by the closed form
/// sum_k 2^{d-k} C(d,k) C(n-1, d-k-1). Terms with d-k-1 > n-1 vanish, so for
/// n < d the sum effectively starts at k = d - n.
std::uint64_t sphere_count(int d, std::int64_t n);
/// |B_R(x)| = 1 + sum_{n<=R} s_d(n).
std::uint64_t ball_count(int d, std::int64_t radius);

/// Maximum pairwise l1 distance. Uses |x-y|_1 = max_s <s, x-y> over sign
/// vectors s, so the cost is O(2^d |Region|).
Coord diameter(const Region& r);

struct Box {
  Point lo;
  Point hi;
  bool contains(const Point& p) const;
  std::size_t volume() const;
};

Box bounding_box(const Region& r);
Box inflate(const Box& b, Coord by);

/// Dense indexing of the points of a box, row-major with the last axis fastest.
class BoxIndexer {
 public:
  explicit BoxIndexer(const Box& b);
  std::size_t size() const { return size_; }
  const Box& box() const { return box_; }
  bool contains(const Point& p) const { return box_.contains(p); }
  std::size_t index(const Point& p) const;
  Point point(std::size_t idx) const;
  std::size_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }
  Coord extent(int axis) const { return extent_[static_cast<std::size_t>(axis)]; }

 private:
  Box box_;
  std::array<std::size_t, kMaxDim> stride_{};
  std::array<Coord, kMaxDim> extent_{};
  std::size_t size_ = 0;
};

/// The 2d nearest neighbours of p.
std::vector<Point> neighbors(const Point& p);

struct Edge {
  Point inside;
  Point outside;
  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// {x in Lambda : dist(x, Lambda^c) = 1}
Region inner_boundary(const Region& r);
/// Nearest-neighbour edges with exactly one endpoint in the region.
std::vector<Edge> edge_boundary(const Region& r);
std::size_t edge_boundary_size(const Region& r);

/// Nearest-neighbour connected components ordered by their smallest point.
std::vector<Region> connected_components(const Region& r);

struct VolumeInterior {
  Region volume;    // complement of the unbounded component of Lambda^c
  Region interior;  // volume minus Lambda
};

/// The unbounded complement component is found by flood fill from the border
/// of the bounding box inflated by `halo` (>= 1).
VolumeInterior volume_and_interior(const Region& r, Coord halo = 2);

/// Label of the complement component containing each queried point: 0 for
/// the unbounded component, k >= 1 for the k-th bounded one (ordered by
/// smallest point), -1 for points of the region itself.
class ComplementComponents {
 public:
  explicit ComplementComponents(const Region& r, Coord halo = 2);
  int label(const Point& p) const;
  std::size_t bounded_count() const { return bounded_.size(); }
  const std::vector<Region>& bounded() const { return bounded_; }

 private:
  Region region_;
  Box box_;
  std::vector<int> labels_;
  std::vector<Region> bounded_;
};

/// C_n(x) = prod_i [2^{n-1} x_i - 2^{n-1}, 2^{n-1} x_i + 2^{n-1}] for n >= 1,
/// C_0(x) = {x}. Side length 2^n, so neighbouring cubes overlap in a face.
struct Cube {
  int scale = 0;
  Point index;
  friend auto operator<=>(const Cube&, const Cube&) = default;
  friend bool operator==(const Cube&, const Cube&) = default;
};

Box cube_box(const Cube& c);
Region cube_points(const Cube& c);
bool cube_contains(const Cube& c, const Point& p);
/// All scale-n cubes containing p, sorted by index.
std::vector<Cube> cubes_containing(const Point& p, int scale);
/// l1 distance between the point sets of two cubes.
Coord cube_distance(const Cube& a, const Cube& b);
Coord box_distance(const Box& a, const Box& b);

/// Window [-(L-1)/2, ...]^d of side L; for odd L it is centred at the origin.
Region square_window(int dim, Coord side);

}  // namespace ctk
