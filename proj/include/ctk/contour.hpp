#pragma once

// Incorrect points, (M,a,r)-partitions of the boundary, contours with labels
// and interiors, and the erase map.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctk/cover.hpp"
#include "ctk/lattice.hpp"
#include "ctk/model.hpp"

namespace ctk {

struct ContourParams {
  double M = 1.0;
  double a = 1.0;
  int r = 1;
  double epsilon = 0.5;

  /// a and r from (d, alpha, epsilon); M is taken as given.
  static ContourParams from_model(int d, double alpha, double epsilon, double M);
  std::size_t max_family() const;
  void validate() const;
};

/// Independent spins, +1 with probability `density`, seeded mt19937_64.
SpinConfiguration random_configuration(const Region& window, double density, std::uint64_t seed, int boundary = -1);

/// +1 / -1 if all of B_1(x) carries that sign, else 0.
int theta(const SpinConfiguration& s, const Point& x);

/// Points that are neither + nor - correct. Only points within distance 1 of
/// the window can be incorrect.
Region boundary(const SpinConfiguration& s);

struct BoundaryPart {
  Region support;
  std::vector<Region> witness_family;
  int scale = 0;  // construction scale at which the part was peeled
};

struct PartitionOfBoundary {
  std::vector<BoundaryPart> parts;  // ordered by smallest support point
};

struct PartitionOptions {
  CoverOptions cover;
};

PartitionOfBoundary build_partition(const Region& boundary_set, const ContourParams& cp,
                                    const PartitionOptions& opt = {});

struct Violation {
  enum Kind { NotDisjoint, UnionMismatch, SplitByOther, FamilySize, FamilyUnion, TooClose } kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::string detail;
};

struct PartitionReport {
  bool ok = true;
  std::vector<Violation> violations;
};

std::string to_string(Violation::Kind k);

PartitionReport verify_partition(const PartitionOfBoundary& P, const Region& boundary_set,
                                 const ContourParams& cp);

class PartitionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Nonempty pairwise intersections. Each new part keeps whichever restricted
/// witness family (from P or from Q) has the smaller maximal diameter.
PartitionOfBoundary intersect_partitions(const PartitionOfBoundary& P, const PartitionOfBoundary& Q,
                                         const ContourParams& cp);

/// Every part of P lies inside some part of Q.
bool is_finer(const PartitionOfBoundary& P, const PartitionOfBoundary& Q);

struct Contour {
  Region support;
  std::vector<Region> witness_family;
  int label_exterior = -1;
  std::vector<Region> interior_components;
  std::vector<int> interior_labels;
  Region interior_plus;
  Region interior_minus;
  Region volume;                          // support plus interior
  std::vector<std::int8_t> support_spins;  // spins on support, support order

  std::size_t size() const { return support.size(); }
  Region interior() const { return set_union(interior_plus, interior_minus); }
};

class LabelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<Contour> label_and_build_contours(const SpinConfiguration& s, const PartitionOfBoundary& P);

std::vector<Contour> extract_contours(const SpinConfiguration& s, const ContourParams& cp,
                                      const PartitionOptions& opt = {});

/// Indices of contours whose support does not meet the interior of another.
std::vector<std::size_t> external_contours(const std::vector<Contour>& G);

class NotAContour : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// tau_gamma: support -> -1, I_+ flipped, I_- and the complement of V kept.
/// A family is erased one contour at a time, largest volume first, with the
/// interior labels re-read from the partially erased configuration; for
/// families without nesting this is the same map.
SpinConfiguration erase(const SpinConfiguration& s, const std::vector<Contour>& G);
SpinConfiguration erase(const SpinConfiguration& s, const Contour& g);

/// No point of sp(G) is incorrect after erasure.
bool verify_erasure(const SpinConfiguration& before, const SpinConfiguration& after,
                    const std::vector<Contour>& G);

/// Paints the window from the contours (volumes outer first, supports from
/// the stored spins, interiors from labels, -1 elsewhere), re-extracts, and
/// checks that every contour reappears with the same support and labels.
bool is_compatible(const std::vector<Contour>& G, const Region& window, const ContourParams& cp,
                   const PartitionOptions& opt = {});

}  // namespace ctk
