#pragma once

// Minimum-cardinality covers of a finite region by dyadic cubes of one scale.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ctk/lattice.hpp"

namespace ctk {

enum class CoverMode {
  Auto,    // exact, falling back to greedy when a component is too large
  Exact,   // exact or throw CoverRefused
  Greedy,  // largest new coverage first, lexicographic tie-break
};

struct CoverOptions {
  CoverMode mode = CoverMode::Auto;
  std::size_t max_exact_points = 512;   // per independent component
  std::uint64_t node_budget = 2000000;  // branch-and-bound nodes per component
};

class CoverRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Cover {
  int scale = 0;
  std::vector<Cube> cubes;  // sorted
  bool exact = true;        // false if any component used the greedy fallback
};

Cover minimal_cover(const Region& r, int scale, const CoverOptions& opt = {});

/// Size of a minimum cover; same as minimal_cover(...).cubes.size().
std::size_t minimal_cover_size(const Region& r, int scale, const CoverOptions& opt = {});

}  // namespace ctk
