#include <gtest/gtest.h>

#include <random>

#include "ctk/cover.hpp"
#include "ctk/multiscale.hpp"
#include "support/generators.hpp"

using namespace ctk;

namespace {

bool covers(const Cover& c, const Region& r) {
  for (const auto& p : r) {
    bool hit = false;
    for (const auto& q : c.cubes) hit = hit || cube_contains(q, p);
    if (!hit) return false;
  }
  return true;
}

// Smallest cover by branching on the first uncovered point over the cubes
// containing it.
void brute_rec(const Region& r, int scale, std::vector<Cube>& chosen, std::size_t& best) {
  if (chosen.size() >= best) return;
  const Point* open = nullptr;
  for (const auto& p : r) {
    bool hit = false;
    for (const auto& q : chosen) hit = hit || cube_contains(q, p);
    if (!hit) {
      open = &p;
      break;
    }
  }
  if (!open) {
    best = chosen.size();
    return;
  }
  for (const auto& c : cubes_containing(*open, scale)) {
    chosen.push_back(c);
    brute_rec(r, scale, chosen, best);
    chosen.pop_back();
  }
}

std::size_t brute_cover(const Region& r, int scale) {
  std::size_t best = r.size() + 1;
  std::vector<Cube> chosen;
  brute_rec(r, scale, chosen, best);
  return best;
}

}  // namespace

TEST(Cover, ScaleZeroIsThePointSet) {
  Region r(2, {Point{0, 0}, Point{3, 1}});
  const auto c = minimal_cover(r, 0);
  EXPECT_EQ(c.cubes.size(), 2u);
  EXPECT_TRUE(c.exact);
}

TEST(Cover, OneCubeForNearbyPoints) {
  Region r(2, {Point{0, 0}, Point{1, 1}, Point{2, 0}});
  EXPECT_EQ(minimal_cover_size(r, 1), 1u);  // C_1((1,0)) spans [0,2] x [-1,1]
  EXPECT_EQ(minimal_cover_size(r, 2), 1u);
}

TEST(Cover, MatchesBruteForceOnSmallSets) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 60; ++t) {
    std::vector<Point> pts;
    const std::size_t n = 2 + testsupport::pick(rng, 5);
    for (std::size_t i = 0; i < n; ++i)
      pts.push_back(Point{static_cast<Coord>(testsupport::pick(rng, 9)), static_cast<Coord>(testsupport::pick(rng, 9))});
    const Region r(2, pts);
    for (int s = 1; s <= 2; ++s) {
      const auto c = minimal_cover(r, s);
      EXPECT_TRUE(covers(c, r));
      EXPECT_TRUE(c.exact);
      const std::size_t brute = brute_cover(r, s);
      EXPECT_EQ(c.cubes.size(), brute);
      EXPECT_EQ(static_cast<std::size_t>(small_cover_size(r.points(), s)), brute);
    }
  }
}

TEST(Cover, GreedyIsAnUpperBound) {
  std::mt19937_64 rng(8);
  CoverOptions g;
  g.mode = CoverMode::Greedy;
  for (int t = 0; t < 40; ++t) {
    const auto r = testsupport::random_connected_region(2, 10 + testsupport::pick(rng, 60), rng);
    for (int s = 1; s <= 3; ++s) {
      const auto ex = minimal_cover(r, s);
      const auto gr = minimal_cover(r, s, g);
      EXPECT_TRUE(covers(gr, r));
      EXPECT_LE(ex.cubes.size(), gr.cubes.size());
    }
  }
}

TEST(Cover, ExactModeRefusesWhenBudgetTooSmall) {
  std::mt19937_64 rng(2);
  const auto r = testsupport::random_connected_region(2, 200, rng);
  CoverOptions o;
  o.mode = CoverMode::Exact;
  o.node_budget = 1;
  o.max_exact_points = 4;
  EXPECT_THROW(minimal_cover(r, 1, o), CoverRefused);
  o.mode = CoverMode::Auto;
  const auto c = minimal_cover(r, 1, o);
  EXPECT_FALSE(c.exact);
  EXPECT_TRUE(covers(c, r));
}
