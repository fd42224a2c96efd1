#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ctk/peierls.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace ctk;

namespace {

struct Point_ {
  ModelParams p;
  ContourParams cp;
  PeierlsConstants pc;
  const nlohmann::json* values;
};

Point_ load_point(const nlohmann::json& entry) {
  const auto& in = entry["input"];
  Point_ out;
  out.p.d = in["d"];
  out.p.alpha = in["alpha"];
  out.p.J = in["J"];
  out.p.delta = in["delta"];
  out.p.h_star = in["h_star"];
  const double eps = in["epsilon"];
  double M = in["M"].is_null() ? 0.0 : in["M"].get<double>();
  if (M <= 0) {
    const auto cp1 = ContourParams::from_model(out.p.d, out.p.alpha, eps, 1.0);
    M = 2.0 * peierls_constants(out.p, cp1, 1.0).M_threshold;
  }
  out.cp = ContourParams::from_model(out.p.d, out.p.alpha, eps, M);
  out.pc = peierls_constants(out.p, out.cp, M);
  out.values = &entry["values"];
  return out;
}

double rel(double got, double want) { return want == 0 ? std::fabs(got) : std::fabs(got / want - 1); }

ModelParams p23() {
  ModelParams p;
  p.d = 2;
  p.alpha = 3;
  return p;
}

}  // namespace

TEST(Peierls, ConstantsAgainstOracle) {
  for (const auto& e : testsupport::oracle()["points"]) {
    const auto pt = load_point(e);
    const auto& v = *pt.values;
    auto want = [&](const char* k) { return testsupport::oracle_value(v[k]); };
    EXPECT_LT(rel(pt.pc.c_alpha, want("c_alpha")), 1e-12);
    EXPECT_LT(rel(pt.pc.k_alpha_1, want("k_alpha_1")), 1e-12);
    EXPECT_LT(rel(pt.pc.M1, want("M1")), 1e-12);
    EXPECT_LT(rel(pt.pc.M2, want("M2")), 1e-12);
    EXPECT_LT(rel(pt.pc.M_threshold, want("M_threshold")), 1e-12);
    EXPECT_LT(rel(pt.pc.c2, want("c2")), 1e-12);
    EXPECT_LT(rel(pt.pc.c3, want("c3")), 1e-12);
    EXPECT_LT(rel(pt.pc.c4, want("c4")), 1e-12);
    EXPECT_LT(rel(pt.pc.K_alpha, want("K_alpha")), 1e-12);
    EXPECT_LT(rel(pt.pc.c5, want("trunc_c5")), 1e-12);
    const auto ec = entropy_constants(pt.p.d, pt.cp);
    EXPECT_LT(rel(ec.kappa, want("kappa")), 1e-12);
    EXPECT_LT(rel(ec.c1, want("c1")), 1e-12);
    if (pt.pc.c2 > 0)
      EXPECT_LT(rel(peierls_beta_c(pt.pc, ec.c1), want("beta_c")), 1e-12);
    else  // M below threshold: no finite beta_c
      EXPECT_THROW(peierls_beta_c(pt.pc, ec.c1), std::invalid_argument);
    if (!(pt.pc.c2 > 0 && pt.pc.c3 > 0)) {
      EXPECT_THROW(truncation_radius(pt.p, pt.pc), std::invalid_argument);
      continue;
    }
    const auto tr = truncation_radius(pt.p, pt.pc);
    EXPECT_LT(rel(tr.R0, want("trunc_R0")), 1e-12);
    EXPECT_LT(rel(tr.R1, want("trunc_R1")), 1e-12);
    EXPECT_LT(rel(tr.R2, want("trunc_R2")), 1e-12);
    EXPECT_LT(rel(tr.R, want("trunc_R")), 1e-12);
    if (v.contains("trunc_h_star_max")) {
      EXPECT_TRUE(tr.critical);
      EXPECT_LT(rel(tr.h_star_max, want("trunc_h_star_max")), 1e-12);
    }
  }
}

TEST(Peierls, LargeMLimit) {
  const auto p = p23();
  const auto cp = ContourParams::from_model(2, 3, 0.5, 1e300);
  const auto pc = peierls_constants(p, cp, 1e300);
  EXPECT_NEAR(pc.c2, pc.J * pc.c_alpha / (5 * 8.0), 1e-14);
  EXPECT_TRUE(pc.above_threshold);
  EXPECT_TRUE(pc.positive);
}

TEST(Peierls, ThresholdIsStrict) {
  const auto p = p23();
  const auto cp = ContourParams::from_model(2, 3, 0.5, 1.0);
  const double thr = peierls_constants(p, cp, 1.0).M_threshold;
  EXPECT_FALSE(peierls_constants(p, cp, thr).above_threshold);
  EXPECT_TRUE(peierls_constants(p, cp, thr * (1 + 1e-12)).above_threshold);
  EXPECT_FALSE(peierls_constants(p, cp, 10.0).positive);
}

TEST(Peierls, SingleFlipCost) {
  const auto p = p23();
  const auto cp = ContourParams::from_model(2, 3, 0.5, 2.0);
  SpinConfiguration s(square_window(2, 5), -1, -1);
  s.set(Point{0, 0}, 1);
  const auto G = extract_contours(s, cp);
  ASSERT_EQ(G.size(), 1u);
  const double want = testsupport::oracle_value(testsupport::oracle()["misc"]["single_flip_cost_2_3"]);
  EXPECT_NEAR(energy_cost(s, G[0], p, cp), want, 1e-11);
  EXPECT_EQ(energy_cost(erase(s, G[0]), G[0], p, cp), 0.0);
}

TEST(Peierls, CostIsHamiltonianDifference) {
  auto p = p23();
  p.h_star = 0.3;
  const auto cp = ContourParams::from_model(2, 3, 0.5, 1.0);
  for (int t = 0; t < 10; ++t) {
    const auto s = random_configuration(square_window(2, 8), 0.15, 300 + t);
    for (const auto& g : extract_contours(s, cp))
      for (auto mode : {FieldMode::zero(), FieldMode::full()}) {
        const double direct = hamiltonian(s, p, mode) - hamiltonian(erase(s, g), p, mode);
        EXPECT_NEAR(energy_cost(s, g, p, cp, mode), direct, 1e-9 * (1 + std::fabs(direct)));
      }
  }
}

TEST(Peierls, NotAContourIsRejected) {
  const auto p = p23();
  const auto cp = ContourParams::from_model(2, 3, 0.5, 1.0);
  SpinConfiguration s(square_window(2, 9), -1, -1);
  s.set(Point{0, 0}, 1);
  s.set(Point{3, 3}, 1);
  auto G = extract_contours(s, ContourParams::from_model(2, 3, 0.5, 0.2));
  ASSERT_EQ(G.size(), 2u);
  // At larger M the two flips merge into one contour; a single one is not.
  EXPECT_THROW(energy_cost(s, G[0], p, ContourParams::from_model(2, 3, 0.5, 100.0)), NotAContour);
}

TEST(Peierls, LowerBoundAboveThreshold) {
  const auto p = p23();
  const auto cp1 = ContourParams::from_model(2, 3, 0.5, 1.0);
  const double M = 2 * peierls_constants(p, cp1, 1.0).M_threshold;
  const auto cp = ContourParams::from_model(2, 3, 0.5, M);
  const auto pc = peierls_constants(p, cp, M);
  ASSERT_TRUE(pc.positive);
  for (int t = 0; t < 12; ++t) {
    const auto s = random_configuration(square_window(2, 6 + t % 5), t % 2 ? 0.05 : 0.3, 40 + t);
    for (const auto& g : extract_contours(s, cp)) EXPECT_GE(energy_cost(s, g, p, cp), energy_lower_bound(g, pc, p));
  }
}

TEST(Peierls, TriangleBound) {
  std::mt19937_64 rng(99);
  for (double alpha : {2.5, 3.0, 4.0}) {
    ModelParams p;
    p.alpha = alpha;
    for (int t = 0; t < 3000; ++t) {
      const Point x{static_cast<Coord>(testsupport::pick(rng, 41)) - 20, static_cast<Coord>(testsupport::pick(rng, 41)) - 20};
      const Point y{static_cast<Coord>(testsupport::pick(rng, 41)) - 20, static_cast<Coord>(testsupport::pick(rng, 41)) - 20};
      if (x == y) continue;
      EXPECT_TRUE(triangle_bound_holds(x, y, p));
    }
  }
}

TEST(Peierls, TruncationEdgeCases) {
  ModelParams p;
  p.alpha = 2.5;
  p.delta = 1;
  p.h_star = 0;
  const auto cp = ContourParams::from_model(2, 2.5, 0.5, 1e200);
  EXPECT_EQ(truncation_radius(p, peierls_constants(p, cp, 1e200)).R, 0.0);
  p.h_star = 0.1;
  const auto tr = truncation_radius(p, peierls_constants(p, cp, 1e200));
  EXPECT_EQ(tr.regime, Truncation::Short);
  EXPECT_TRUE(std::isfinite(tr.R));
  EXPECT_GT(tr.R, 0.0);
  p.delta = 0.3;
  EXPECT_THROW(truncation_radius(p, peierls_constants(p, cp, 1e200)), OutsideRegimes);
  try {
    truncation_radius(p, peierls_constants(p, cp, 1e200));
  } catch (const OutsideRegimes& e) {
    EXPECT_NE(std::string(e.what()).find("Uniqueness?"), std::string::npos);
  }
}

TEST(Peierls, PeierlsSum) {
  const auto p = p23();
  const auto cp = ContourParams::from_model(2, 3, 0.5, 1e200);
  const auto pc = peierls_constants(p, cp, 1e200);
  const double c1 = 3.0;
  const double bc = peierls_beta_c(pc, c1);
  EXPECT_NEAR(peierls_sum(bc, pc, c1), 0.5, 1e-9);
  EXPECT_LT(peierls_sum(bc * 1.01, pc, c1), 0.5);
  EXPECT_GT(peierls_sum(bc * 0.99, pc, c1), 0.5);
  EXPECT_EQ(peierls_sum(0.0, pc, c1), std::numeric_limits<double>::infinity());
  EXPECT_LT(peierls_sum(1e6, pc, c1), 1e-300);
  double prev = peierls_sum(bc, pc, c1);
  for (double f = 1.1; f < 3; f += 0.1) {
    const double cur = peierls_sum(bc * f, pc, c1);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
}

TEST(Peierls, Droplet) {
  ModelParams p;
  p.alpha = 2.5;
  const auto d = droplet_heuristic(p, 5.0, 50);
  EXPECT_LT(d.sum, 1e-3);
  EXPECT_EQ(d.terms.size(), 50u);
  EXPECT_FALSE(d.increasing_tail);
  const auto z = droplet_heuristic(p, 0.0, 10);
  EXPECT_FALSE(z.warning.empty());
  EXPECT_NEAR(z.sum, 1 + 4 + 9 + 16 + 25 + 36 + 49 + 64 + 81 + 100, 1e-9);
  p.delta = 0.2;
  p.h_star = 5;
  EXPECT_TRUE(droplet_heuristic(p, 1.0, 40).increasing_tail);
}

TEST(Peierls, NuOnFiveByFive) {
  auto p = p23();
  const auto w = square_window(2, 5);
  const auto& ref = testsupport::oracle()["misc"]["nu_5x5_2_3"];
  double prev = 1;
  for (auto [beta, key] : {std::pair{0.5, "0.5"}, {1.0, "1"}, {2.0, "2"}}) {
    p.beta = beta;
    const auto nu = nu_exact(w, p, FieldMode::zero());
    EXPECT_EQ(nu.free.size(), 1u);
    const double want = testsupport::oracle_value(ref[key]);
    EXPECT_LT(rel(nu.probability, want), 1e-10) << beta;
    EXPECT_LT(nu.probability, prev);
    prev = nu.probability;
  }
  EXPECT_LT(prev, 0.5);
  p.beta = 0;
  EXPECT_NEAR(nu_exact(w, p, FieldMode::zero()).probability, 0.5, 1e-15);
}

TEST(Peierls, NuDualityAndEmptyFreeRegion) {
  auto p = p23();
  p.beta = 0.3;
  const Region w = square_window(2, 7);
  const double a = nu_exact(w, p, FieldMode::zero(), -1, 1).probability;
  const double b = nu_exact(w, p, FieldMode::zero(), 1, -1).probability;
  EXPECT_NEAR(a, b, 1e-13);
  EXPECT_NEAR(nu_exact(w, p, FieldMode::zero(), -1, -1).probability, 1 - a, 1e-13);
  const auto tiny = nu_exact(square_window(2, 3), p, FieldMode::zero());
  EXPECT_TRUE(tiny.free.empty());
  EXPECT_FALSE(tiny.warning.empty());
  EXPECT_EQ(tiny.probability, 0.0);
}

TEST(Peierls, RestrictedPartitionFunction) {
  auto p = p23();
  p.beta = 0.4;
  const auto w = square_window(2, 3);
  const auto cp = ContourParams::from_model(2, 3, 0.5, 2.0);
  const double full = log_partition_function(w, p, -1, FieldMode::zero());
  EXPECT_NEAR(restricted_log_partition(w, square_window(2, 11), p, FieldMode::zero(), cp), full, 1e-10);
  // Only the all-minus configuration has no contour volume; with an empty
  // allowed region that is the single term.
  const double ground = -p.beta * hamiltonian(SpinConfiguration(w, -1, -1), p, FieldMode::zero());
  EXPECT_NEAR(restricted_log_partition(w, Region(2), p, FieldMode::zero(), cp), ground, 1e-10);
}
