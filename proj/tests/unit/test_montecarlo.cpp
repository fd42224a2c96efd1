#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ctk/montecarlo.hpp"
#include "support/oracle.hpp"

using namespace ctk;

namespace {

McConfig base() {
  McConfig c;
  c.L = 3;
  c.p.alpha = 2.5;
  c.p.h_star = 0.2;
  c.p.delta = 1;
  c.p.beta = 0.5;
  c.sweeps = 2000;
  c.burn_in = 200;
  return c;
}

}  // namespace

TEST(MonteCarlo, EffectiveFieldOfSingleSite) {
  ModelParams p;
  p.alpha = 3;
  const Region one(2, {Point{0, 0}});
  const double ca = testsupport::oracle_value(testsupport::oracle()["misc"]["c_alpha_2_3"]);
  EXPECT_NEAR(effective_field(Point{0, 0}, one, p, -1, FieldMode::zero()), -ca, 1e-12);
  EXPECT_NEAR(effective_field(Point{0, 0}, one, p, 1, FieldMode::zero()), ca, 1e-12);
  const auto w = square_window(2, 5);
  const auto f = effective_fields(w, p, -1, FieldMode::zero());
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_NEAR(f[i], effective_field(w[i], w, p, -1, FieldMode::zero()), 1e-10);
    Point mirror = w[i];
    mirror[0] = -mirror[0];
    EXPECT_NEAR(f[i], f[static_cast<std::size_t>(w.index_of(mirror))], 1e-12);
  }
}

TEST(MonteCarlo, DeltaHMatchesEnergyDifference) {
  auto c = base();
  c.L = 6;
  Sampler s(square_window(2, c.L), c.p, -1, FieldMode::full());
  std::mt19937_64 rng(5);
  for (int t = 0; t < 400; ++t) {
    const std::size_t i = rng() % s.size();
    const double before = s.energy();
    const double dH = s.delta_h(i);
    s.flip(i);
    EXPECT_NEAR(s.energy() - before, dH, 1e-10);
  }
}

TEST(MonteCarlo, SamplerEnergyAgreesWithHamiltonian) {
  auto c = base();
  const auto w = square_window(2, 4);
  Sampler s(w, c.p, -1, FieldMode::full());
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    s.sweep(rng);
    const SpinConfiguration cfg(w, -1, s.spins());
    const double H = hamiltonian(cfg, c.p, FieldMode::full());
    // The sampler drops the constant exterior-exterior part only.
    const double ref = hamiltonian(SpinConfiguration(w, -1, -1), c.p, FieldMode::full());
    Sampler m(w, c.p, -1, FieldMode::full());
    EXPECT_NEAR(H - ref, s.energy() - m.energy(), 1e-9);
  }
}

TEST(MonteCarlo, SeedDeterminism) {
  auto c = base();
  c.p.beta = 0.05;  // hot enough that the chain leaves the minus ground state
  c.keep_trace = true;
  const auto a = run(c);
  const auto b = run(c);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.m_mean, b.m_mean);
  c.seed = 2;
  EXPECT_NE(run(c).trace, a.trace);
}

TEST(MonteCarlo, ScanIsDeterministicAcrossThreadCounts) {
  auto c = base();
  c.sweeps = 300;
  c.burn_in = 50;
  const auto grid = beta_delta_grid(c, {0.2, 0.6}, {0.5, 1.5});
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_EQ(grid[1].p.beta, 0.2);
  EXPECT_EQ(grid[1].p.delta, 1.5);
  const auto one = scan(grid, 42, 1);
  const auto four = scan(grid, 42, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(one[i].cfg.seed, child_seed(42, i));
    EXPECT_EQ(one[i].result.m_mean, four[i].result.m_mean);
  }
  std::ostringstream os;
  write_scan_csv(os, one);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, scan_csv_header());
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(MonteCarlo, InfiniteTemperatureIsFair) {
  auto c = base();
  c.p.beta = 0;
  c.L = 10;
  c.sweeps = 400;
  c.burn_in = 10;
  const auto r = run(c);
  EXPECT_EQ(r.acceptance, 1.0);
  // Each measurement is close to a fresh binomial draw of 100 spins.
  EXPECT_NEAR(r.m_mean, 0.0, 5 * 0.1 / std::sqrt(390.0));
}

TEST(MonteCarlo, MatchesExactEnumerationOnThreeByThree) {
  auto c = base();
  c.sweeps = 60000;
  c.burn_in = 1000;
  const auto w = square_window(2, 3);
  for (double beta : {0.2, 0.8}) {
    c.p.beta = beta;
    const auto ex = exact_averages(w, c.p, -1, FieldMode::full());
    const auto r = run(c);
    const double want = ex.mean_spin[static_cast<std::size_t>(w.index_of(Point{0, 0}))];
    EXPECT_NEAR(r.s0_mean, want, 3 * r.se_s0 + 1e-3) << beta;
  }
}

TEST(MonteCarlo, ConfigValidation) {
  auto c = base();
  c.burn_in = c.sweeps;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = base();
  c.boundary = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(MonteCarlo, U01Range) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = u01(rng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
