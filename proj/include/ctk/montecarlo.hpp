#pragma once

// Seeded single-spin-flip Metropolis sampler on a square window with the
// exterior interaction folded into a per-site effective field, and scans
// over parameter grids.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "ctk/model.hpp"

namespace ctk {

struct McConfig {
  int L = 8;
  ModelParams p;
  int boundary = -1;
  FieldMode field = FieldMode::full();
  std::int64_t sweeps = 1000;
  std::int64_t burn_in = 100;
  std::uint64_t seed = 1;
  std::int64_t measure_every = 1;
  bool keep_trace = false;

  void validate() const;
};

struct McResult {
  double m_mean = 0;
  double m_abs = 0;
  double chi = 0;       // beta N (<m^2> - <|m|>^2)
  double E_mean = 0;
  double se_m = 0;      // batch-means standard error of m_mean
  double s0_mean = 0;   // spin at the origin
  double se_s0 = 0;
  double acceptance = 0;
  std::int64_t measurements = 0;
  std::vector<double> trace;            // magnetization per measurement
  std::vector<double> effective_fields; // window order
};

/// h_x + boundary * (J c_alpha - sum_{y in window, y != x} J_xy).
double effective_field(const Point& x, const Region& window, const ModelParams& p, int boundary,
                       FieldMode mode = FieldMode::full());
std::vector<double> effective_fields(const Region& window, const ModelParams& p, int boundary,
                                     FieldMode mode = FieldMode::full());

/// splitmix64 finalizer of master + (index+1) * golden gamma.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t index);

/// Chain state with incrementally maintained local fields.
class Sampler {
 public:
  Sampler(const Region& window, const ModelParams& p, int boundary, FieldMode mode, int fill = 0);

  const Region& window() const { return window_; }
  std::size_t size() const { return spins_.size(); }
  const std::vector<std::int8_t>& spins() const { return spins_; }
  const std::vector<double>& fields() const { return b_; }
  void set_spins(const std::vector<std::int8_t>& s);

  double coupling(std::size_t i, std::size_t j) const { return kernel_[center_ + off_[j] - off_[i]]; }
  /// H(after) - H(before) for flipping site i.
  double delta_h(std::size_t i) const { return 2.0 * spins_[i] * (loc_[i] + b_[i]); }
  void flip(std::size_t i);
  /// Energy from scratch.
  double energy() const;
  double magnetization() const;
  /// min(1, exp(-beta dH)).
  double acceptance_probability(double dH) const;

  /// One sweep of N random-site proposals; returns accepted flips.
  std::int64_t sweep(std::mt19937_64& rng);

 private:
  Region window_;
  double beta_;
  std::vector<double> kernel_;
  std::int64_t center_ = 0;
  std::vector<std::int64_t> off_;
  std::vector<double> b_;
  std::vector<double> loc_;
  std::vector<std::int8_t> spins_;
  std::int64_t sum_ = 0;
};

/// Uniform double in [0,1) from the top 53 bits.
double u01(std::mt19937_64& rng);

McResult run(const McConfig& cfg);

struct ScanPoint {
  McConfig cfg;
  McResult result;
};

/// Runs every config with seed child_seed(master_seed, index), in parallel
/// over points. Worker count is min(threads, points), and CTK_THREADS caps it.
std::vector<ScanPoint> scan(std::vector<McConfig> grid, std::uint64_t master_seed, unsigned threads = 0);

/// Grid over (beta, delta) from a template config, beta-major.
std::vector<McConfig> beta_delta_grid(const McConfig& tmpl, const std::vector<double>& betas,
                                      const std::vector<double>& deltas);

std::string scan_csv_header();
void write_scan_csv(std::ostream& os, const std::vector<ScanPoint>& pts);

}  // namespace ctk
