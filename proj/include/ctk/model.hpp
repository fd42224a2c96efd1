#pragma once

// Long-range Ising model with power-law couplings, decaying field and a
// constant exterior boundary condition.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctk/lattice.hpp"

namespace ctk {

struct ModelParams {
  int d = 2;
  double alpha = 3.0;
  double J = 1.0;
  double delta = 1.0;
  double h_star = 0.0;
  double beta = 1.0;
  double tail_tol = 1e-10;

  /// Throws std::invalid_argument on alpha <= d, J <= 0, tail_tol <= 0, ...
  void validate() const;
};

/// J_xy = J |x-y|_1^{-alpha}, 0 on the diagonal.
double coupling(const Point& x, const Point& y, const ModelParams& p);
/// h_x = h* |x|_1^{-delta}, h* at the origin.
double field(const Point& x, const ModelParams& p);
/// h_x for |x|_1 >= R, 0 inside.
double truncated_field(const Point& x, double R, const ModelParams& p);

struct LatticeSum {
  double value = 0;
  double error_bound = 0;
};

/// c_alpha = sum_{y != 0} |y|_1^{-alpha} = sum_n s_d(n) n^{-alpha}.
///
/// s_d(n) is a polynomial sum_j p_j n^j for every n >= 1, so the series is
/// sum_j p_j zeta(alpha - j), evaluated with Boost's zeta. Memoized per
/// (d, alpha); the cache is safe for concurrent use.
LatticeSum lattice_sum_radial(const ModelParams& p);
LatticeSum lattice_sum_radial(int d, double alpha);

/// Partial sum up to shell N with the integral tail bound
/// 2^{2d-1} e^{d-1} (alpha-d)^{-1} N^{d-alpha} as error_bound.
LatticeSum lattice_sum_partial(int d, double alpha, std::int64_t N);

/// Coefficients p_0..p_{d-1} of s_d(n) as a polynomial in n (valid n >= 1).
std::vector<double> sphere_polynomial(int d);

/// J * |r|^{-alpha} for integer distances, cached in a flat table.
class CouplingTable {
 public:
  CouplingTable(double alpha, double J, std::int64_t max_distance);
  double operator()(std::int64_t r) const { return table_[static_cast<std::size_t>(r)]; }
  std::int64_t max_distance() const { return static_cast<std::int64_t>(table_.size()) - 1; }

 private:
  std::vector<double> table_;
};

struct FieldMode {
  enum Kind { Zero, Full, Truncated } kind = Zero;
  double R = 0;  // Truncated only

  static FieldMode zero() { return {Zero, 0}; }
  static FieldMode full() { return {Full, 0}; }
  static FieldMode truncated(double R) { return {Truncated, R}; }
  double at(const Point& x, const ModelParams& p) const;
};

class SpinConfiguration {
 public:
  SpinConfiguration() = default;
  /// All spins equal to `fill`.
  SpinConfiguration(Region window, int boundary, int fill);
  SpinConfiguration(Region window, int boundary, std::vector<std::int8_t> spins);

  const Region& window() const { return window_; }
  int boundary() const { return boundary_; }
  int dim() const { return window_.dim(); }

  /// Spin at any lattice point: the stored value inside, the boundary outside.
  int spin(const Point& p) const;
  void set(const Point& p, int s);
  const std::vector<std::int8_t>& spins() const { return spins_; }
  std::vector<std::int8_t>& spins() { return spins_; }

  friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;

 private:
  Region window_;
  int boundary_ = -1;
  std::vector<std::int8_t> spins_;  // aligned with window_.points()
};

/// Per-site exterior coupling J c_alpha - sum_{y in window, y != x} J_xy, in
/// window order.
std::vector<double> exterior_couplings(const Region& window, const ModelParams& p);

double hamiltonian(const SpinConfiguration& s, const ModelParams& p, FieldMode mode);

/// Sum over unordered pairs {x,y} in Lambda of J_xy, from the integer
/// distance histogram.
double pair_coupling_sum(const Region& r, const ModelParams& p);
/// Histogram of l1 distances over unordered pairs of distinct points.
std::vector<std::uint64_t> distance_histogram(const Region& r);

/// F_Lambda = sum_{x in L, y notin L} J_xy = |L| J c_alpha - 2 sum_pairs J_xy.
double surface_energy(const Region& r, const ModelParams& p);

double field_sum(const Region& r, const ModelParams& p);

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double rss = 0;  // residual sum of squares
};

/// Least squares y = slope x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct BallScaling {
  std::vector<std::int64_t> R;
  std::vector<double> F;      // F_{B_R(0)}
  LineFit loglog;             // log F against log R
  double rss_power = 0;       // log F = log A + (d-1) log R
  double rss_power_log = 0;   // log F = log A + (d-1) log R + log log R
};

/// Surface energy of l1 balls B_R(0) for R in [R_min, R_max] with fits.
BallScaling ball_scaling(const ModelParams& p, std::int64_t R_min, std::int64_t R_max);

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// log Z by exhaustive enumeration (Gray code, incremental energy).
double log_partition_function(const Region& window, const ModelParams& p, int boundary,
                              FieldMode mode, std::size_t cap = 24);
/// exp(log Z); may overflow to inf for large beta * |H|.
double partition_function_exact(const Region& window, const ModelParams& p, int boundary,
                                FieldMode mode, std::size_t cap = 24);

/// Exact single-site magnetizations and mean energy by enumeration.
struct ExactAverages {
  double log_z = 0;
  std::vector<double> mean_spin;  // window order
  std::vector<double> prob_up, prob_down;  // summed separately, no 1 - p cancellation
  double mean_energy = 0;
};
ExactAverages exact_averages(const Region& window, const ModelParams& p, int boundary,
                             FieldMode mode, std::size_t cap = 24);

}  // namespace ctk
