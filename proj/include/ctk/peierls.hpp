#pragma once

// Energy cost of erasing a contour, the constants of the energy lower bound,
// the field truncation radius, the Peierls sum and exact conditioned
// probabilities on tiny windows.

#include <string>
#include <vector>

#include "ctk/contour.hpp"
#include "ctk/model.hpp"

namespace ctk {

struct PeierlsConstants {
  int d = 2;
  double alpha = 0;
  double J = 0;
  double a = 0;
  int r = 0;
  double M = 0;
  double c_alpha = 0;   // lattice sum, coupling mass per site is J c_alpha
  double k_d = 0;
  double k_alpha_1 = 0;
  double k1_terms[2] = {0, 0};
  double M1 = 0;
  double M2 = 0;
  double M_threshold = 0;  // max{(2^r-1)^{d+1}/k_d^d, M1, M2}
  double c2 = 0, c3 = 0, c4 = 0;
  double K_alpha = 0;
  double c5 = 0;
  double delta_used = 0;  // delta the field bound was evaluated at
  bool above_threshold = false;
  bool positive = false;  // c2, c3, c4 > 0
};

/// Needs d >= 2 and alpha > d. The field constants use delta and h_star from p.
/// For delta >= d the field is dominated by the one with exponent
/// delta_used = (min(alpha-d, 1) + d) / 2 and the bound is taken there.
PeierlsConstants peierls_constants(const ModelParams& p, const ContourParams& cp, double M);

/// H(s) - H(tau_g(s)) with the given field (zero by default), computed
/// incrementally over the flipped sites. Returns 0 when erasing changes
/// nothing. Throws NotAContour when g's support is not among s's contours.
double energy_cost(const SpinConfiguration& s, const Contour& g, const ModelParams& p,
                   const ContourParams& cp, FieldMode mode = FieldMode::zero(),
                   const PartitionOptions& opt = {});

/// c2 |g| + c3 F_{I+} + c4 F_sp.
double energy_lower_bound(const Contour& g, const PeierlsConstants& pc, const ModelParams& p);

/// J_xy >= (2d+1)^{-1} 2^{-alpha} sum_{|x-x'| <= 1} J_{x'y} for x != y.
bool triangle_bound_holds(const Point& x, const Point& y, const ModelParams& p);

class OutsideRegimes : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Truncation {
  enum Regime { Short, Long } regime = Short;  // d<alpha<d+1 / alpha>=d+1
  bool critical = false;    // delta on the line alpha-d (Short) or 1 (Long)
  double delta_used = 0;
  double R0 = 0;            // (4h*/c2)^{1/delta}
  double R1 = 0;            // Short branch
  double R2 = 0;            // Long branch
  double R = 0;
  double c_prime = 0;       // Short: (2c5/(c3 K))^{d/(delta-(alpha-d))}
  double b_alpha = 0;       // Long: (c5/(d c3 K))^{d/(delta-1)}
  double h_star_max = 0;    // critical lines: largest admissible h*
  bool h_star_ok = true;
};

/// Throws OutsideRegimes when delta < min(alpha-d, 1), std::invalid_argument
/// when c2 or c3 is not positive.
Truncation truncation_radius(const ModelParams& p, const PeierlsConstants& pc);

/// sum_{m>=1} x^m with x = exp(c1 + log 2 - beta c2 / 2); +inf when x >= 1.
double peierls_sum(double beta, const PeierlsConstants& pc, double c1);
/// (2/c2)(c1 + log 2 + log 3): the sum is below 1/2 exactly for beta above it.
double peierls_beta_c(const PeierlsConstants& pc, double c1);

struct Droplet {
  double sum = 0;
  std::vector<double> terms;  // R = 1..R_max
  bool increasing_tail = false;
  std::string warning;
};

/// sum_{R=1}^{R_max} R^d exp(-beta (2dJ R^{d-1} + F_{B_R} - sum_{B_R} h)).
Droplet droplet_heuristic(const ModelParams& p, double beta, int R_max);

struct NuExact {
  double probability = 0;
  Region forced;  // union of B_1(x) over the inner boundary, within the window
  Region free;
  std::string warning;
};

/// P(s_0 = event | Theta_x = boundary for x in the inner boundary), with
/// boundary condition `boundary` outside. Sites outside the free region are
/// all equal to `boundary`, so the law of the free sites is the finite-volume
/// measure on the free region alone.
NuExact nu_exact(const Region& window, const ModelParams& p, FieldMode mode, int boundary = -1,
                 int event = 1, std::size_t cap = 24);

/// log of sum over configurations of the window, with boundary -1 outside,
/// whose contour family has all volumes inside `sub`, of exp(-beta H).
double restricted_log_partition(const Region& window, const Region& sub, const ModelParams& p,
                                FieldMode mode, const ContourParams& cp, std::size_t cap = 16);

}  // namespace ctk
