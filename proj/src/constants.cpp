#include "ctk/constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctk::constants {

double c_d(int d) {
  if (d < 1) throw std::invalid_argument("c_d needs d >= 1");
  if (d == 1) return 1.0;
  return std::pow(static_cast<double>(d - 1), -static_cast<double>(d - 1));
}

double sphere_upper(int d) { return std::pow(2.0, 2 * d - 1) * std::exp(static_cast<double>(d - 1)); }

double C_d(int d) {
  return std::pow(std::pow(2.0, 2 * d) * std::exp(static_cast<double>(d - 1)) / d, -1.0 / d);
}

double k_d(int d) { return C_d(d) / 2.0; }

double radius_factor(int d) { return std::pow(d / c_d(d), 1.0 / d) + 2.0; }

double K_alpha(int d, double alpha, double J) {
  if (!(alpha > d)) throw std::invalid_argument("K_alpha needs alpha > d");
  return J * c_d(d) / (alpha - d) * std::pow(radius_factor(d), d - alpha);
}

double c5(int d, double delta, double h_star) {
  if (!(delta < d)) throw std::invalid_argument("c5 needs delta < d");
  return h_star * sphere_upper(d) / (d - delta) * std::pow(radius_factor(d), d - delta);
}

double separation_exponent(int d, double alpha, double epsilon) {
  if (!(alpha > d)) throw std::invalid_argument("separation exponent needs alpha > d");
  const double num = d + 1 + epsilon;
  return std::max(num / (alpha - d), num);
}

int scale_stride(int d, double a) {
  return static_cast<int>(std::ceil(std::log2(a + 1.0))) + d + 1;
}

}  // namespace ctk::constants
