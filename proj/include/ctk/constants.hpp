#pragma once

// Closed-form geometric and energetic constants. Everything here is a pure
// function of its arguments so tests can pin exact values.

namespace ctk::constants {

/// c_d = (d-1)^{-(d-1)}, lower sandwich constant for s_d(n) (n >= d).
double c_d(int d);
/// Upper sandwich constant 2^{2d-1} e^{d-1}.
double sphere_upper(int d);
/// C_d = (2^{2d} e^{d-1} / d)^{-1/d}.
double C_d(int d);
/// k_d = C_d / 2, so diam(L) >= k_d |L|^{1/d}.
double k_d(int d);
/// (d / c_d)^{1/d} + 2, the radius factor shared by K_alpha and c_5.
double radius_factor(int d);
/// K_alpha = J c_d (alpha-d)^{-1} ((d/c_d)^{1/d} + 2)^{d-alpha}.
double K_alpha(int d, double alpha, double J);
/// c_5 = h* 2^{2d-1} e^{d-1} (d-delta)^{-1} ((d/c_d)^{1/d} + 2)^{d-delta}, delta < d.
double c5(int d, double delta, double h_star);

/// a = max{(d+1+eps)/(alpha-d), d+1+eps}.
double separation_exponent(int d, double alpha, double epsilon);
/// r = ceil(log2(a+1)) + d + 1.
int scale_stride(int d, double a);

}  // namespace ctk::constants
