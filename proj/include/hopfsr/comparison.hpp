// hopfsr/comparison.hpp
//
// Sturm-type conjugate-point counting: the number of conjugate times in
// (0, T] of the constant-coefficient structural system with frequencies
// (omega_b, omega_c) is
//
//   Z(omega_b, omega_c, d_c, T) = d_c * floor(T sqrt(omega_c) / pi)
//                               + floor(T sqrt(omega_b) / (2 pi))
//                               + #{ roots of tan(sqrt(omega_b) x/2) = sqrt(omega_b) x/2 in (0,T] },
//
// and the curvature pinching 1 <= sec <= 4 squeezes the measured count of a
// unit-speed extremal with vertical momentum u0 between the evaluations at
// (1 + u0^2, 1 + u0^2/4) and (4 + u0^2, 4 + u0^2/4).  The closed-form
// pattern of the actual geometry sits at the mixed point (4 + u0^2,
// 1 + u0^2/4).

#pragma once

#include "hopfsr/jacobi_conjugate.hpp"

namespace hopfsr {

// floor(x) with boundary ties resolved toward the closed endpoint: values
// within 1e-12 (relative) below an integer count as that integer.
long floor_inclusive(double x);

// k-th positive fixed point of the tangent, i.e. the root of tan(y) = y in
// (k pi, k pi + pi/2), bisected to 1e-12.  k >= 1.
double tan_fixed_point(int k);

// Number of roots of tan(sqrt(omega_b) x / 2) = sqrt(omega_b) x / 2 with
// 0 < x <= T (closed endpoint included with the 1e-12 tie rule).
int count_tan_roots(double omega_b, double T);

// The counting function Z above; nondecreasing in every argument.
long z_function(double omega_b, double omega_c, int d_c, double T);

struct BoundsReport {
  double u0 = 0.0;
  double T = 0.0;
  int d_c = 0;
  long z_lower = 0;
  long predicted = 0;   // closed-form pattern at (4 + u0^2, 1 + u0^2/4)
  long measured = 0;
  long z_upper = 0;
  bool pass = false;    // z_lower <= measured <= z_upper
};

// Squeezes a measured conjugate-point report between the comparison counts.
// Throws std::invalid_argument when the report carries no vertical-momentum
// provenance or it differs from u0 by more than 1e-6.
BoundsReport bounds_check(const ConjugateReport& measured, double u0, int n,
                          double T);

// Radii of the guaranteed intervals around t = 0: no conjugate point before
// conjugate_free_radius; at least d_c within (0, at_least_dc_radius]; at
// least d_c + 1 within (0, at_least_dc1_radius].
struct CorollaryIntervals {
  double conjugate_free_radius = 0.0;
  double at_least_dc_radius = 0.0;
  double at_least_dc1_radius = 0.0;
  int d_c = 0;
};

CorollaryIntervals corollary_intervals(double u0, int n);

}  // namespace hopfsr
