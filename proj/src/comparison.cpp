// hopfsr/comparison.cpp

#include "hopfsr/comparison.hpp"

#include <cmath>

namespace hopfsr {

long floor_inclusive(double x) {
  const double tie = 1e-12 * std::max(1.0, std::abs(x));
  const double c = std::ceil(x);
  if (c - x <= tie) return static_cast<long>(c);
  return static_cast<long>(std::floor(x));
}

double tan_fixed_point(int k) {
  if (k < 1) throw std::invalid_argument("tan_fixed_point: k must be >= 1");
  double lo = k * kPi + 1e-9;
  double hi = k * kPi + 0.5 * kPi - 1e-9;
  // tan(y) - y is negative just past k*pi and blows up to +inf at the pole,
  // so the bracket is valid; plain bisection to 1e-12.
  const auto f = [](double y) { return std::tan(y) - y; };
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

int count_tan_roots(double omega_b, double T) {
  if (!(omega_b > 0.0)) {
    throw std::invalid_argument("count_tan_roots: omega_b must be positive");
  }
  if (!(T > 0.0)) return 0;
  const double sb = std::sqrt(omega_b);
  const double tie = 1e-12 * std::max(1.0, T);
  int count = 0;
  for (int k = 1;; ++k) {
    const double x = 2.0 * tan_fixed_point(k) / sb;
    if (x > T + tie) break;
    ++count;
  }
  return count;
}

long z_function(double omega_b, double omega_c, int d_c, double T) {
  if (!(omega_b > 0.0) || !(omega_c > 0.0) || d_c < 0) {
    throw std::invalid_argument("z_function: bad arguments");
  }
  if (!(T > 0.0)) return 0;
  const long c_block = floor_inclusive(T * std::sqrt(omega_c) / kPi);
  const long b_block = floor_inclusive(T * std::sqrt(omega_b) / (2.0 * kPi));
  return d_c * c_block + b_block + count_tan_roots(omega_b, T);
}

BoundsReport bounds_check(const ConjugateReport& measured, double u0, int n,
                          double T) {
  if (n < 1) throw std::invalid_argument("bounds_check: n < 1");
  if (!measured.u0.has_value()) {
    throw std::invalid_argument(
        "bounds_check: report carries no vertical-momentum provenance");
  }
  if (std::abs(*measured.u0 - u0) > 1e-6) {
    throw std::invalid_argument(
        "bounds_check: report was produced at a different vertical momentum");
  }

  BoundsReport out;
  out.u0 = u0;
  out.T = T;
  out.d_c = 2 * n - 2;
  const double u2 = u0 * u0;
  out.z_lower = z_function(1.0 + u2, 1.0 + 0.25 * u2, out.d_c, T);
  out.z_upper = z_function(4.0 + u2, 4.0 + 0.25 * u2, out.d_c, T);
  out.predicted =
      closed_form_conjugate_times(4.0 + u2, 1.0 + 0.25 * u2, out.d_c, T).total;
  out.measured = measured.total;
  out.pass = out.z_lower <= out.measured && out.measured <= out.z_upper;
  return out;
}

CorollaryIntervals corollary_intervals(double u0, int n) {
  if (n < 1) throw std::invalid_argument("corollary_intervals: n < 1");
  const double u2 = u0 * u0;
  CorollaryIntervals out;
  out.d_c = 2 * n - 2;
  out.conjugate_free_radius = kPi / std::sqrt(4.0 + 0.25 * u2);
  out.at_least_dc_radius = 2.0 * kPi / std::sqrt(4.0 + u2);
  out.at_least_dc1_radius = 2.0 * kPi / std::sqrt(1.0 + u2);
  return out;
}

}  // namespace hopfsr
