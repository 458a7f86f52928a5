#include "doctest.h"

#include "hopfsr/comparison.hpp"
#include "hopfsr/sampling.hpp"

#include <cmath>

using namespace hopfsr;

TEST_CASE("inclusive floor resolves boundary ties toward the closed endpoint") {
  CHECK(floor_inclusive(2.5) == 2);
  CHECK(floor_inclusive(3.0) == 3);
  CHECK(floor_inclusive(2.9999999999999) == 3);   // within the 1e-12 tie band
  CHECK(floor_inclusive(2.9999999) == 2);          // outside the tie band
  CHECK(floor_inclusive(0.3) == 0);
  CHECK(floor_inclusive(-0.5) == -1);
}

TEST_CASE("tangent fixed points from bisection") {
  const double y1 = tan_fixed_point(1);
  const double y2 = tan_fixed_point(2);
  CHECK(std::abs(y1 - 4.493409457909064) <= 1e-9);
  CHECK(std::abs(y2 - 7.725251836937707) <= 1e-9);
  CHECK(std::abs(std::tan(y1) - y1) <= 1e-9);
  // Roots approach the poles k pi + pi/2 from below as k grows.
  CHECK(tan_fixed_point(8) > 8.0 * kPi);
  CHECK(tan_fixed_point(8) < 8.0 * kPi + 0.5 * kPi);
}

TEST_CASE("tangent-root counting") {
  CHECK(count_tan_roots(4.0, kPi) == 0);
  CHECK(count_tan_roots(4.0, 4.5) == 1);   // x1 = y1 ~ 4.4934 <= 4.5
  CHECK(count_tan_roots(4.0, 4.49) == 0);
  CHECK(count_tan_roots(4.0, 1e-6) == 0);
  CHECK(count_tan_roots(5.0, 7.0) == 2);   // 2 y1/sqrt5 ~ 4.019, 2 y2/sqrt5 ~ 6.91
}

TEST_CASE("counting function on reference values") {
  CHECK(z_function(4.0, 1.0, 2, kPi) == 3);
  CHECK(z_function(4.0, 1.0, 0, kPi) == 1);
  CHECK(z_function(4.0, 4.0, 2, 3.3) == 5);
  CHECK(z_function(1.0, 1.0, 2, 3.3) == 2);
  CHECK(z_function(4.0, 1.0, 2, 0.5) == 0);
}

TEST_CASE("counting function is nondecreasing in every argument") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const double omega_b = 0.5 + 10.0 * rng.uniform();
    const double omega_c = 0.5 + 10.0 * rng.uniform();
    const int d_c = static_cast<int>(4.0 * rng.uniform());
    const double T = 0.3 + 8.0 * rng.uniform();
    const long base = z_function(omega_b, omega_c, d_c, T);
    CHECK(z_function(omega_b + 0.7, omega_c, d_c, T) >= base);
    CHECK(z_function(omega_b, omega_c + 0.7, d_c, T) >= base);
    CHECK(z_function(omega_b, omega_c, d_c + 1, T) >= base);
    CHECK(z_function(omega_b, omega_c, d_c, T + 0.7) >= base);
  }
}

TEST_CASE("closed-form conjugate pattern totals equal the counting function") {
  for (double u0 : {0.0, 0.5, 1.0, 2.0}) {
    for (int d_c : {0, 2, 4}) {
      for (double T : {1.0, 3.3, 7.0, 11.0}) {
        const double omega_b = 4.0 + u0 * u0;
        const double omega_c = 1.0 + 0.25 * u0 * u0;
        const ConjugateReport rep =
            closed_form_conjugate_times(omega_b, omega_c, d_c, T);
        CHECK(rep.total == z_function(omega_b, omega_c, d_c, T));
      }
    }
  }
}

TEST_CASE("bounds check on the reference configuration") {
  const PhasePoint lambda0 = standard_extremal_start(2, 0, 0.0);
  const ConjugateReport measured = conjugate_times_structural(lambda0, 3.3);
  const BoundsReport br = bounds_check(measured, 0.0, 2, 3.3);
  CHECK(br.d_c == 2);
  CHECK(br.z_lower == 2);
  CHECK(br.z_upper == 5);
  CHECK(br.predicted == 3);
  CHECK(br.measured == 3);
  CHECK(br.pass);
}

TEST_CASE("bounds check demands consistent vertical-momentum provenance") {
  const PhasePoint lambda0 = standard_extremal_start(2, 0, 1.0);
  const ConjugateReport measured = conjugate_times_structural(lambda0, 3.0);
  CHECK_THROWS_AS(bounds_check(measured, 0.5, 2, 3.0), std::invalid_argument);

  // Reports without provenance (raw pattern evaluation) are rejected too.
  const ConjugateReport bare = closed_form_conjugate_times(4.0, 1.0, 2, 3.0);
  CHECK_THROWS_AS(bounds_check(bare, 0.0, 2, 3.0), std::invalid_argument);
}

TEST_CASE("corollary radii") {
  const CorollaryIntervals at0 = corollary_intervals(0.0, 2);
  CHECK(std::abs(at0.conjugate_free_radius - 0.5 * kPi) <= 1e-15);
  CHECK(std::abs(at0.at_least_dc_radius - kPi) <= 1e-15);
  CHECK(std::abs(at0.at_least_dc1_radius - 2.0 * kPi) <= 1e-15);
  CHECK(at0.d_c == 2);

  const CorollaryIntervals at2 = corollary_intervals(2.0, 2);
  CHECK(std::abs(at2.conjugate_free_radius - kPi / std::sqrt(5.0)) <= 1e-15);

  // All radii shrink as |u0| grows.
  double prev_free = 1e300, prev_dc = 1e300, prev_dc1 = 1e300;
  for (double u0 : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const CorollaryIntervals ci = corollary_intervals(u0, 3);
    CHECK(ci.conjugate_free_radius < prev_free + 1e-15);
    CHECK(ci.at_least_dc_radius < prev_dc + 1e-15);
    CHECK(ci.at_least_dc1_radius < prev_dc1 + 1e-15);
    prev_free = ci.conjugate_free_radius;
    prev_dc = ci.at_least_dc_radius;
    prev_dc1 = ci.at_least_dc1_radius;
  }
}

TEST_CASE("measured counts respect the corollary intervals") {
  const PhasePoint lambda0 = standard_extremal_start(2, 0, 1.0);
  const ConjugateReport rep = conjugate_times_structural(lambda0, 7.0);
  const CorollaryIntervals ci = corollary_intervals(1.0, 2);
  REQUIRE_FALSE(rep.entries.empty());
  CHECK(rep.first_time() >= ci.conjugate_free_radius - 1e-9);

  auto count_within = [&rep](double radius) {
    int c = 0;
    for (const ConjugateEntry& e : rep.entries) {
      if (e.time <= radius + 1e-9) c += e.multiplicity;
    }
    return c;
  };
  CHECK(count_within(ci.at_least_dc_radius) >= ci.d_c);
  CHECK(count_within(ci.at_least_dc1_radius) >= ci.d_c + 1);
}
