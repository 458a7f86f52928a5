// hopfsr/sampling.hpp
//
// Seeded random sampling of sphere points, horizontal directions and
// extremal initial conditions.  All draws go through a fixed 64-bit Mersenne
// twister and a Box-Muller normal sampler so that a given seed reproduces the
// same sequence on every platform.

#pragma once

#include "hopfsr/complex_geometry.hpp"
#include "hopfsr/extremal_flow.hpp"

#include <cstdint>
#include <random>

namespace hopfsr {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) built from the top 53 bits of the generator.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; one spare value is cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Ambient vector with independent standard-normal real coordinates.
CVec random_ambient(int n, Rng& rng);

SpherePoint random_sphere_point(int n, Rng& rng);

// Unit horizontal vector at z, uniform on the unit sphere of H_z.
HorizontalVector random_horizontal_unit(const SpherePoint& z, Rng& rng);

// Extremal initial condition on the level h = 1/2, parameterized by the
// curvature-weighted vertical momentum u0 = 2 * Re<p, i z>:
// p = (unit horizontal direction) + (u0 / 2) * i z.
// The factor 2 is the normalization of the fibration curvature form
// d(connection form) = 2 g(J., .), so u0 is the parameter that appears in
// the conjugate-point frequencies (e.g. first conjugate time
// 2 pi / sqrt(4 + u0^2)); the raw fiber momentum Re<p, i z> equals u0 / 2.
PhasePoint random_extremal_start(int n, double u0, Rng& rng);

// Deterministic variant: base point e_0 and horizontal direction picked from
// the standard basis, dir_index in [0, 2n) mapping to e_{1+j} for j < n and
// to i*e_{1+j-n} otherwise.  Throws std::invalid_argument on a bad index.
PhasePoint standard_extremal_start(int n, int dir_index, double u0);

}  // namespace hopfsr
