// hopfsr/sampling.cpp

#include "hopfsr/sampling.hpp"

#include <cmath>

namespace hopfsr {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

CVec random_ambient(int n, Rng& rng) {
  CVec v(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    v[k] = std::complex<double>(re, im);
  }
  return v;
}

SpherePoint random_sphere_point(int n, Rng& rng) {
  for (;;) {
    CVec v = random_ambient(n, rng);
    if (v.norm() > 1e-6) return SpherePoint(std::move(v));
  }
}

HorizontalVector random_horizontal_unit(const SpherePoint& z, Rng& rng) {
  const int n = z.ambient_dim() - 1;
  for (;;) {
    HorizontalVector h = horizontal_project(z, random_ambient(n, rng));
    const double r = h.v.norm();
    if (r > 1e-6) {
      h.v /= r;
      return h;
    }
  }
}

PhasePoint random_extremal_start(int n, double u0, Rng& rng) {
  const SpherePoint z = random_sphere_point(n, rng);
  const HorizontalVector dir = random_horizontal_unit(z, rng);
  CVec p = dir.v + 0.5 * u0 * mul_i(z.z);
  return PhasePoint{z, std::move(p)};
}

PhasePoint standard_extremal_start(int n, int dir_index, double u0) {
  if (n < 1) throw std::invalid_argument("standard_extremal_start: n < 1");
  if (dir_index < 0 || dir_index >= 2 * n) {
    throw std::invalid_argument(
        "standard_extremal_start: direction index out of range [0, 2n)");
  }
  const SpherePoint z = SpherePoint::unit(n, 0);
  CVec dir = CVec::Zero(n + 1);
  if (dir_index < n) {
    dir[1 + dir_index] = 1.0;
  } else {
    dir[1 + dir_index - n] = std::complex<double>(0.0, 1.0);
  }
  CVec p = dir + 0.5 * u0 * mul_i(z.z);
  return PhasePoint{z, std::move(p)};
}

}  // namespace hopfsr
