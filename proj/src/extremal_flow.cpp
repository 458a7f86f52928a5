// hopfsr/extremal_flow.cpp

#include "hopfsr/extremal_flow.hpp"

#include <cmath>

namespace hopfsr {

PhasePoint make_phase_point(SpherePoint z, CVec p) {
  if (p.size() != z.z.size()) {
    throw std::invalid_argument("make_phase_point: dimension mismatch");
  }
  PhasePoint lambda{std::move(z), std::move(p)};
  return normalize_gauge(lambda);
}

PhasePoint normalize_gauge(const PhasePoint& lambda) {
  PhasePoint out = lambda;
  out.p -= rdot(out.p, out.z.z) * out.z.z;
  return out;
}

double hamiltonian(const PhasePoint& lambda) {
  const double radial = rdot(lambda.p, lambda.z.z);
  const double vertical = rdot(lambda.p, mul_i(lambda.z.z));
  return 0.5 * (lambda.p.squaredNorm() - radial * radial - vertical * vertical);
}

double vertical_momentum(const PhasePoint& lambda) {
  return rdot(lambda.p, mul_i(lambda.z.z));
}

int default_flow_steps(double T) {
  return std::max(1, static_cast<int>(std::ceil(T / 1e-3)));
}

namespace detail {

// Right-hand side of the extremal system.  nu = |p|^2 - Re<p,z>^2 equals
// 2h + u0^2 in the gauge Re<p,z> = 0 and keeps the constraint set invariant.
inline void extremal_rhs(const CVec& z, const CVec& p, CVec& dz, CVec& dp) {
  const CVec iz = mul_i(z);
  const double u0 = rdot(p, iz);
  const double radial = rdot(p, z);
  const double nu = p.squaredNorm() - radial * radial;
  dz = p - u0 * iz;
  dp = -u0 * mul_i(p) - nu * z;
}

}  // namespace detail

GeodesicArc integrate_extremal(const PhasePoint& lambda0, double T, int steps) {
  if (steps < 1) throw std::invalid_argument("integrate_extremal: steps < 1");
  if (!(T >= 0.0) || !std::isfinite(T)) {
    throw std::invalid_argument("integrate_extremal: bad horizon");
  }

  const double dt = T / steps;
  GeodesicArc arc;
  arc.step = dt;
  arc.times.reserve(steps + 1);
  arc.states.reserve(steps + 1);

  CVec z = lambda0.z.z;
  CVec p = lambda0.p - rdot(lambda0.p, z) * z;

  arc.times.push_back(0.0);
  arc.states.push_back(PhasePoint{SpherePoint(z), p});

  CVec k1z, k1p, k2z, k2p, k3z, k3p, k4z, k4p;
  for (int k = 0; k < steps; ++k) {
    detail::extremal_rhs(z, p, k1z, k1p);
    detail::extremal_rhs(z + 0.5 * dt * k1z, p + 0.5 * dt * k1p, k2z, k2p);
    detail::extremal_rhs(z + 0.5 * dt * k2z, p + 0.5 * dt * k2p, k3z, k3p);
    detail::extremal_rhs(z + dt * k3z, p + dt * k3p, k4z, k4p);

    z += (dt / 6.0) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
    p += (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);

    if (!all_finite(z) || !all_finite(p)) {
      throw integration_error("extremal integration produced a non-finite state",
                              (k + 1) * dt);
    }

    // Project back onto the constraint set: unit base point, radial gauge.
    z /= z.norm();
    p -= rdot(p, z) * z;

    arc.times.push_back((k + 1) * dt);
    arc.states.push_back(PhasePoint{SpherePoint(z), p});
  }
  return arc;
}

PhasePoint closed_form_geodesic(const PhasePoint& lambda0, double t) {
  const CVec& z0 = lambda0.z.z;
  const CVec& p0 = lambda0.p;
  const double u0 = vertical_momentum(lambda0);
  const double omega2 = 2.0 * hamiltonian(lambda0) + u0 * u0;

  if (omega2 <= 0.0) {
    // Zero momentum (up to gauge): the trajectory is a single point.
    return lambda0;
  }
  const double omega = std::sqrt(omega2);
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  const std::complex<double> phase = std::polar(1.0, -u0 * t);

  CVec z = phase * (c * z0 + (s / omega) * p0);
  CVec p = phase * (-omega * s * z0 + c * p0);
  return PhasePoint{SpherePoint(std::move(z)), std::move(p)};
}

}  // namespace hopfsr
