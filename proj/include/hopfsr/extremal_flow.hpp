// hopfsr/extremal_flow.hpp
//
// Normal extremal flow of the horizontal (sub-Riemannian) metric on
// S^{2n+1}.  Covectors are identified with ambient vectors through the round
// metric and kept in the gauge Re<p,z> = 0; the kinetic Hamiltonian is then
//
//   h(z,p) = (|p|^2 - Re<p,z>^2 - Re<p,iz>^2) / 2   (squared horizontal part)
//
// and the vertical momentum u0 = Re<p,iz> is a constant of motion.  On the
// constraint set {|z| = 1, Re<p,z> = 0} the extremal equations close up as
//
//   dz/dt = p - u0 * i z,
//   dp/dt = -u0 * i p - (2h + u0^2) * z,
//
// with u0 and nu = 2h + u0^2 evaluated from the current state.  Unit-speed
// parametrization corresponds to the level h = 1/2, where nu = |p|^2.  The
// flow also admits a closed-form solution: with omega = sqrt(2h + u0^2),
//
//   z(t) = e^{-i u0 t} ( cos(omega t) z0 + sin(omega t)/omega p0 ),
//   p(t) = e^{-i u0 t} ( -omega sin(omega t) z0 + cos(omega t) p0 ),
//
// degenerating to the constant trajectory when omega = 0.

#pragma once

#include "hopfsr/complex_geometry.hpp"

#include <string>
#include <vector>

namespace hopfsr {

// Point of the phase space: base point plus ambient momentum vector.  Use
// make_phase_point / normalize_gauge to establish the gauge Re<p,z> = 0; the
// fields stay public so tests can inject degenerate states deliberately.
struct PhasePoint {
  SpherePoint z;
  CVec p;

  int ambient_dim() const { return z.ambient_dim(); }
};

// Builds a gauge-fixed phase point (projects p off the radial direction).
PhasePoint make_phase_point(SpherePoint z, CVec p);

// Removes the radial component of p; idempotent, leaves h and u0 unchanged.
PhasePoint normalize_gauge(const PhasePoint& lambda);

// Kinetic Hamiltonian (half the squared horizontal momentum).  Invariant
// under p -> p + s z for every real s.
double hamiltonian(const PhasePoint& lambda);

// Vertical momentum u0 = Re<p, iz>; shares the gauge invariance above.
double vertical_momentum(const PhasePoint& lambda);

// Time samples of an integrated extremal.  h, u0 stay constant along states
// within 1e-8 and |z| = 1 within 1e-10 at every node for well-posed input.
struct GeodesicArc {
  std::vector<double> times;
  std::vector<PhasePoint> states;
  double step = 0.0;
  std::string method = "rk4";

  const PhasePoint& initial() const { return states.front(); }
  const PhasePoint& last() const { return states.back(); }
};

// Steps targeting the default step bound of 1e-3.
int default_flow_steps(double T);

// Classical RK4 with per-step renormalization of |z| and re-projection of
// the gauge.  Records every node.  Throws integration_error (carrying the
// time) if the state stops being finite.
GeodesicArc integrate_extremal(const PhasePoint& lambda0, double T, int steps);

// Closed-form extremal through a gauge-fixed lambda0 (see file header).
PhasePoint closed_form_geodesic(const PhasePoint& lambda0, double t);

}  // namespace hopfsr
