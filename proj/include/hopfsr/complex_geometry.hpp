// hopfsr/complex_geometry.hpp
//
// Geometry of the circle-invariant distribution on S^{2n+1} c C^{n+1}.
//
// The unit circle acts on the sphere by scalar phase; its generator is the
// unit vertical field V(z) = i z.  The horizontal space H_z is the maximal
// complex subspace of the tangent space, i.e. everything orthogonal to both
// z and i z.  Restricting the round metric to H and pushing down along the
// circle action gives the Fubini-Study metric of the quotient; horizontal
// sectional curvatures therefore take values in [1, 4], pinned by the
// curvature tensor of constant holomorphic sectional curvature 4 that is
// implemented here in closed form.

#pragma once

#include "hopfsr/types.hpp"

#include <optional>

namespace hopfsr {

// A point of S^{2n+1}.  The constructor rescales to unit norm and rejects
// zero or non-finite input, so |z| = 1 holds (to roundoff) for every live
// instance.
struct SpherePoint {
  CVec z;

  explicit SpherePoint(CVec v);

  // k-th complex coordinate vector, a convenient base point for tests.
  static SpherePoint unit(int n, int k = 0);

  int ambient_dim() const { return static_cast<int>(z.size()); }  // n + 1
};

// A horizontal tangent vector attached to a base point.  Instances built by
// horizontal_project / complex_structure satisfy Re<v,z> = Re<v,iz> = 0 to
// roundoff.
struct HorizontalVector {
  SpherePoint base;
  CVec v;
};

// Unit vertical field V(z) = i z (generator of the circle action).
CVec vertical_field(const SpherePoint& z);

// Orthogonal projection of an ambient vector onto H_z.
HorizontalVector horizontal_project(const SpherePoint& z, const CVec& v);

// Complex structure J on the horizontal space: multiplication by i.
HorizontalVector complex_structure(const HorizontalVector& h);

// Metric on horizontal vectors (the real ambient inner product, which is the
// quotient Fubini-Study metric on horizontal lifts).  Throws
// std::invalid_argument if the base points differ.
double fs_metric(const HorizontalVector& u, const HorizontalVector& v);

// Curvature 4-tensor of constant holomorphic sectional curvature 4,
//   R(X,Y,Z,W) = g(X,Z)g(Y,W) - g(Y,Z)g(X,W)
//              + g(JX,Z)g(JY,W) - g(JY,Z)g(JX,W) + 2 g(JX,Y) g(JZ,W),
// evaluated on horizontal vectors with a common base point.
double riemann4(const HorizontalVector& X, const HorizontalVector& Y,
                const HorizontalVector& Z, const HorizontalVector& W);

// Sectional curvature of the plane spanned by X, Y.  Throws
// std::invalid_argument when the plane is degenerate (squared area of the
// spanning pair below 1e-14).
double sectional_curvature(const HorizontalVector& X, const HorizontalVector& Y);

// Connection 1-form of the circle bundle: component of a tangent vector
// along the unit vertical field, omega(v) = Re<v, iz>.
double connection_form(const SpherePoint& z, const CVec& v);

// Finite-difference diagnostic for the normalization of d(omega).  Extends
// X, Y to tangent fields near z by projecting the constant ambient vectors,
// evaluates d(omega)(X,Y) = X(omega(Y)) - Y(omega(X)) - omega([X,Y]) with
// central differences of size `step`, and returns the ratio
// d(omega)(X,Y) / g(JX,Y).  Returns nullopt when |g(JX,Y)| <= 1e-6 (the
// ratio would be ill-conditioned); such samples are skipped by callers.
std::optional<double> curvature_form_diagnostic(const HorizontalVector& X,
                                                const HorizontalVector& Y,
                                                double step = 1e-4);

}  // namespace hopfsr
