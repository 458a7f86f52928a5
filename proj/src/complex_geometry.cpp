// hopfsr/complex_geometry.cpp

#include "hopfsr/complex_geometry.hpp"

#include <cmath>

namespace hopfsr {

namespace {

void require_same_base(const SpherePoint& a, const SpherePoint& b) {
  if ((a.z - b.z).norm() > 1e-9) {
    throw std::invalid_argument(
        "horizontal vectors are attached to different base points");
  }
}

}  // namespace

SpherePoint::SpherePoint(CVec v) : z(std::move(v)) {
  if (!all_finite(z)) {
    throw std::invalid_argument("sphere point has non-finite coordinates");
  }
  const double r = z.norm();
  if (r < 1e-12) {
    throw std::invalid_argument("cannot normalize a (near-)zero vector onto the sphere");
  }
  z /= r;
}

SpherePoint SpherePoint::unit(int n, int k) {
  if (n < 1 || k < 0 || k > n) {
    throw std::invalid_argument("SpherePoint::unit: bad index");
  }
  CVec v = CVec::Zero(n + 1);
  v[k] = 1.0;
  return SpherePoint(std::move(v));
}

CVec vertical_field(const SpherePoint& z) { return mul_i(z.z); }

HorizontalVector horizontal_project(const SpherePoint& z, const CVec& v) {
  if (v.size() != z.z.size()) {
    throw std::invalid_argument("horizontal_project: dimension mismatch");
  }
  const CVec iz = mul_i(z.z);
  CVec h = v - rdot(v, z.z) * z.z - rdot(v, iz) * iz;
  return HorizontalVector{z, std::move(h)};
}

HorizontalVector complex_structure(const HorizontalVector& h) {
  return HorizontalVector{h.base, mul_i(h.v)};
}

double fs_metric(const HorizontalVector& u, const HorizontalVector& v) {
  require_same_base(u.base, v.base);
  return rdot(u.v, v.v);
}

double riemann4(const HorizontalVector& X, const HorizontalVector& Y,
                const HorizontalVector& Z, const HorizontalVector& W) {
  require_same_base(X.base, Y.base);
  require_same_base(X.base, Z.base);
  require_same_base(X.base, W.base);

  const CVec jx = mul_i(X.v);
  const CVec jy = mul_i(Y.v);

  const double g_xz = rdot(X.v, Z.v);
  const double g_yw = rdot(Y.v, W.v);
  const double g_yz = rdot(Y.v, Z.v);
  const double g_xw = rdot(X.v, W.v);
  const double g_jx_z = rdot(jx, Z.v);
  const double g_jy_w = rdot(jy, W.v);
  const double g_jy_z = rdot(jy, Z.v);
  const double g_jx_w = rdot(jx, W.v);
  const double g_jx_y = rdot(jx, Y.v);
  const double g_jz_w = rdot(mul_i(Z.v), W.v);

  return g_xz * g_yw - g_yz * g_xw + g_jx_z * g_jy_w - g_jy_z * g_jx_w +
         2.0 * g_jx_y * g_jz_w;
}

double sectional_curvature(const HorizontalVector& X, const HorizontalVector& Y) {
  require_same_base(X.base, Y.base);
  const double gxx = rdot(X.v, X.v);
  const double gyy = rdot(Y.v, Y.v);
  const double gxy = rdot(X.v, Y.v);
  const double area2 = gxx * gyy - gxy * gxy;
  if (!(area2 > 1e-14)) {
    throw std::invalid_argument("sectional_curvature: degenerate plane");
  }
  return riemann4(X, Y, X, Y) / area2;
}

double connection_form(const SpherePoint& z, const CVec& v) {
  return rdot(v, mul_i(z.z));
}

std::optional<double> curvature_form_diagnostic(const HorizontalVector& X,
                                                const HorizontalVector& Y,
                                                double step) {
  const double g_jx_y = rdot(mul_i(X.v), Y.v);
  if (std::abs(g_jx_y) <= 1e-6) return std::nullopt;

  const SpherePoint& z0 = X.base;

  // Tangential extension of a constant ambient vector: w -> v - Re<v,w> w.
  // These fields are tangent to the sphere but not horizontal, so the
  // connection form genuinely varies along them.
  const auto field = [](const CVec& v, const CVec& w) -> CVec {
    return v - rdot(v, w) * w;
  };
  // Point of the sphere reached from z0 in direction d (d tangent at z0).
  const auto move = [&z0](const CVec& d, double s) -> CVec {
    CVec w = z0.z + s * d;
    return w / w.norm();
  };
  // omega evaluated on a field at a point.
  const auto omega_of = [&field](const CVec& v, const CVec& w) -> double {
    return connection_form(SpherePoint(w), field(v, w));
  };

  // Central differences along the two directions.
  const CVec zp_x = move(X.v, step), zm_x = move(X.v, -step);
  const CVec zp_y = move(Y.v, step), zm_y = move(Y.v, -step);

  const double d_omegaY_along_X =
      (omega_of(Y.v, zp_x) - omega_of(Y.v, zm_x)) / (2.0 * step);
  const double d_omegaX_along_Y =
      (omega_of(X.v, zp_y) - omega_of(X.v, zm_y)) / (2.0 * step);

  // Lie bracket of the two extensions by central differences of field values.
  const CVec dY_along_X = (field(Y.v, zp_x) - field(Y.v, zm_x)) / (2.0 * step);
  const CVec dX_along_Y = (field(X.v, zp_y) - field(X.v, zm_y)) / (2.0 * step);
  const CVec bracket = dY_along_X - dX_along_Y;

  const double d_omega =
      d_omegaY_along_X - d_omegaX_along_Y - connection_form(z0, bracket);
  return d_omega / g_jx_y;
}

}  // namespace hopfsr
