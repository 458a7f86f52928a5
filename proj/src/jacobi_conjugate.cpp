// hopfsr/jacobi_conjugate.cpp

#include "hopfsr/jacobi_conjugate.hpp"

#include "hopfsr/comparison.hpp"

#include <algorithm>
#include <cmath>

namespace hopfsr {

namespace {

constexpr int kCheckpointStride = 16;

void require_unit_level(const PhasePoint& lambda) {
  const double h = hamiltonian(lambda);
  if (std::abs(h - 0.5) > 1e-9) {
    throw std::invalid_argument(
        "conjugate-point machinery requires the unit level h = 1/2");
  }
}

}  // namespace

CurvatureCoefficients CurvatureCoefficients::zero(int d_c) {
  CurvatureCoefficients c;
  c.r_ac = RVec::Zero(d_c);
  c.r_bc = RVec::Zero(d_c);
  c.r_cc = RMat::Zero(d_c, d_c);
  return c;
}

CurvatureCoefficients CurvatureCoefficients::hopf(double u0, int d_c) {
  CurvatureCoefficients c = zero(d_c);
  c.r_bb = 4.0 + u0 * u0;
  c.r_cc = (1.0 + 0.25 * u0 * u0) * RMat::Identity(d_c, d_c);
  return c;
}

CanonicalSplitting canonical_splitting(const PhasePoint& lambda) {
  require_unit_level(lambda);

  const CVec& z = lambda.z.z;
  const CVec iz = mul_i(z);
  const double u0 = rdot(lambda.p, iz);
  CVec p_h = lambda.p - rdot(lambda.p, z) * z - u0 * iz;
  const double ph_norm = p_h.norm();
  if (ph_norm < 1e-9) {
    throw degenerate_momentum_error(
        "canonical_splitting: horizontal momentum is numerically zero");
  }
  p_h /= ph_norm;

  CanonicalSplitting out;
  out.a_dir = iz;
  out.b_dir = mul_i(p_h);
  out.p_h = p_h;
  // Curvature-weighted vertical momentum: the fibration curvature form is
  // twice the Kaehler form (d omega = 2 g(J., .)), so the coefficient that
  // enters the structural frequencies is 2 Re<p, i z>, not the raw fiber
  // momentum itself.
  out.u0 = 2.0 * u0;

  const int n = lambda.ambient_dim() - 1;
  out.d_c = 2 * n - 2;

  // Complete {p_h, J p_h} to an orthonormal basis of the horizontal space by
  // Gram-Schmidt over the projected standard basis; at each stage the
  // candidate with the largest residual is taken, which is deterministic and
  // never stalls on a near-dependent seed.
  std::vector<CVec> candidates;
  candidates.reserve(2 * (n + 1));
  for (int k = 0; k <= n; ++k) {
    CVec e = CVec::Zero(n + 1);
    e[k] = 1.0;
    candidates.push_back(horizontal_project(lambda.z, e).v);
    e[k] = std::complex<double>(0.0, 1.0);
    candidates.push_back(horizontal_project(lambda.z, e).v);
  }

  std::vector<CVec> frame{p_h, out.b_dir};
  out.c_basis.reserve(out.d_c);
  for (int picked = 0; picked < out.d_c; ++picked) {
    double best_norm = -1.0;
    CVec best;
    for (const CVec& cand : candidates) {
      CVec r = cand;
      for (const CVec& f : frame) r -= rdot(r, f) * f;
      const double rn = r.norm();
      if (rn > best_norm) {
        best_norm = rn;
        best = std::move(r);
      }
    }
    if (best_norm < 1e-9) {
      throw std::runtime_error("canonical_splitting: basis completion stalled");
    }
    best /= best_norm;
    frame.push_back(best);
    out.c_basis.push_back(std::move(best));
  }
  return out;
}

CurvatureCoefficients curvature_maps(const PhasePoint& lambda) {
  const CanonicalSplitting s = canonical_splitting(lambda);
  const double u0 = s.u0;

  const HorizontalVector ph{lambda.z, s.p_h};
  const HorizontalVector jph{lambda.z, s.b_dir};

  CurvatureCoefficients c = CurvatureCoefficients::zero(s.d_c);
  c.r_bb = riemann4(ph, jph, ph, jph) + u0 * u0;
  for (int j = 0; j < s.d_c; ++j) {
    const HorizontalVector cj{lambda.z, s.c_basis[j]};
    c.r_bc[j] = riemann4(ph, jph, ph, cj);
    for (int k = j; k < s.d_c; ++k) {
      const HorizontalVector ck{lambda.z, s.c_basis[k]};
      double v = riemann4(ph, cj, ph, ck);
      if (k == j) v += 0.25 * u0 * u0;
      c.r_cc(j, k) = v;
      c.r_cc(k, j) = v;
    }
  }
  // r_aa and r_ac vanish identically for this geometry.
  return c;
}

namespace {

// Coefficient matrix of the first-order system S' = S * C for the frame
// ordering (E_a, E_b, E_c_1..E_c_dc, F_a, F_b, F_c_1..F_c_dc).
RMat structural_matrix(const CurvatureCoefficients& r, StructuralVariant variant) {
  const int d_c = r.dim_c();
  const int m = 2 + d_c;
  const int ia = 0, ib = 1, ic0 = 2;
  const int fa = m, fb = m + 1, fc0 = m + 2;

  RMat C = RMat::Zero(2 * m, 2 * m);
  C(ib, ia) = 1.0;  // E_a' = E_b
  if (variant == StructuralVariant::darboux_consistent) {
    C(fb, ib) = 1.0;  // E_b' = F_b
  } else {
    if (d_c != 1) {
      throw std::invalid_argument(
          "the printed structural variant (E_b' = E_c) is only defined for d_c = 1");
    }
    C(ic0, ib) = 1.0;  // E_b' = E_c
  }
  for (int j = 0; j < d_c; ++j) C(fc0 + j, ic0 + j) = 1.0;  // E_c' = F_c

  C(ia, fa) = -r.r_aa;
  for (int j = 0; j < d_c; ++j) C(ic0 + j, fa) = -r.r_ac[j];

  C(fa, fb) = -1.0;
  C(ib, fb) = -r.r_bb;
  for (int j = 0; j < d_c; ++j) C(ic0 + j, fb) = -r.r_bc[j];

  for (int j = 0; j < d_c; ++j) {
    C(ia, fc0 + j) = -r.r_ac[j];
    C(ib, fc0 + j) = -r.r_bc[j];
    for (int k = 0; k < d_c; ++k) C(ic0 + k, fc0 + j) = -r.r_cc(k, j);
  }
  return C;
}

// One RK4 step of S' = S * C(t).
void structural_rk4_step(RMat& S, double t, double dt,
                         const CoefficientProvider& coeffs,
                         StructuralVariant variant) {
  const RMat C1 = structural_matrix(coeffs(t), variant);
  const RMat C2 = structural_matrix(coeffs(t + 0.5 * dt), variant);
  const RMat C4 = structural_matrix(coeffs(t + dt), variant);

  const RMat k1 = S * C1;
  const RMat k2 = (S + 0.5 * dt * k1) * C2;
  const RMat k3 = (S + 0.5 * dt * k2) * C2;
  const RMat k4 = (S + dt * k3) * C4;
  S += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

int resolve_steps(const DetectOptions& opts, double T) {
  if (opts.total_steps > 0) return opts.total_steps;
  return std::max(16, static_cast<int>(std::ceil(4000.0 * T)));
}

std::vector<ConjugateEntry> merge_coincident(std::vector<ConjugateEntry> entries,
                                             double tol) {
  std::sort(entries.begin(), entries.end(),
            [](const ConjugateEntry& a, const ConjugateEntry& b) {
              return a.time < b.time;
            });
  std::vector<ConjugateEntry> out;
  for (const ConjugateEntry& e : entries) {
    if (!out.empty() && e.time - out.back().time <= tol) {
      out.back().multiplicity += e.multiplicity;
    } else {
      out.push_back(e);
    }
  }
  return out;
}

ConjugateReport finish_report(std::vector<ConjugateEntry> entries,
                              std::string method, const DetectOptions& opts,
                              double dt, std::optional<double> u0, int d_c) {
  ConjugateReport rep;
  rep.entries = std::move(entries);
  rep.total = 0;
  for (const ConjugateEntry& e : rep.entries) rep.total += e.multiplicity;
  rep.method = std::move(method);
  rep.tol_rank = opts.tol_rank;
  rep.guard = opts.guard;
  rep.grid_step = dt;
  rep.u0 = u0;
  rep.d_c = d_c;
  return rep;
}

}  // namespace

RMat symplectic_form_matrix(int half_dim) {
  RMat omega = RMat::Zero(2 * half_dim, 2 * half_dim);
  omega.topRightCorner(half_dim, half_dim) = RMat::Identity(half_dim, half_dim);
  omega.bottomLeftCorner(half_dim, half_dim) =
      -RMat::Identity(half_dim, half_dim);
  return omega;
}

double symplectic_defect(const DarbouxFrameState& state) {
  const int m = static_cast<int>(state.frame.rows()) / 2;
  const RMat omega = symplectic_form_matrix(m);
  return (state.frame.transpose() * omega * state.frame - omega)
      .cwiseAbs()
      .maxCoeff();
}

std::vector<DarbouxFrameState> structural_ode_integrate(
    const CoefficientProvider& coeffs, int d_c, double T, int steps,
    StructuralVariant variant) {
  if (d_c < 0) throw std::invalid_argument("structural_ode_integrate: d_c < 0");
  if (steps < 1) throw std::invalid_argument("structural_ode_integrate: steps < 1");
  const int m = 2 + d_c;
  const double dt = T / steps;

  std::vector<DarbouxFrameState> out;
  out.reserve(steps + 1);
  RMat S = RMat::Identity(2 * m, 2 * m);
  out.push_back(DarbouxFrameState{0.0, S});
  for (int k = 0; k < steps; ++k) {
    structural_rk4_step(S, k * dt, dt, coeffs, variant);
    out.push_back(DarbouxFrameState{(k + 1) * dt, S});
  }
  return out;
}

ConjugateReport detect_structural(const CoefficientProvider& coeffs, int d_c,
                                  double T, const DetectOptions& opts,
                                  std::optional<double> u0_tag) {
  if (!(T > 0.0)) throw std::invalid_argument("detect_structural: T <= 0");
  const int m = 2 + d_c;
  const int steps = resolve_steps(opts, T);
  const double dt = T / steps;
  // Three shoulder nodes past T so a root at the horizon still shows up as a
  // local minimum; acceptance below stays capped at T.
  const int N = steps + 3;

  std::vector<double> smin(N + 1), smax(N + 1);
  std::vector<RMat> checkpoints;
  checkpoints.reserve(N / kCheckpointStride + 2);

  RMat S = RMat::Identity(2 * m, 2 * m);
  const auto record = [&](int k, const RMat& frame) {
    Eigen::JacobiSVD<RMat> svd(frame.block(m, 0, m, m));
    smin[k] = svd.singularValues().minCoeff();
    smax[k] = svd.singularValues().maxCoeff();
    if (k % kCheckpointStride == 0) checkpoints.push_back(frame);
  };

  record(0, S);
  for (int k = 0; k < N; ++k) {
    structural_rk4_step(S, k * dt, dt, coeffs, opts.variant);
    record(k + 1, S);
  }

  const auto probe = [&](double t) -> RVec {
    const int cp = std::min(static_cast<int>(t / (kCheckpointStride * dt)),
                            static_cast<int>(checkpoints.size()) - 1);
    RMat frame = checkpoints[cp];
    double tc = cp * kCheckpointStride * dt;
    while (t - tc > dt * (1.0 + 1e-12)) {
      structural_rk4_step(frame, tc, dt, coeffs, opts.variant);
      tc += dt;
    }
    if (t > tc) structural_rk4_step(frame, tc, t - tc, coeffs, opts.variant);
    Eigen::JacobiSVD<RMat> svd(frame.block(m, 0, m, m));
    return svd.singularValues();
  };

  DipOptions dopts;
  dopts.tol_rank = opts.tol_rank;
  dopts.guard = opts.guard;
  dopts.t_max = T;
  std::vector<ConjugateEntry> entries = detect_dips(smin, smax, dt, probe, dopts);
  return finish_report(std::move(entries), "structural", opts, dt, u0_tag, d_c);
}

ConjugateReport conjugate_times_structural(const PhasePoint& lambda0, double T,
                                           const DetectOptions& opts) {
  require_unit_level(lambda0);
  const CurvatureCoefficients r = curvature_maps(lambda0);
  const double u0 = 2.0 * vertical_momentum(lambda0);
  const CoefficientProvider provider = [r](double) { return r; };
  return detect_structural(provider, r.dim_c(), T, opts, u0);
}

// ---------------------------------------------------------------------------
// Variational (brute-force) detector.

namespace {

// Reference state plus the propagated vertical variations (dz_k, dp_k).
struct VariationalState {
  CVec z, p;
  std::vector<CVec> dz, dp;
};

VariationalState operator+(const VariationalState& a, const VariationalState& b) {
  VariationalState r = a;
  r.z += b.z;
  r.p += b.p;
  for (std::size_t k = 0; k < r.dz.size(); ++k) {
    r.dz[k] += b.dz[k];
    r.dp[k] += b.dp[k];
  }
  return r;
}

VariationalState operator*(double s, const VariationalState& a) {
  VariationalState r = a;
  r.z *= s;
  r.p *= s;
  for (std::size_t k = 0; k < r.dz.size(); ++k) {
    r.dz[k] *= s;
    r.dp[k] *= s;
  }
  return r;
}

// Linearization of the extremal right-hand side along the reference arc.
VariationalState variational_rhs(const VariationalState& s) {
  VariationalState d = s;  // shapes only
  const CVec iz = mul_i(s.z);
  const CVec ip = mul_i(s.p);
  const double u0 = rdot(s.p, iz);
  const double radial = rdot(s.p, s.z);
  const double nu = s.p.squaredNorm() - radial * radial;

  d.z = s.p - u0 * iz;
  d.p = -u0 * ip - nu * s.z;
  for (std::size_t k = 0; k < s.dz.size(); ++k) {
    const double du0 = rdot(s.dp[k], iz) + rdot(s.p, mul_i(s.dz[k]));
    d.dz[k] = s.dp[k] - du0 * iz - u0 * mul_i(s.dz[k]);
    d.dp[k] = -du0 * ip - u0 * mul_i(s.dp[k]) - 2.0 * rdot(s.p, s.dp[k]) * s.z -
              nu * s.dz[k];
  }
  return d;
}

void variational_rk4_step(VariationalState& s, double dt) {
  const VariationalState k1 = variational_rhs(s);
  const VariationalState k2 = variational_rhs(s + 0.5 * dt * k1);
  const VariationalState k3 = variational_rhs(s + 0.5 * dt * k2);
  const VariationalState k4 = variational_rhs(s + dt * k3);
  s = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  // Keep the reference arc on the constraint set; the variations are left
  // untouched (the renormalization is the identity there to first order).
  s.z /= s.z.norm();
  s.p -= rdot(s.p, s.z) * s.z;
}

// Real coordinates of the variations' base-point components transverse to
// the velocity, one column per variation.
RMat transverse_matrix(const VariationalState& s) {
  const CVec iz = mul_i(s.z);
  const double u0 = rdot(s.p, iz);
  CVec vel = s.p - u0 * iz;
  vel /= vel.norm();

  const int rows = static_cast<int>(2 * s.z.size());
  RMat W(rows, static_cast<int>(s.dz.size()));
  for (std::size_t k = 0; k < s.dz.size(); ++k) {
    CVec w = s.dz[k];
    w -= rdot(w, s.z) * s.z;
    w -= rdot(w, vel) * vel;
    W.col(static_cast<int>(k)).head(rows / 2) = w.real();
    W.col(static_cast<int>(k)).tail(rows / 2) = w.imag();
  }
  return W;
}

RVec transverse_spectrum(const VariationalState& s) {
  Eigen::JacobiSVD<RMat> svd(transverse_matrix(s));
  return svd.singularValues();
}

}  // namespace

ConjugateReport conjugate_times_variational(const PhasePoint& lambda0, double T,
                                            const DetectOptions& opts) {
  if (!(T > 0.0)) throw std::invalid_argument("conjugate_times_variational: T <= 0");
  require_unit_level(lambda0);

  const CanonicalSplitting split = canonical_splitting(lambda0);
  const PhasePoint start = normalize_gauge(lambda0);

  VariationalState s;
  s.z = start.z.z;
  s.p = start.p;
  // Basis of the vertical variations tangent to the level set: momentum
  // shifts along the adapted splitting, base point fixed.
  std::vector<CVec> dirs{split.a_dir, split.b_dir};
  dirs.insert(dirs.end(), split.c_basis.begin(), split.c_basis.end());
  const CVec zero = CVec::Zero(s.z.size());
  for (const CVec& d : dirs) {
    s.dz.push_back(zero);
    s.dp.push_back(d);
  }

  const int steps = resolve_steps(opts, T);
  const double dt = T / steps;
  const int N = steps + 3;  // shoulder nodes past T, as in the structural sweep

  std::vector<double> smin(N + 1), smax(N + 1);
  std::vector<VariationalState> checkpoints;
  checkpoints.reserve(N / kCheckpointStride + 2);

  const auto record = [&](int k, const VariationalState& st) {
    const RVec sv = transverse_spectrum(st);
    smin[k] = sv.minCoeff();
    smax[k] = sv.maxCoeff();
    if (k % kCheckpointStride == 0) checkpoints.push_back(st);
  };

  record(0, s);
  for (int k = 0; k < N; ++k) {
    variational_rk4_step(s, dt);
    if (!all_finite(s.z) || !all_finite(s.p)) {
      throw integration_error("variational sweep produced a non-finite state",
                              (k + 1) * dt);
    }
    record(k + 1, s);
  }

  const auto probe = [&](double t) -> RVec {
    const int cp = std::min(static_cast<int>(t / (kCheckpointStride * dt)),
                            static_cast<int>(checkpoints.size()) - 1);
    VariationalState st = checkpoints[cp];
    double tc = cp * kCheckpointStride * dt;
    while (t - tc > dt * (1.0 + 1e-12)) {
      variational_rk4_step(st, dt);
      tc += dt;
    }
    if (t > tc) variational_rk4_step(st, t - tc);
    return transverse_spectrum(st);
  };

  DipOptions dopts;
  dopts.tol_rank = opts.tol_rank;
  dopts.guard = opts.guard;
  dopts.t_max = T;
  std::vector<ConjugateEntry> entries = detect_dips(smin, smax, dt, probe, dopts);
  return finish_report(std::move(entries), "variational", opts, dt, split.u0,
                       split.d_c);
}

void propagate_variations(const PhasePoint& lambda0, double T, int steps,
                          const VariationVisitor& visit) {
  if (steps < 1) throw std::invalid_argument("propagate_variations: steps < 1");
  require_unit_level(lambda0);

  const CanonicalSplitting split = canonical_splitting(lambda0);
  const PhasePoint start = normalize_gauge(lambda0);

  VariationalState s;
  s.z = start.z.z;
  s.p = start.p;
  std::vector<CVec> dirs{split.a_dir, split.b_dir};
  dirs.insert(dirs.end(), split.c_basis.begin(), split.c_basis.end());
  const CVec zero = CVec::Zero(s.z.size());
  for (const CVec& d : dirs) {
    s.dz.push_back(zero);
    s.dp.push_back(d);
  }

  const double dt = T / steps;
  visit(0.0, s.dz, s.dp);
  for (int k = 0; k < steps; ++k) {
    variational_rk4_step(s, dt);
    if (!all_finite(s.z) || !all_finite(s.p)) {
      throw integration_error("variation propagation produced a non-finite state",
                              (k + 1) * dt);
    }
    visit((k + 1) * dt, s.dz, s.dp);
  }
}

// ---------------------------------------------------------------------------
// Closed-form pattern.

ConjugateReport closed_form_conjugate_times(double omega_b, double omega_c,
                                            int d_c, double T) {
  if (!(omega_b > 0.0) || !(omega_c > 0.0)) {
    throw std::invalid_argument("closed_form_conjugate_times: frequencies must be positive");
  }
  if (d_c < 0 || !(T > 0.0)) {
    throw std::invalid_argument("closed_form_conjugate_times: bad arguments");
  }
  const double sb = std::sqrt(omega_b);
  const double sc = std::sqrt(omega_c);
  const double tie = 1e-12 * std::max(1.0, T);

  std::vector<ConjugateEntry> entries;
  if (d_c > 0) {
    const long kc = floor_inclusive(T * sc / kPi);
    for (long k = 1; k <= kc; ++k) {
      entries.push_back(ConjugateEntry{k * kPi / sc, d_c});
    }
  }
  const long kb = floor_inclusive(T * sb / (2.0 * kPi));
  for (long k = 1; k <= kb; ++k) {
    entries.push_back(ConjugateEntry{2.0 * k * kPi / sb, 1});
  }
  for (int k = 1;; ++k) {
    const double x = 2.0 * tan_fixed_point(k) / sb;
    if (x > T + tie) break;
    entries.push_back(ConjugateEntry{x, 1});
  }

  ConjugateReport rep;
  rep.entries = merge_coincident(std::move(entries), 1e-9);
  rep.total = 0;
  for (const ConjugateEntry& e : rep.entries) rep.total += e.multiplicity;
  rep.method = "closed_form";
  rep.tol_rank = 0.0;
  rep.guard = 0.0;
  rep.grid_step = 0.0;
  rep.d_c = d_c;
  return rep;
}

ConjugateReport closed_form_conjugate_times_for(const PhasePoint& lambda0,
                                                double T) {
  require_unit_level(lambda0);
  const double u0 = 2.0 * vertical_momentum(lambda0);
  const int n = lambda0.ambient_dim() - 1;
  ConjugateReport rep = closed_form_conjugate_times(
      4.0 + u0 * u0, 1.0 + 0.25 * u0 * u0, 2 * n - 2, T);
  rep.u0 = u0;
  return rep;
}

}  // namespace hopfsr
