#include "doctest.h"

#include "hopfsr/jacobi_conjugate.hpp"
#include "hopfsr/sampling.hpp"

#include <cmath>

using namespace hopfsr;

namespace {

// C-matrix of the frame system S' = S C (columns E_a, E_b, E_c..., F_a,
// F_b, F_c...), restated independently of the implementation.
RMat frame_generator(const CurvatureCoefficients& co) {
  const int d_c = co.dim_c();
  const int m = 2 + d_c;
  RMat C = RMat::Zero(2 * m, 2 * m);
  C(1, 0) = 1.0;                                   // E_a' = E_b
  C(m + 1, 1) = 1.0;                               // E_b' = F_b
  for (int j = 0; j < d_c; ++j) C(m + 2 + j, 2 + j) = 1.0;  // E_c' = F_c
  RMat R = RMat::Zero(m, m);
  R(0, 0) = co.r_aa;
  R(1, 1) = co.r_bb;
  for (int j = 0; j < d_c; ++j) {
    R(0, 2 + j) = R(2 + j, 0) = co.r_ac[j];
    R(1, 2 + j) = R(2 + j, 1) = co.r_bc[j];
    for (int k = 0; k < d_c; ++k) R(2 + j, 2 + k) = co.r_cc(j, k);
  }
  C.block(0, m, m, m) = -R;
  C(m, m + 1) = -1.0;                              // F_b' picks up -F_a
  return C;
}

}  // namespace

TEST_CASE("canonical splitting: dimensions, orthonormality, reference case") {
  // n = 1: no c-directions at all.
  const PhasePoint low = standard_extremal_start(1, 0, 0.5);
  const CanonicalSplitting s1 = canonical_splitting(low);
  CHECK(s1.d_c == 0);
  CHECK(s1.c_basis.empty());

  // Reference case z = e0, p = e1: b = i e1.
  const PhasePoint ref = standard_extremal_start(2, 0, 0.0);
  const CanonicalSplitting s2 = canonical_splitting(ref);
  CHECK((s2.b_dir - mul_i(ref.p)).norm() <= 1e-12);
  CHECK((s2.a_dir - mul_i(ref.z.z)).norm() <= 1e-12);

  // Random covectors: full orthonormality of {a, b, c_1..c_dc, p_h}.
  Rng rng(6);
  for (int n : {2, 3}) {
    const PhasePoint lambda = random_extremal_start(n, 1.2, rng);
    const CanonicalSplitting s = canonical_splitting(lambda);
    CHECK(s.d_c == 2 * n - 2);
    CHECK(static_cast<int>(s.c_basis.size()) == s.d_c);
    CHECK(std::abs(s.u0 - 1.2) <= 1e-12);

    std::vector<CVec> frame{s.a_dir, s.b_dir, s.p_h};
    for (const CVec& c : s.c_basis) frame.push_back(c);
    for (std::size_t i = 0; i < frame.size(); ++i) {
      for (std::size_t j = 0; j < frame.size(); ++j) {
        const double expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(rdot(frame[i], frame[j]) - expected) <= 1e-12);
      }
    }
    for (const CVec& c : s.c_basis) {
      CHECK(std::abs(rdot(c, lambda.z.z)) <= 1e-12);
      CHECK(std::abs(rdot(c, mul_i(lambda.z.z))) <= 1e-12);
      CHECK(std::abs(rdot(c, mul_i(s.p_h))) <= 1e-12);
    }
  }
}

TEST_CASE("canonical splitting requires the unit level") {
  const SpherePoint z = SpherePoint::unit(2);
  const PhasePoint vertical_only = make_phase_point(z, 2.0 * mul_i(z.z));  // h = 0
  CHECK_THROWS_AS(canonical_splitting(vertical_only), std::invalid_argument);
}

TEST_CASE("curvature coefficients take the closed-form constant values") {
  for (int n : {1, 2, 3}) {
    for (double u0 : {0.0, 0.5, 2.0}) {
      const PhasePoint lambda = standard_extremal_start(n, 0, u0);
      const CurvatureCoefficients co = curvature_maps(lambda);
      CHECK(co.dim_c() == 2 * n - 2);
      CHECK(co.r_aa == 0.0);
      CHECK(std::abs(co.r_bb - (4.0 + u0 * u0)) <= 1e-12);
      if (co.dim_c() > 0) {
        CHECK(co.r_ac.cwiseAbs().maxCoeff() == 0.0);
        CHECK(co.r_bc.cwiseAbs().maxCoeff() <= 1e-12);
        const RMat expected =
            (1.0 + 0.25 * u0 * u0) * RMat::Identity(co.dim_c(), co.dim_c());
        CHECK((co.r_cc - expected).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((co.r_cc - co.r_cc.transpose()).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
}

TEST_CASE("curvature coefficients are invariant along the extremal") {
  const PhasePoint lambda0 = standard_extremal_start(2, 0, 1.0);
  const GeodesicArc arc = integrate_extremal(lambda0, 4.0, 4000);
  const CurvatureCoefficients at0 = curvature_maps(arc.initial());
  for (int node : {1000, 2500, 4000}) {
    const CurvatureCoefficients at = curvature_maps(arc.states[node]);
    CHECK(std::abs(at.r_bb - at0.r_bb) <= 1e-9);
    CHECK((at.r_cc - at0.r_cc).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(at.r_bc.cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("structural flow with zero coefficients is the exact nilpotent exponential") {
  const CurvatureCoefficients zero = CurvatureCoefficients::zero(1);
  const CoefficientProvider provider = [&zero](double) { return zero; };
  const std::vector<DarbouxFrameState> frames =
      structural_ode_integrate(provider, 1, 2.0, 10);
  REQUIRE(frames.size() == 11);

  const RMat C = frame_generator(zero);
  CHECK((C * C * C * C).cwiseAbs().maxCoeff() == 0.0);  // nilpotent of order 4
  for (const DarbouxFrameState& st : frames) {
    const double t = st.time;
    const RMat exact = RMat::Identity(6, 6) + t * C + (t * t / 2.0) * (C * C) +
                       (t * t * t / 6.0) * (C * C * C);
    CHECK((st.frame - exact).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(symplectic_defect(st) <= 1e-12);
  }
}

TEST_CASE("structural flow reproduces the analytic cosine block") {
  const CurvatureCoefficients co = CurvatureCoefficients::hopf(1.0, 2);
  const CoefficientProvider provider = [&co](double) { return co; };
  const int m = 4;
  const double omega = std::sqrt(1.0 + 0.25);  // sqrt(r_cc diagonal)
  const std::vector<DarbouxFrameState> frames =
      structural_ode_integrate(provider, 2, 5.0, 5000);
  double worst = 0.0;
  for (const DarbouxFrameState& st : frames) {
    // First c-column: E_c(t) = cos(w t) E_c(0) + sin(w t)/w F_c(0).
    RVec expected = RVec::Zero(2 * m);
    expected[2] = std::cos(omega * st.time);
    expected[m + 2] = std::sin(omega * st.time) / omega;
    worst = std::max(worst, (st.frame.col(2) - expected).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("structural flow preserves the Darboux pairings") {
  for (double u0 : {0.0, 1.5}) {
    const CurvatureCoefficients co = CurvatureCoefficients::hopf(u0, 4);
    const CoefficientProvider provider = [&co](double) { return co; };
    const std::vector<DarbouxFrameState> frames =
        structural_ode_integrate(provider, 4, 10.0, 10000);
    double worst = 0.0;
    for (const DarbouxFrameState& st : frames) {
      worst = std::max(worst, symplectic_defect(st));
    }
    CHECK(worst <= 1e-8);
  }
}

#ifndef HOPFSR_PRINTED_STRUCTURAL_VARIANT
TEST_CASE("printed structural variant: d_c = 1 only, and it breaks the pairings") {
  CHECK(kDefaultStructuralVariant == StructuralVariant::darboux_consistent);

  const CurvatureCoefficients co = CurvatureCoefficients::hopf(0.0, 1);
  const CoefficientProvider provider = [&co](double) { return co; };

  // Dimensionally inconsistent for d_c != 1.
  const CurvatureCoefficients co2 = CurvatureCoefficients::hopf(0.0, 2);
  const CoefficientProvider provider2 = [&co2](double) { return co2; };
  CHECK_THROWS_AS(structural_ode_integrate(provider2, 2, 1.0, 10,
                                           StructuralVariant::printed),
                  std::invalid_argument);

  // The printed closure loses sigma(E_b, F_c) = 0 at unit rate near t = 0.
  const std::vector<DarbouxFrameState> frames = structural_ode_integrate(
      provider, 1, 0.5, 500, StructuralVariant::printed);
  CHECK(symplectic_defect(frames.front()) <= 1e-12);
  CHECK(symplectic_defect(frames.back()) > 1e-2);
}
#endif

TEST_CASE("closed-form conjugate pattern on reference parameter sets") {
  // Coincident c- and ab-block first times merge into multiplicity 3.
  const ConjugateReport merged = closed_form_conjugate_times(4.0, 1.0, 2, 3.3);
  REQUIRE(merged.entries.size() == 1);
  CHECK(std::abs(merged.entries[0].time - kPi) <= 1e-12);
  CHECK(merged.entries[0].multiplicity == 3);
  CHECK(merged.total == 3);

  // d_c = 0 keeps only the ab-block: 2 pi k / sqrt(omega_b) and tan roots.
  const ConjugateReport ab = closed_form_conjugate_times(4.0, 1.0, 0, 4.6);
  REQUIRE(ab.entries.size() == 2);
  CHECK(std::abs(ab.entries[0].time - kPi) <= 1e-12);
  CHECK(ab.entries[0].multiplicity == 1);
  CHECK(std::abs(ab.entries[1].time - 4.493409457909064) <= 1e-9);
  CHECK(ab.entries[1].multiplicity == 1);

  // Below the first time the report is empty.
  CHECK(closed_form_conjugate_times(4.0, 1.0, 2, 1.5).entries.empty());

  // n = 1, u0 = 1 (omega_b = 5): the four times below 7.
  const PhasePoint lambda0 = standard_extremal_start(1, 0, 1.0);
  const ConjugateReport r5 = closed_form_conjugate_times_for(lambda0, 7.0);
  const double s5 = std::sqrt(5.0);
  REQUIRE(r5.entries.size() == 4);
  CHECK(std::abs(r5.entries[0].time - 2.0 * kPi / s5) <= 1e-12);
  CHECK(std::abs(r5.entries[1].time - 2.0 * 4.493409457909064 / s5) <= 1e-9);
  CHECK(std::abs(r5.entries[2].time - 4.0 * kPi / s5) <= 1e-12);
  CHECK(std::abs(r5.entries[3].time - 2.0 * 7.725251836937707 / s5) <= 1e-9);
  CHECK(r5.total == 4);
  REQUIRE(r5.u0.has_value());
  CHECK(*r5.u0 == 1.0);
  CHECK(r5.d_c == 0);
}

TEST_CASE("detectors and predictor agree on the reference configurations") {
  // n=2, u0=0, T=3.3: single conjugate time pi with multiplicity 3.
  {
    const PhasePoint lambda0 = standard_extremal_start(2, 0, 0.0);
    const ConjugateReport st = conjugate_times_structural(lambda0, 3.3);
    const ConjugateReport va = conjugate_times_variational(lambda0, 3.3);
    for (const ConjugateReport* rep : {&st, &va}) {
      REQUIRE(rep->entries.size() == 1);
      CHECK(std::abs(rep->entries[0].time - kPi) <= 1e-4);
      CHECK(rep->entries[0].multiplicity == 3);
      CHECK(rep->total == 3);
    }
    CHECK(st.method == "structural");
    CHECK(va.method == "variational");
    REQUIRE(st.u0.has_value());
    CHECK(std::abs(*st.u0) <= 1e-12);
  }

  // n=1, u0=0, T=3.3: single time pi with multiplicity 1.
  {
    const PhasePoint lambda0 = standard_extremal_start(1, 0, 0.0);
    const ConjugateReport st = conjugate_times_structural(lambda0, 3.3);
    const ConjugateReport va = conjugate_times_variational(lambda0, 3.3);
    for (const ConjugateReport* rep : {&st, &va}) {
      REQUIRE(rep->entries.size() == 1);
      CHECK(std::abs(rep->entries[0].time - kPi) <= 1e-4);
      CHECK(rep->entries[0].multiplicity == 1);
    }
  }

  // Horizon below the first conjugate time: empty reports.
  {
    const PhasePoint lambda0 = standard_extremal_start(2, 0, 0.0);
    CHECK(conjugate_times_structural(lambda0, 1.5).entries.empty());
    CHECK(conjugate_times_variational(lambda0, 1.5).entries.empty());
  }
}

TEST_CASE("structural detector on explicit constant coefficients matches the pattern") {
  CurvatureCoefficients co = CurvatureCoefficients::zero(1);
  co.r_bb = 5.0;
  co.r_cc(0, 0) = 2.0;
  const CoefficientProvider provider = [&co](double) { return co; };
  const ConjugateReport detected = detect_structural(provider, 1, 6.0);
  const ConjugateReport predicted = closed_form_conjugate_times(5.0, 2.0, 1, 6.0);
  REQUIRE(detected.entries.size() == predicted.entries.size());
  for (std::size_t i = 0; i < detected.entries.size(); ++i) {
    CHECK(std::abs(detected.entries[i].time - predicted.entries[i].time) <= 1e-6);
    CHECK(detected.entries[i].multiplicity == predicted.entries[i].multiplicity);
  }
}

TEST_CASE("detected times are stable under halving the grid step") {
  const PhasePoint lambda0 = standard_extremal_start(2, 0, 1.0);
  const ConjugateReport coarse = conjugate_times_structural(lambda0, 7.0);
  DetectOptions fine_opts;
  fine_opts.total_steps = 56000;
  const ConjugateReport fine = conjugate_times_structural(lambda0, 7.0, fine_opts);
  REQUIRE(coarse.entries.size() == fine.entries.size());
  for (std::size_t i = 0; i < coarse.entries.size(); ++i) {
    CHECK(std::abs(coarse.entries[i].time - fine.entries[i].time) < 1e-5);
    CHECK(coarse.entries[i].multiplicity == fine.entries[i].multiplicity);
  }
}

TEST_CASE("variational propagation preserves the symplectic pairings") {
  const PhasePoint lambda0 = standard_extremal_start(2, 0, 0.5);
  double worst = 0.0;
  propagate_variations(
      lambda0, 3.0, 3000,
      [&worst](double, const std::vector<CVec>& dz, const std::vector<CVec>& dp) {
        for (std::size_t i = 0; i < dz.size(); ++i) {
          for (std::size_t j = i + 1; j < dz.size(); ++j) {
            worst = std::max(worst, std::abs(rdot(dp[i], dz[j]) -
                                             rdot(dp[j], dz[i])));
          }
        }
      });
  CHECK(worst <= 1e-8);
}

TEST_CASE("symplectic form matrix and defect bookkeeping") {
  const RMat omega = symplectic_form_matrix(2);
  REQUIRE(omega.rows() == 4);
  CHECK(omega(0, 2) == 1.0);
  CHECK(omega(1, 3) == 1.0);
  CHECK(omega(2, 0) == -1.0);
  CHECK(omega(3, 1) == -1.0);
  CHECK(omega.cwiseAbs().sum() == 4.0);

  DarbouxFrameState id;
  id.time = 0.0;
  id.frame = RMat::Identity(4, 4);
  CHECK(symplectic_defect(id) == 0.0);

  ConjugateReport empty;
  CHECK(empty.first_time() == -1.0);
}
