// hopfsr/jacobi_conjugate.hpp
//
// Canonical splitting along a unit-speed extremal, the curvature maps that
// drive the intrinsic (structural) Jacobi equations, and three mutually
// independent conjugate-point detectors:
//
//  * structural   - integrates the structural equations for a Darboux frame
//                   of the symplectic space W = T(h=1/2)/span(flow) and
//                   watches when the moving Lagrangian plane spanned by the
//                   E-vectors meets its initial position;
//  * variational  - brute force: propagates a basis of vertical variations
//                   through the linearized extremal flow and watches the
//                   rank of their base-point components transverse to the
//                   velocity;
//  * closed form  - for the constant coefficients of this geometry the
//                   structural system decouples into harmonic blocks, giving
//                   conjugate times k*pi/sqrt(omega_c) (multiplicity d_c),
//                   2k*pi/sqrt(omega_b) (simple) and the positive roots of
//                   tan(sqrt(omega_b) x / 2) = sqrt(omega_b) x / 2 (simple).
//
// On the level h = 1/2 the splitting of the vertical subspace reads
// a = unit vertical, b = J p^h, c = horizontal complement of {p^h, J p^h},
// d_c = 2n - 2, and the curvature coefficients are the constants
// r_bb = 4 + u0^2, r_cc = (1 + u0^2/4) Id, r_bc = 0, r_aa = 0, r_ac = 0.

#pragma once

#include "hopfsr/dip_detect.hpp"
#include "hopfsr/extremal_flow.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hopfsr {

// Orthonormal adapted basis of the vertical subspace at a phase point on the
// level h = 1/2.
struct CanonicalSplitting {
  CVec a_dir;                // unit vertical field i z
  CVec b_dir;                // J p^h / |p^h|
  std::vector<CVec> c_basis; // d_c horizontal vectors orthogonal to p^h, J p^h
  CVec p_h;                  // unit horizontal momentum
  double u0 = 0.0;           // curvature-weighted vertical momentum 2 Re<p, i z>
  int d_c = 0;
};

// Coefficients of the structural equations in the splitting above.  r_cc is
// symmetric; r_aa and r_ac vanish identically for this geometry and are kept
// so the integrator stays generic.
struct CurvatureCoefficients {
  double r_aa = 0.0;
  RVec r_ac;   // size d_c
  double r_bb = 0.0;
  RVec r_bc;   // size d_c
  RMat r_cc;   // d_c x d_c

  static CurvatureCoefficients zero(int d_c);
  // Closed-form constants of the Hopf geometry for a given u0.
  static CurvatureCoefficients hopf(double u0, int d_c);

  int dim_c() const { return static_cast<int>(r_ac.size()); }
};

// Requires |h - 1/2| <= 1e-9; throws degenerate_momentum_error when
// |p^h| < 1e-9.  The c-basis is completed by deterministic Gram-Schmidt
// seeded from the standard ambient basis.
CanonicalSplitting canonical_splitting(const PhasePoint& lambda);

// Curvature maps evaluated through the closed-form curvature tensor on the
// canonical splitting.  r_aa and r_ac are exactly zero.
CurvatureCoefficients curvature_maps(const PhasePoint& lambda);

// The structural system as printed in one common reference writes
// E_b' = E_c, which is dimensionally inconsistent for d_c != 1 and breaks
// the Darboux pairings; the consistent closure E_b' = F_b is the default.
// The printed variant is kept for d_c = 1 experiments and can be made the
// default with the HOPFSR_PRINTED_STRUCTURAL_VARIANT build option.
enum class StructuralVariant { darboux_consistent, printed };

#ifdef HOPFSR_PRINTED_STRUCTURAL_VARIANT
inline constexpr StructuralVariant kDefaultStructuralVariant =
    StructuralVariant::printed;
#else
inline constexpr StructuralVariant kDefaultStructuralVariant =
    StructuralVariant::darboux_consistent;
#endif

// Possibly time-dependent coefficient source for the structural equations.
using CoefficientProvider = std::function<CurvatureCoefficients(double t)>;

// Coordinates of the frame (E_a, E_b, E_c, F_a, F_b, F_c) in the initial
// Darboux basis, one column per frame vector (E block first).
struct DarbouxFrameState {
  double time = 0.0;
  RMat frame;
};

// Standard symplectic form matrix in the frame ordering above.
RMat symplectic_form_matrix(int half_dim);

// Max-norm deviation of the frame Gram matrix from the symplectic form.
double symplectic_defect(const DarbouxFrameState& state);

// RK4 integration of the structural equations from the identity Darboux
// frame; returns every node.  The printed variant requires d_c = 1.
std::vector<DarbouxFrameState> structural_ode_integrate(
    const CoefficientProvider& coeffs, int d_c, double T, int steps,
    StructuralVariant variant = kDefaultStructuralVariant);

struct ConjugateReport {
  std::vector<ConjugateEntry> entries;  // strictly increasing times in (0,T]
  int total = 0;                        // sum of multiplicities
  std::string method;                   // structural | variational | closed_form
  double tol_rank = 1e-6;
  double guard = 1e-3;
  double grid_step = 0.0;
  std::optional<double> u0;             // provenance, when derived from a phase point
  int d_c = -1;

  double first_time() const { return entries.empty() ? -1.0 : entries.front().time; }
};

struct DetectOptions {
  int total_steps = 0;      // 0: ceil(4000 * T), the default detection grid
  double tol_rank = 1e-6;
  double guard = 1e-3;
  StructuralVariant variant = kDefaultStructuralVariant;
};

// Structural detector on explicit coefficients (exposed for experiments and
// grid-coarseness tests); monitors the matrix M(t)_ij = sigma(E_i(t), E_j(0)).
ConjugateReport detect_structural(const CoefficientProvider& coeffs, int d_c,
                                  double T, const DetectOptions& opts = {},
                                  std::optional<double> u0_tag = std::nullopt);

// Conjugate times of the extremal through lambda0 (requires h = 1/2).
ConjugateReport conjugate_times_structural(const PhasePoint& lambda0, double T,
                                           const DetectOptions& opts = {});

// Independent brute-force oracle: linearizes the extremal flow itself.
ConjugateReport conjugate_times_variational(const PhasePoint& lambda0, double T,
                                            const DetectOptions& opts = {});

// Propagates the canonical basis of vertical variations along the extremal
// and calls visit(t, dz, dp) at every node; used for symplectic-pairing
// checks on the linearized flow.
using VariationVisitor =
    std::function<void(double t, const std::vector<CVec>& dz,
                       const std::vector<CVec>& dp)>;
void propagate_variations(const PhasePoint& lambda0, double T, int steps,
                          const VariationVisitor& visit);

// Conjugate-time pattern of the decoupled constant-coefficient system, with
// coincident block times merged within 1e-9.
ConjugateReport closed_form_conjugate_times(double omega_b, double omega_c,
                                            int d_c, double T);

// Same, instantiated on the constants of the extremal through lambda0.
ConjugateReport closed_form_conjugate_times_for(const PhasePoint& lambda0,
                                                double T);

}  // namespace hopfsr
