// hopfsr/dip_detect.hpp
//
// Shared root-isolation machinery for conjugate-point detectors.  Both
// detectors produce, on a uniform time grid, the singular values of a matrix
// whose rank drops exactly at conjugate times.  This utility scans the
// smallest singular value for dips, refines each candidate time with
// iterated three-point parabola fits on the *squared* smallest singular
// value (which is locally an exact parabola at a simple rank drop), and
// counts multiplicities from the refined spectrum.

#pragma once

#include "hopfsr/types.hpp"

#include <functional>
#include <vector>

namespace hopfsr {

struct ConjugateEntry {
  double time = 0.0;
  int multiplicity = 0;
};

struct DipOptions {
  double tol_rank = 1e-6;  // absolute acceptance threshold on the refined dip
  double guard = 1e-3;     // candidates at t <= guard are discarded
  double t_max = 0.0;      // accept candidates with t <= t_max + 1e-9
};

// Full singular-value spectrum of the monitored matrix at an arbitrary time
// inside the sweep window (detectors re-integrate from a checkpoint).
using SpectrumProbe = std::function<RVec(double t)>;

// node_sigma_min/max: smallest/largest singular value at nodes k*dt,
// k = 0..N.  Throws refinement_error when two accepted candidates land
// within one grid step of each other (grid too coarse to isolate roots).
std::vector<ConjugateEntry> detect_dips(const std::vector<double>& node_sigma_min,
                                        const std::vector<double>& node_sigma_max,
                                        double dt, const SpectrumProbe& probe,
                                        const DipOptions& opts);

}  // namespace hopfsr
