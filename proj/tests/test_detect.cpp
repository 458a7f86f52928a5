#include "doctest.h"

#include "hopfsr/dip_detect.hpp"

#include <cmath>
#include <vector>

using namespace hopfsr;

namespace {

// Synthetic rank-drop spectrum: sigma_min = slope * |t - root| plus a unit
// top singular value.  The squared minimum is an exact parabola, so the
// refinement pipeline must recover the root to high accuracy.
struct VSpectrum {
  double root = 0.5;
  double slope = 0.8;
  int extra_small = 0;  // additional singular values vanishing at the root
  double offset = 0.0;  // lifts the dip floor (dips above tol are rejected)

  RVec operator()(double t) const {
    RVec s(2 + extra_small);
    s[0] = 1.0;
    s[1] = slope * std::abs(t - root) + offset;
    for (int k = 0; k < extra_small; ++k) {
      s[2 + k] = (slope + 0.1 * (k + 1)) * std::abs(t - root) + offset;
    }
    return s;
  }
};

struct Sweep {
  std::vector<double> smin, smax;
  double dt = 0.0;
};

Sweep tabulate(const VSpectrum& vs, double dt, int nodes) {
  Sweep sw;
  sw.dt = dt;
  for (int k = 0; k <= nodes; ++k) {
    const RVec s = vs(k * dt);
    sw.smin.push_back(s.minCoeff());
    sw.smax.push_back(s.maxCoeff());
  }
  return sw;
}

DipOptions options(double t_max) {
  DipOptions o;
  o.t_max = t_max;
  return o;
}

}  // namespace

TEST_CASE("simple dip is located to refinement accuracy") {
  VSpectrum vs;
  vs.root = 0.5037;
  const Sweep sw = tabulate(vs, 0.01, 103);
  const std::vector<ConjugateEntry> entries =
      detect_dips(sw.smin, sw.smax, sw.dt, vs, options(1.0));
  REQUIRE(entries.size() == 1);
  CHECK(std::abs(entries[0].time - vs.root) <= 1e-9);
  CHECK(entries[0].multiplicity == 1);
}

TEST_CASE("multiplicity counts every vanishing singular value") {
  VSpectrum vs;
  vs.root = 0.343;
  vs.extra_small = 2;
  const Sweep sw = tabulate(vs, 0.01, 103);
  const std::vector<ConjugateEntry> entries =
      detect_dips(sw.smin, sw.smax, sw.dt, vs, options(1.0));
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].multiplicity == 3);
}

TEST_CASE("dips that stay above the rank tolerance are rejected") {
  VSpectrum vs;
  vs.root = 0.5037;
  vs.offset = 0.01;  // dip floor far above tol_rank = 1e-6
  const Sweep sw = tabulate(vs, 0.01, 103);
  CHECK(detect_dips(sw.smin, sw.smax, sw.dt, vs, options(1.0)).empty());
}

TEST_CASE("guard interval suppresses candidates at the start") {
  VSpectrum vs;
  vs.root = 5e-4;  // inside the guard (0, 1e-3]
  const Sweep sw = tabulate(vs, 2.5e-4, 4000);
  CHECK(detect_dips(sw.smin, sw.smax, sw.dt, vs, options(1.0)).empty());
}

TEST_CASE("horizon handling: roots beyond t_max are dropped, roots at t_max kept") {
  VSpectrum beyond;
  beyond.root = 1.0035;
  Sweep sw = tabulate(beyond, 0.01, 103);  // shoulder nodes past t_max = 1
  CHECK(detect_dips(sw.smin, sw.smax, sw.dt, beyond, options(1.0)).empty());

  VSpectrum inside;
  inside.root = 0.9998;
  sw = tabulate(inside, 0.01, 103);
  const std::vector<ConjugateEntry> entries =
      detect_dips(sw.smin, sw.smax, sw.dt, inside, options(1.0));
  REQUIRE(entries.size() == 1);
  CHECK(std::abs(entries[0].time - 0.9998) <= 1e-9);
  CHECK(entries[0].time <= 1.0);
}

TEST_CASE("two scan minima collapsing onto one root raise a refinement error") {
  // A spurious grid dip next to a genuine root makes two candidates refine
  // to the same time; the detector must refuse to double-count and demand a
  // finer grid instead.
  VSpectrum vs;
  vs.root = 0.51;
  Sweep sw = tabulate(vs, 0.01, 103);
  sw.smin[50] = 1e-7;   // fake local minimum
  sw.smin[51] = 0.005;  // bump separating it from the true root node
  sw.smin[52] = 1e-7;   // second fake minimum; both refine to t = 0.51
  CHECK_THROWS_AS(detect_dips(sw.smin, sw.smax, sw.dt, vs, options(1.0)),
                  refinement_error);
}

TEST_CASE("multiple separated roots are all found in order") {
  const std::vector<double> roots{0.21, 0.52, 0.83};
  auto probe = [&roots](double t) {
    RVec s(2);
    s[0] = 1.0;
    double v = 1e300;
    for (double r : roots) v = std::min(v, std::abs(t - r));
    s[1] = 0.7 * v;
    return s;
  };
  Sweep sw;
  sw.dt = 0.005;
  for (int k = 0; k <= 206; ++k) {
    const RVec s = probe(k * sw.dt);
    sw.smin.push_back(s.minCoeff());
    sw.smax.push_back(s.maxCoeff());
  }
  const std::vector<ConjugateEntry> entries =
      detect_dips(sw.smin, sw.smax, sw.dt, probe, options(1.0));
  REQUIRE(entries.size() == roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    CHECK(std::abs(entries[i].time - roots[i]) <= 1e-9);
    CHECK(entries[i].multiplicity == 1);
  }
}
