// hopfsr/dip_detect.cpp

#include "hopfsr/dip_detect.hpp"

#include <algorithm>
#include <cmath>

namespace hopfsr {

namespace {

// Vertex of the parabola through (x1,y1), (x2,y2), (x3,y3); returns x2 when
// the points carry no convex curvature.
double parabola_vertex(double x1, double y1, double x2, double y2, double x3,
                       double y3) {
  const double d21 = (y2 - y1) / (x2 - x1);
  const double d32 = (y3 - y2) / (x3 - x2);
  const double curv = (d32 - d21) / (x3 - x1);
  if (!(curv > 0.0)) return x2;
  // Vertex of y = y2 + d21 (x - x1)(...)  in Newton form.
  const double vertex = 0.5 * (x1 + x2 - d21 / curv);
  return vertex;
}

}  // namespace

std::vector<ConjugateEntry> detect_dips(const std::vector<double>& smin,
                                        const std::vector<double>& smax,
                                        double dt, const SpectrumProbe& probe,
                                        const DipOptions& opts) {
  if (smin.size() != smax.size() || smin.size() < 3) {
    throw std::invalid_argument("detect_dips: inconsistent node data");
  }
  const std::size_t N = smin.size() - 1;
  const double accept_cut = opts.t_max + 1e-9;

  std::vector<ConjugateEntry> entries;
  std::vector<double> refined_times;

  for (std::size_t k = 1; k + 1 <= N; ++k) {
    // Local minimum (left-biased tie break) that dips well below the local
    // matrix scale.  True rank drops reach ~ slope*dt/2 at the nearest node,
    // far below 5% of scale on any sane grid; the refined acceptance test
    // below rejects shallow false positives.
    if (!(smin[k] <= smin[k - 1] && smin[k] < smin[k + 1])) continue;
    const double scale_k = std::max(smax[k], 1e-300);
    if (!(smin[k] < 0.05 * scale_k)) continue;

    const double tl = (k - 1) * dt, tc = k * dt, tr = (k + 1) * dt;

    // Stage 1: fit on the stored squared node values.
    double t_hat = parabola_vertex(tl, smin[k - 1] * smin[k - 1], tc,
                                   smin[k] * smin[k], tr, smin[k + 1] * smin[k + 1]);
    t_hat = std::clamp(t_hat, tl, tr);

    // Stage 2: iterate with re-evaluated spectra at shrinking spacings.
    for (const double frac : {1.0 / 8.0, 1.0 / 64.0, 1.0 / 512.0}) {
      const double eta = frac * dt;
      double a = t_hat - eta, b = t_hat, c = t_hat + eta;
      if (a < tl) { a = tl; b = tl + eta; c = tl + 2.0 * eta; }
      if (c > tr) { c = tr; b = tr - eta; a = tr - 2.0 * eta; }
      const double ya = probe(a).minCoeff();
      const double yb = probe(b).minCoeff();
      const double yc = probe(c).minCoeff();
      t_hat = std::clamp(parabola_vertex(a, ya * ya, b, yb * yb, c, yc * yc), tl, tr);
    }

    if (t_hat <= opts.guard || t_hat > accept_cut) continue;

    const RVec spectrum = probe(t_hat);
    const double dip = spectrum.minCoeff();
    if (!(dip <= opts.tol_rank)) continue;  // shallow dip, not a rank drop

    const double scale = std::max(spectrum.maxCoeff(), 1e-300);
    int mult = 0;
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
      if (spectrum[i] <= opts.tol_rank * scale) ++mult;
    }
    mult = std::max(mult, 1);

    refined_times.push_back(t_hat);
    entries.push_back(ConjugateEntry{std::min(t_hat, opts.t_max), mult});
  }

  for (std::size_t i = 1; i < refined_times.size(); ++i) {
    if (refined_times[i] - refined_times[i - 1] < dt) {
      throw refinement_error(
          "two conjugate-time candidates landed within one grid step; "
          "increase steps to isolate the roots");
    }
  }
  return entries;
}

}  // namespace hopfsr
