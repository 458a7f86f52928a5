// hopfsr command-line front end.
//
// Subcommands:
//   curvature-audit  sample sectional curvatures, report range and diagnostics
//   geodesic         integrate one extremal and emit the trajectory table
//   conjugate        conjugate-point reports (structural / variational / closed)
//   bounds           counting bounds over a (u0, T) grid
//   selftest         run the full acceptance suite
//
// Exit codes: 0 pass, 1 numerical/assertion failure, 2 usage error.
// All output is deterministic for a fixed seed.

#include "CLI11.hpp"
#include "json.hpp"

#include "hopfsr/acceptance.hpp"
#include "hopfsr/comparison.hpp"
#include "hopfsr/sampling.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace hopfsr;

// Shortest round-trip decimal form; keeps CSV and JSON byte-stable.
std::string num(double x) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + out_path);
  os << text;
}

int resolve_steps(int steps, double T) {
  return steps > 0 ? steps : static_cast<int>(std::ceil(4000.0 * T));
}

ordered_json report_json(const ConjugateReport& rep) {
  ordered_json entries = ordered_json::array();
  for (const ConjugateEntry& e : rep.entries) {
    entries.push_back({{"time", e.time}, {"multiplicity", e.multiplicity}});
  }
  ordered_json j{{"method", rep.method},
                 {"entries", std::move(entries)},
                 {"total", rep.total},
                 {"tol_rank", rep.tol_rank},
                 {"guard", rep.guard},
                 {"grid_step", rep.grid_step},
                 {"d_c", rep.d_c}};
  if (rep.u0.has_value()) j["u0"] = *rep.u0;
  return j;
}

// ---------------------------------------------------------------------------
// curvature-audit

struct AuditConfig {
  int n = 2;
  long samples = 100000;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
  double inject_defect = 0.0;  // hidden test hook: shifts every sample
};

int cmd_curvature_audit(const AuditConfig& cfg) {
  Rng rng(cfg.seed);
  double min_sec = 1e300, max_sec = -1e300;
  long violations = 0;
  for (long s = 0; s < cfg.samples; ++s) {
    const SpherePoint z = random_sphere_point(cfg.n, rng);
    // Sample the plane as an orthonormal pair: the curvature quotient of a
    // nearly parallel raw pair is ill-conditioned and would report roundoff,
    // not geometry.
    const HorizontalVector X = random_horizontal_unit(z, rng);
    HorizontalVector Y = random_horizontal_unit(z, rng);
    Y.v -= fs_metric(Y, X) * X.v;
    const double nrm = Y.v.norm();
    if (nrm < 1e-6) continue;
    Y.v /= nrm;
    const double sec = sectional_curvature(X, Y) + cfg.inject_defect;
    min_sec = std::min(min_sec, sec);
    max_sec = std::max(max_sec, sec);
    if (sec < 1.0 - 1e-9 || sec > 4.0 + 1e-9) ++violations;
  }

  // Curvature-tensor symmetry residuals on an independent batch.
  double anti = 0.0, pair_sym = 0.0, bianchi = 0.0;
  for (int s = 0; s < 64; ++s) {
    const SpherePoint z = random_sphere_point(cfg.n, rng);
    const HorizontalVector X = horizontal_project(z, random_ambient(cfg.n, rng));
    const HorizontalVector Y = horizontal_project(z, random_ambient(cfg.n, rng));
    const HorizontalVector Z = horizontal_project(z, random_ambient(cfg.n, rng));
    const HorizontalVector W = horizontal_project(z, random_ambient(cfg.n, rng));
    const double r = riemann4(X, Y, Z, W);
    anti = std::max(anti, std::abs(r + riemann4(Y, X, Z, W)));
    pair_sym = std::max(pair_sym, std::abs(r - riemann4(Z, W, X, Y)));
    bianchi = std::max(bianchi,
                       std::abs(r + riemann4(Y, Z, X, W) + riemann4(Z, X, Y, W)));
  }

  // Normalization of the complex structure against the connection form: the
  // ratio d(connection form)/g(JX, Y) is a geometric constant.
  double ratio_min = 1e300, ratio_max = -1e300, ratio_sum = 0.0;
  int ratio_count = 0;
  for (int s = 0; s < 32; ++s) {
    const SpherePoint z = random_sphere_point(cfg.n, rng);
    const HorizontalVector X = random_horizontal_unit(z, rng);
    const HorizontalVector Y = random_horizontal_unit(z, rng);
    const std::optional<double> ratio = curvature_form_diagnostic(X, Y);
    if (!ratio) continue;
    ratio_min = std::min(ratio_min, *ratio);
    ratio_max = std::max(ratio_max, *ratio);
    ratio_sum += *ratio;
    ++ratio_count;
  }

  const bool pass = violations == 0;
  if (cfg.format == "json") {
    ordered_json j{{"command", "curvature-audit"},
                   {"n", cfg.n},
                   {"samples", cfg.samples},
                   {"seed", cfg.seed},
                   {"min_sec", min_sec},
                   {"max_sec", max_sec},
                   {"violations", violations},
                   {"range", {1.0 - 1e-9, 4.0 + 1e-9}},
                   {"injected_defect", cfg.inject_defect},
                   {"symmetry_residuals",
                    {{"antisymmetry", anti},
                     {"pair_symmetry", pair_sym},
                     {"first_bianchi", bianchi}}},
                   {"j_normalization_ratio",
                    {{"count", ratio_count},
                     {"mean", ratio_count ? ratio_sum / ratio_count : 0.0},
                     {"min", ratio_count ? ratio_min : 0.0},
                     {"max", ratio_count ? ratio_max : 0.0}}},
                   {"pass", pass}};
    emit(j.dump(2) + "\n", cfg.out);
  } else {
    std::ostringstream os;
    os << "n,samples,min_sec,max_sec,violations,antisymmetry,pair_symmetry,"
          "first_bianchi,j_ratio_mean,pass\n";
    os << cfg.n << ',' << cfg.samples << ',' << num(min_sec) << ','
       << num(max_sec) << ',' << violations << ',' << num(anti) << ','
       << num(pair_sym) << ',' << num(bianchi) << ','
       << num(ratio_count ? ratio_sum / ratio_count : 0.0) << ','
       << (pass ? 1 : 0) << '\n';
    emit(os.str(), cfg.out);
  }
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// geodesic

struct GeodesicConfig {
  int n = 2;
  double u0 = 0.0;
  double T = 7.0;
  int steps = 0;
  int dir = 0;
  bool random = false;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
};

int cmd_geodesic(const GeodesicConfig& cfg) {
  PhasePoint lambda0 = [&] {
    if (cfg.random) {
      Rng rng(cfg.seed);
      return random_extremal_start(cfg.n, cfg.u0, rng);
    }
    return standard_extremal_start(cfg.n, cfg.dir, cfg.u0);
  }();

  const int steps = resolve_steps(cfg.steps, cfg.T);
  const GeodesicArc arc = integrate_extremal(lambda0, cfg.T, steps);

  std::vector<std::string> columns{"t"};
  const int dim = lambda0.z.ambient_dim();
  for (int k = 0; k < dim; ++k) {
    columns.push_back("re_z" + std::to_string(k));
    columns.push_back("im_z" + std::to_string(k));
  }
  for (int k = 0; k < dim; ++k) {
    columns.push_back("re_p" + std::to_string(k));
    columns.push_back("im_p" + std::to_string(k));
  }
  columns.push_back("h");
  columns.push_back("u0");
  columns.push_back("closed_form_deviation");

  std::vector<std::vector<double>> rows;
  rows.reserve(arc.states.size());
  for (std::size_t i = 0; i < arc.states.size(); ++i) {
    const PhasePoint& st = arc.states[i];
    const PhasePoint cf = closed_form_geodesic(lambda0, arc.times[i]);
    const double dev = std::max((st.z.z - cf.z.z).cwiseAbs().maxCoeff(),
                                (st.p - cf.p).cwiseAbs().maxCoeff());
    std::vector<double> row{arc.times[i]};
    for (int k = 0; k < dim; ++k) {
      row.push_back(st.z.z[k].real());
      row.push_back(st.z.z[k].imag());
    }
    for (int k = 0; k < dim; ++k) {
      row.push_back(st.p[k].real());
      row.push_back(st.p[k].imag());
    }
    row.push_back(hamiltonian(st));
    // Report the conserved vertical momentum in the same curvature-weighted
    // convention as the --u0 parameter (twice the raw fiber momentum).
    row.push_back(2.0 * vertical_momentum(st));
    row.push_back(dev);
    rows.push_back(std::move(row));
  }

  if (cfg.format == "json") {
    ordered_json j{{"command", "geodesic"},
                   {"n", cfg.n},
                   {"u0", cfg.u0},
                   {"T", cfg.T},
                   {"steps", steps},
                   {"seed", cfg.seed},
                   {"random_start", cfg.random},
                   {"dir", cfg.dir},
                   {"method", arc.method},
                   {"columns", columns},
                   {"rows", rows}};
    emit(j.dump(2) + "\n", cfg.out);
  } else {
    std::ostringstream os;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      os << (c ? "," : "") << columns[c];
    }
    os << '\n';
    for (const std::vector<double>& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        os << (c ? "," : "") << num(row[c]);
      }
      os << '\n';
    }
    emit(os.str(), cfg.out);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// conjugate

struct ConjugateConfig {
  int n = 2;
  double u0 = 0.0;
  double T = 7.0;
  int steps = 0;
  double tol = 1e-6;
  std::string method = "all";
  std::string format = "json";
  std::string out;
};

// The detectors are contracted to agree to 1e-4 in time (grid refinement is
// an order coarser than the rank tolerance), so the agreement gate is fixed
// rather than tied to --tol.
constexpr double kAgreementTol = 1e-4;

int cmd_conjugate(const ConjugateConfig& cfg) {
  const PhasePoint lambda0 = standard_extremal_start(cfg.n, 0, cfg.u0);
  DetectOptions opts;
  opts.total_steps = resolve_steps(cfg.steps, cfg.T);
  opts.tol_rank = cfg.tol;

  std::vector<ConjugateReport> reports;
  if (cfg.method == "structural" || cfg.method == "all") {
    reports.push_back(conjugate_times_structural(lambda0, cfg.T, opts));
  }
  if (cfg.method == "variational" || cfg.method == "all") {
    reports.push_back(conjugate_times_variational(lambda0, cfg.T, opts));
  }
  if (cfg.method == "closed" || cfg.method == "all") {
    reports.push_back(closed_form_conjugate_times_for(lambda0, cfg.T));
  }

  double max_gap = 0.0;
  int mult_mismatches = 0;
  bool count_mismatch = false;
  for (std::size_t a = 0; a < reports.size(); ++a) {
    for (std::size_t b = a + 1; b < reports.size(); ++b) {
      if (reports[a].entries.size() != reports[b].entries.size()) {
        count_mismatch = true;
        continue;
      }
      for (std::size_t i = 0; i < reports[a].entries.size(); ++i) {
        max_gap = std::max(max_gap, std::abs(reports[a].entries[i].time -
                                             reports[b].entries[i].time));
        if (reports[a].entries[i].multiplicity !=
            reports[b].entries[i].multiplicity) {
          ++mult_mismatches;
        }
      }
    }
  }
  const bool agree =
      !count_mismatch && mult_mismatches == 0 && max_gap <= kAgreementTol;

  if (cfg.format == "json") {
    ordered_json jreports = ordered_json::array();
    for (const ConjugateReport& rep : reports) jreports.push_back(report_json(rep));
    ordered_json j{{"command", "conjugate"},
                   {"n", cfg.n},
                   {"u0", cfg.u0},
                   {"T", cfg.T},
                   {"steps", opts.total_steps},
                   {"tol_rank", cfg.tol},
                   {"method", cfg.method},
                   {"reports", std::move(jreports)}};
    if (reports.size() > 1) {
      j["agreement"] = ordered_json{{"max_time_gap", max_gap},
                                    {"multiplicity_mismatches", mult_mismatches},
                                    {"count_mismatch", count_mismatch},
                                    {"tolerance", kAgreementTol},
                                    {"pass", agree}};
    }
    emit(j.dump(2) + "\n", cfg.out);
  } else {
    std::ostringstream os;
    os << "method,time,multiplicity\n";
    for (const ConjugateReport& rep : reports) {
      for (const ConjugateEntry& e : rep.entries) {
        os << rep.method << ',' << num(e.time) << ',' << e.multiplicity << '\n';
      }
    }
    emit(os.str(), cfg.out);
  }
  return reports.size() > 1 && !agree ? 1 : 0;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsConfig {
  int n = 2;
  std::vector<double> u0_grid{0.0, 1.0, 2.0};
  std::vector<double> T_grid{2.0, 4.0, 6.0};
  int steps = 0;
  double tol = 1e-6;
  std::string format = "json";
  std::string out;
};

int cmd_bounds(const BoundsConfig& cfg) {
  ordered_json jrows = ordered_json::array();
  std::ostringstream csv;
  csv << "u0,T,dc,z_lower,predicted,measured,z_upper,pass\n";
  bool all_pass = true;

  for (double u0 : cfg.u0_grid) {
    for (double T : cfg.T_grid) {
      const PhasePoint lambda0 = standard_extremal_start(cfg.n, 0, u0);
      DetectOptions opts;
      opts.total_steps = resolve_steps(cfg.steps, T);
      opts.tol_rank = cfg.tol;
      const ConjugateReport rep = conjugate_times_structural(lambda0, T, opts);
      const BoundsReport br = bounds_check(rep, u0, cfg.n, T);
      const CorollaryIntervals ci = corollary_intervals(u0, cfg.n);

      auto count_within = [&rep](double radius) {
        int c = 0;
        for (const ConjugateEntry& e : rep.entries) {
          if (e.time <= radius + 1e-9) c += e.multiplicity;
        }
        return c;
      };
      const bool corollary_ok =
          (rep.entries.empty() ||
           rep.first_time() >= ci.conjugate_free_radius - 1e-9) &&
          (T < ci.at_least_dc_radius || count_within(ci.at_least_dc_radius) >= ci.d_c) &&
          (T < ci.at_least_dc1_radius ||
           count_within(ci.at_least_dc1_radius) >= ci.d_c + 1);

      all_pass = all_pass && br.pass;
      csv << num(br.u0) << ',' << num(br.T) << ',' << br.d_c << ','
          << br.z_lower << ',' << br.predicted << ',' << br.measured << ','
          << br.z_upper << ',' << (br.pass ? 1 : 0) << '\n';
      jrows.push_back(ordered_json{
          {"u0", br.u0},
          {"T", br.T},
          {"dc", br.d_c},
          {"z_lower", br.z_lower},
          {"predicted", br.predicted},
          {"measured", br.measured},
          {"z_upper", br.z_upper},
          {"pass", br.pass},
          {"conjugate_free_radius", ci.conjugate_free_radius},
          {"at_least_dc_radius", ci.at_least_dc_radius},
          {"at_least_dc1_radius", ci.at_least_dc1_radius},
          {"corollary_respected", corollary_ok}});
    }
  }

  if (cfg.format == "json") {
    ordered_json j{{"command", "bounds"},
                   {"n", cfg.n},
                   {"rows", std::move(jrows)},
                   {"pass", all_pass}};
    emit(j.dump(2) + "\n", cfg.out);
  } else {
    emit(csv.str(), cfg.out);
  }
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// selftest

struct SelftestConfig {
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string out;
};

int cmd_selftest(const SelftestConfig& cfg) {
  AcceptanceOptions opts;
  opts.seed = cfg.seed;
  const std::vector<CriterionResult> results = run_acceptance(opts);
  bool all_pass = true;
  for (const CriterionResult& r : results) all_pass = all_pass && r.pass;

  if (cfg.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const CriterionResult& r : results) {
      arr.push_back(ordered_json{{"id", r.id},
                                 {"name", r.name},
                                 {"pass", r.pass},
                                 {"detail", r.detail}});
    }
    ordered_json j{{"command", "selftest"},
                   {"seed", cfg.seed},
                   {"criteria", std::move(arr)},
                   {"pass", all_pass}};
    emit(j.dump(2) + "\n", cfg.out);
  } else {
    std::ostringstream os;
    for (const CriterionResult& r : results) {
      os << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": "
         << r.name << " -- " << r.detail << '\n';
    }
    os << (all_pass ? "all criteria passed\n" : "CRITERIA FAILED\n");
    emit(os.str(), cfg.out);
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-Riemannian geodesic flow, curvature and conjugate-point "
               "toolkit for the complex Hopf fibration"};
  app.require_subcommand(1);

  AuditConfig audit;
  CLI::App* sc_audit = app.add_subcommand(
      "curvature-audit", "sample horizontal sectional curvatures");
  sc_audit->add_option("--n", audit.n, "fibration index")->check(CLI::Range(1, 16));
  sc_audit->add_option("--samples", audit.samples, "number of random planes")
      ->check(CLI::PositiveNumber);
  sc_audit->add_option("--seed", audit.seed, "random seed");
  sc_audit->add_option("--format", audit.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  sc_audit->add_option("--out", audit.out, "output file (default stdout)");
  sc_audit->add_option("--inject-curvature-defect", audit.inject_defect,
                       "shift every curvature sample (negative-control hook)")
      ->group("");

  GeodesicConfig geo;
  CLI::App* sc_geo =
      app.add_subcommand("geodesic", "integrate one extremal trajectory");
  sc_geo->add_option("--n", geo.n, "fibration index")->check(CLI::Range(1, 16));
  sc_geo->add_option("--u0", geo.u0,
                     "curvature-weighted vertical momentum 2 Re<p, i z>");
  sc_geo->add_option("--T", geo.T, "final time")->check(CLI::PositiveNumber);
  sc_geo->add_option("--steps", geo.steps, "integration steps (0: 4000 per unit time)");
  sc_geo->add_option("--dir", geo.dir, "standard horizontal direction index in [0, 2n)");
  sc_geo->add_flag("--random", geo.random, "draw the start from --seed instead of --dir");
  sc_geo->add_option("--seed", geo.seed, "random seed");
  sc_geo->add_option("--format", geo.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  sc_geo->add_option("--out", geo.out, "output file (default stdout)");

  ConjugateConfig conj;
  CLI::App* sc_conj =
      app.add_subcommand("conjugate", "conjugate-point reports and agreement");
  sc_conj->add_option("--n", conj.n, "fibration index")->check(CLI::Range(1, 16));
  sc_conj->add_option("--u0", conj.u0,
                      "curvature-weighted vertical momentum 2 Re<p, i z>");
  sc_conj->add_option("--T", conj.T, "final time")->check(CLI::PositiveNumber);
  sc_conj->add_option("--steps", conj.steps, "detection grid steps (0: 4000 per unit time)");
  sc_conj->add_option("--tol", conj.tol, "rank tolerance")->check(CLI::PositiveNumber);
  sc_conj->add_option("--method", conj.method, "detector selection")
      ->check(CLI::IsMember({"structural", "variational", "closed", "all"}));
  sc_conj->add_option("--format", conj.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  sc_conj->add_option("--out", conj.out, "output file (default stdout)");

  BoundsConfig bounds;
  CLI::App* sc_bounds =
      app.add_subcommand("bounds", "counting bounds over a (u0, T) grid");
  sc_bounds->add_option("--n", bounds.n, "fibration index")->check(CLI::Range(1, 16));
  sc_bounds->add_option("--u0-grid", bounds.u0_grid, "comma-separated u0 values")
      ->delimiter(',');
  sc_bounds->add_option("--T-grid", bounds.T_grid, "comma-separated T values")
      ->delimiter(',');
  sc_bounds->add_option("--steps", bounds.steps, "detection grid steps (0: 4000 per unit time)");
  sc_bounds->add_option("--tol", bounds.tol, "rank tolerance")->check(CLI::PositiveNumber);
  sc_bounds->add_option("--format", bounds.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  sc_bounds->add_option("--out", bounds.out, "output file (default stdout)");

  SelftestConfig self;
  CLI::App* sc_self =
      app.add_subcommand("selftest", "run the full acceptance suite");
  sc_self->add_option("--seed", self.seed, "random seed");
  sc_self->add_option("--format", self.format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  sc_self->add_option("--out", self.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sc_audit->parsed()) return cmd_curvature_audit(audit);
    if (sc_geo->parsed()) return cmd_geodesic(geo);
    if (sc_conj->parsed()) return cmd_conjugate(conj);
    if (sc_bounds->parsed()) return cmd_bounds(bounds);
    if (sc_self->parsed()) return cmd_selftest(self);
  } catch (const integration_error& e) {
    std::cerr << "integration failure at t = " << e.time() << ": " << e.what()
              << "\n";
    return 1;
  } catch (const refinement_error& e) {
    std::cerr << e.what() << " (suggestion: increase --steps)\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
