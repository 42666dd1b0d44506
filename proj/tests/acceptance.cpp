// Acceptance run: one PASS/FAIL line per criterion, followed by the evidence.
// Exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "hsmap/orthopoly.hpp"
#include "hsmap/shooting.hpp"
#include "hsmap/spectra.hpp"
#include "hsmap/sturm.hpp"

using namespace hsmap;

namespace {

// Tolerances of the criteria.
constexpr double kLambdaTol = 1e-6;
constexpr double kEigenfunctionTol = 1e-5;
constexpr double kEigenfunctionWindow = 8.0;
constexpr double kWeylRelTol = 0.05;
constexpr double kCertifyTol = 1e-8;
constexpr double kPolyResidualTol = 1e-8;
constexpr double kMachineTol = 8 * std::numeric_limits<double>::epsilon();
constexpr double kProportionalityTol = 1e-11;
constexpr double kSolveTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details.push_back(std::string(ok ? "  ok    " : "  FAIL  ") + what);
  }
  void info(const std::string& what) { details.push_back("        " + what); }
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::string name(const ProblemSpec& p) {
  return fmt("%s(%d,%d,%d) k=%d", to_string(p.family), p.g, p.m0, p.m1, p.k);
}

struct Covered {
  Family family;
  ClosedForm kind;
  const char* label;
};

const Covered kCovered[] = {
    {Family::Sphere, ClosedForm::Identity, "sphere identity"},
    {Family::Sphere, ClosedForm::LinearOneMinusG, "sphere (1-g)-linear"},
    {Family::SpecialOrthogonal, ClosedForm::Identity, "SO identity"},
    {Family::SpecialOrthogonal, ClosedForm::LinearOneMinusTwoG, "SO (1-2g)-linear"},
    {Family::SU3, ClosedForm::SU3Identity, "SU(3) identity"},
};

struct Solved {
  const Covered* covered;
  ProblemSpec spec;
  SpectrumReport report;
};

// Max-normalized, sign-aligned sup distance on |x| <= window.
double shape_distance(const std::vector<EigenSample>& f, const std::function<double(double)>& g,
                      double window) {
  double fmax = 0.0, gmax = 0.0, dot = 0.0;
  for (const auto& s : f) {
    if (std::abs(s.x) > window) continue;
    fmax = std::max(fmax, std::abs(s.xi));
    gmax = std::max(gmax, std::abs(g(s.x)));
    dot += s.xi * g(s.x);
  }
  const double sign = dot < 0 ? -1.0 : 1.0;
  double worst = 0.0;
  for (const auto& s : f)
    if (std::abs(s.x) <= window) worst = std::max(worst, std::abs(s.xi / fmax - sign * g(s.x) / gmax));
  return worst;
}

// Criterion 1: numeric spectra against the closed forms, j = 1..8.
Outcome closed_form_reproduction(const std::vector<Solved>& solved) {
  Outcome o;
  std::map<std::string, std::pair<int, double>> per_pair;  // failures, worst diff
  for (const auto& s : solved) {
    const auto a = analytic_spectrum(s.spec, s.covered->kind);
    double worst = 0.0;
    for (const auto& p : s.report.pairs)
      if (p.j <= 8) worst = std::max(worst, std::abs(p.lambda_x - a.lambda(p.j)));
    auto& agg = per_pair[s.covered->label];
    agg.second = std::max(agg.second, worst);
    if (!(worst < kLambdaTol)) {
      ++agg.first;
      o.info(fmt("%s: max |dlambda| = %.3g", name(s.spec).c_str(), worst));
    }
  }
  for (const auto& [label, agg] : per_pair)
    o.check(agg.first == 0, fmt("%-20s %d failing parameter sets, worst |dlambda_x| = %.3g", label.c_str(),
                                agg.first, agg.second));
  return o;
}

// Criterion 2: lambda_1 = 1 - m for the g = 1 identity.
Outcome smallest_eigenvalue_g1() {
  Outcome o;
  for (int m = 2; m <= 7; ++m) {
    const auto spec = closed_form_problem(Family::Sphere, ClosedForm::Identity, 1, m, m);
    const double l1 = eigenvalue(jacobi_coefficients(spec, ClosedForm::Identity), 1, kSolveTol);
    o.check(std::abs(l1 - (1.0 - m)) < kLambdaTol,
            fmt("m = %d: lambda_1 = %.12f, |lambda_1 - (1 - m)| = %.3g", m, l1, std::abs(l1 - (1.0 - m))));
  }
  return o;
}

// Criterion 3: the eigenfunction at 1 - m is r' of the identity.
Outcome rprime_eigenfunction() {
  Outcome o;
  for (int m = 2; m <= 7; ++m) {
    const auto spec = closed_form_problem(Family::Sphere, ClosedForm::Identity, 1, m, m);
    const auto identity = linear_solution(spec, ClosedForm::Identity);
    const auto f = eigenfunction(jacobi_coefficients(spec, ClosedForm::Identity), 1.0 - m);
    const double d =
        shape_distance(f, [&](double x) { return identity.rprime(x); }, kEigenfunctionWindow);
    o.check(d < kEigenfunctionTol, fmt("m = %d: sup |xi - r'| (normalized, |x| <= 8) = %.3g", m, d));
  }
  return o;
}

// Criterion 4: the stability lists, the g = 1 instability and the borderline flags.
Outcome stability_reproduction() {
  Outcome o;
  ReproductionOptions opts;
  opts.formula_j_max = 1;
  int checked = 0;
  for (const auto& row : reproduction_table(opts)) {
    const bool in_scope = row.section.rfind("stable list:", 0) == 0 ||
                          row.section == "unstable: sphere identity g = 1";
    if (!in_scope) continue;
    ++checked;
    if (row.expected == "weakly_stable") {
      o.check(row.agrees && row.verdict == Stability::WeaklyStable && !row.note.empty(),
              fmt("%s %s: lambda_1 = %.3g, reported %s, flagged \"%s\"", row.section.c_str(),
                  name(row.spec).c_str(), row.lambda1_numeric, to_string(row.verdict), row.note.c_str()));
    } else if (!row.agrees) {
      o.check(false, fmt("%s %s: expected %s, lambda_1 closed form %.6g numeric %.6g (%s)",
                         row.section.c_str(), name(row.spec).c_str(), row.expected.c_str(),
                         row.lambda1_analytic, row.lambda1_numeric, row.note.c_str()));
    }
  }
  o.info(fmt("%d rows checked", checked));
  return o;
}

// Criterion 5: zero counts, interlacing and Pruefer count increments, j_max = 10.
Outcome oscillation(const std::vector<Solved>& solved) {
  Outcome o;
  int bad = 0, reports = 0;
  for (const auto& s : solved) {
    ++reports;
    const auto coeffs = jacobi_coefficients(s.spec, s.covered->kind);
    std::string why;
    const auto& pairs = s.report.pairs;
    if (pairs.size() != 10) why += "fewer than 10 pairs; ";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& p = pairs[i];
      if (p.zero_count != p.j - 1) why += fmt("j=%d has %d zeros; ", p.j, p.zero_count);
      if (i > 0 && !interlaces(zeros_of(pairs[i - 1].eigenfunction), zeros_of(p.eigenfunction)))
        why += fmt("zeros of j=%d and j=%d do not interlace; ", p.j - 1, p.j);
      const double d = 1e-6 * std::max(1.0, std::abs(p.lambda_x));
      const int below = pruefer_count(coeffs, p.lambda_x - d);
      const int above = pruefer_count(coeffs, p.lambda_x + d);
      if (below != p.j - 1 || above != p.j)
        why += fmt("count across lambda_%d goes %d -> %d; ", p.j, below, above);
    }
    if (!why.empty()) {
      ++bad;
      o.check(false, name(s.spec) + ": " + why);
    }
  }
  o.info(fmt("%d spectrum reports, %d with violations", reports, bad));
  return o;
}

// Criterion 6: Weyl slope at j_max = 30.
Outcome weyl() {
  Outcome o;
  const std::pair<ProblemSpec, ClosedForm> cases[] = {
      {closed_form_problem(Family::Sphere, ClosedForm::Identity, 2, 2, 2), ClosedForm::Identity},
      {closed_form_problem(Family::SpecialOrthogonal, ClosedForm::Identity, 2, 2, 2), ClosedForm::Identity},
      {closed_form_problem(Family::SU3, ClosedForm::SU3Identity, 1, 1, 1), ClosedForm::SU3Identity},
  };
  for (const auto& [spec, kind] : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = solve_spectrum(spec, kind, 30, 1e-8);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double slope = rep.weyl_slope.value_or(std::nan(""));
    const double rel = std::abs(slope - rep.weyl_target) / rep.weyl_target;
    o.check(rel < kWeylRelTol, fmt("%s: slope %.5f, pi^2/L^2 = %.5f, rel. deviation %.3g (%.1f s)",
                                   name(spec).c_str(), slope, rep.weyl_target, rel, secs));
  }
  return o;
}

// Criterion 7: shooting families.
Outcome families() {
  Outcome o;
  for (int g : {1, 2}) {
    const auto spec = make_problem(Family::Sphere, g, 3, 3, 1);
    const auto fam = find_family(spec, kDefaultAmplitudeRange, 200, kCertifyTol);
    std::set<int> nodal;
    int certified = 0;
    for (const auto& p : fam) {
      const bool ok = p.boundary_defect < kCertifyTol && p.residual_norm < kCertifyTol;
      if (ok) {
        ++certified;
        nodal.insert(p.nodal_number);
      }
      o.info(fmt("%s A = %.10g nodal %d defect %.2e residual %.2e%s", name(spec).c_str(),
                 p.shooting_parameter, p.nodal_number, p.boundary_defect, p.residual_norm,
                 p.is_linear ? " (linear)" : ""));
    }
    o.check(certified >= 3 && nodal.size() == static_cast<std::size_t>(certified),
            fmt("%s: %d certified solutions, %zu distinct nodal numbers", name(spec).c_str(), certified,
                nodal.size()));
  }
  {
    const auto spec = make_problem(Family::Sphere, 1, 6, 6, 1);
    const auto fam = find_family(spec, kDefaultAmplitudeRange, 200, kCertifyTol);
    const bool only_linear =
        !fam.empty() && std::all_of(fam.begin(), fam.end(), [](const auto& p) { return p.is_linear; });
    o.check(only_linear, fmt("%s: %zu solutions found, all linear: %s (consistency, not proof)",
                             name(spec).c_str(), fam.size(), only_linear ? "yes" : "no"));
  }
  {
    const auto spec = make_problem(Family::SU3, 1, 1, 1, 0);
    const auto fam = find_family(spec, kDefaultAmplitudeRange, 200, kCertifyTol);
    const auto it = std::find_if(fam.begin(), fam.end(), [](const auto& p) { return !p.is_linear; });
    if (it == fam.end()) {
      o.check(false, "SU(3): no nonlinear solution found");
    } else {
      const double r_inf = it->samples.back().r;
      const bool ok = std::abs(it->target - std::numbers::pi / 2) < 1e-12 && it->boundary_defect < kCertifyTol;
      o.check(ok, fmt("SU(3): first nonlinear solution A = %.10g, target %.15g (l = 0), r(X) = %.10g, "
                      "defect %.2e",
                      it->shooting_parameter, it->target, r_inf, it->boundary_defect));
    }
  }
  return o;
}

// Criterion 8: orthogonal polynomials.
Outcome polynomials() {
  Outcome o;
  double worst_abs = 0.0, worst_rel = 0.0;
  std::vector<PolyKind> kinds;
  for (double a : {-0.5, 0.0, 0.5, 1.5, 3.5})
    for (double b : {-0.5, 0.0, 1.0, 2.5}) kinds.push_back(Jacobi{a, b});
  for (double d : {0.5, 1.0, 2.0, 4.5}) kinds.push_back(Gegenbauer{d});
  for (const auto& kind : kinds) {
    for (int j = 0; j <= 12; ++j) {
      for (int i = 0; i <= 40; ++i) {
        const double x = -0.95 + 1.9 * i / 40.0;
        const double r = std::abs(poly_ode_residual(kind, j, x));
        worst_abs = std::max(worst_abs, r);
        worst_rel = std::max(worst_rel, r / std::max(1.0, std::abs(eval_poly(kind, j, x))));
      }
    }
  }
  o.check(worst_rel < kPolyResidualTol,
          fmt("ODE residual j <= 12, both families: worst %.3g relative to max(1, |P|) (absolute %.3g)",
              worst_rel, worst_abs));

  double worst_low = 0.0;
  for (double d : {0.5, 1.0, 2.0, 4.5}) {
    for (int i = 0; i <= 40; ++i) {
      const double x = -1.0 + i / 20.0;
      const double closed[] = {1.0, 2 * d * x, -d + 2 * d * (1 + d) * x * x,
                               -2 * d * (1 + d) * x + 4.0 / 3.0 * d * (1 + d) * (2 + d) * x * x * x};
      for (int j = 0; j <= 3; ++j) {
        const double diff = std::abs(eval_poly(PolyKind{Gegenbauer{d}}, j, x) - closed[j]);
        worst_low = std::max(worst_low, diff / std::max(1.0, std::abs(closed[j])));
      }
    }
  }
  o.check(worst_low < kMachineTol, fmt("Gegenbauer j <= 3 against the written-out forms: worst %.3g", worst_low));

  double worst_prop = 0.0;
  for (double d : {0.75, 1.5, 2.0, 4.5}) {
    for (int j = 1; j <= 12; ++j) {
      double cp = 0.0, pp = 0.0, cc = 0.0;
      std::vector<std::pair<double, double>> v;
      for (int i = 0; i < 100; ++i) {
        const double x = -0.99 + 1.98 * i / 99.0;
        const double c = eval_poly(PolyKind{Gegenbauer{d}}, j, x);
        const double p = eval_poly(PolyKind{Jacobi{d - 0.5, d - 0.5}}, j, x);
        v.emplace_back(c, p);
        cp += c * p;
        pp += p * p;
        cc += c * c;
      }
      const double ratio = cp / pp;
      double res = 0.0;
      for (const auto& [c, p] : v) res += (c - ratio * p) * (c - ratio * p);
      worst_prop = std::max(worst_prop, std::sqrt(res / cc));
    }
  }
  o.check(worst_prop < kProportionalityTol,
          fmt("C_j^(d) proportional to P_j^(d-1/2,d-1/2) on 100 points: worst relative residual %.3g",
              worst_prop));
  return o;
}

// Criterion 9: coincidences of computed spectra, j <= 10.
Outcome coincidences() {
  Outcome o;
  const auto compare = [&](const std::string& what, const ProblemSpec& a, ClosedForm ka, const ProblemSpec& b,
                           ClosedForm kb) {
    const auto ra = solve_spectrum(a, ka, 10, kSolveTol);
    const auto rb = solve_spectrum(b, kb, 10, kSolveTol);
    double worst = 0.0;
    for (int j = 0; j < 10; ++j) worst = std::max(worst, std::abs(ra.pairs[j].lambda_x - rb.pairs[j].lambda_x));
    const auto aa = analytic_spectrum(a, ka), ab = analytic_spectrum(b, kb);
    double worst_formula = 0.0;
    for (int j = 1; j <= 10; ++j) worst_formula = std::max(worst_formula, std::abs(aa.lambda(j) - ab.lambda(j)));
    o.check(worst < kLambdaTol,
            fmt("%s: max |dlambda| computed %.3g (closed forms %.3g); lambda_1..3 computed %.6g %.6g %.6g vs "
                "%.6g %.6g %.6g",
                what.c_str(), worst, worst_formula, ra.pairs[0].lambda_x, ra.pairs[1].lambda_x,
                ra.pairs[2].lambda_x, rb.pairs[0].lambda_x, rb.pairs[1].lambda_x, rb.pairs[2].lambda_x));
  };
  for (int m = 1; m <= 8; ++m) {
    if (!admissible_triple(2, m, m)) continue;
    compare(fmt("sphere (2,%d,%d) identity vs (1-g)-linear", m, m),
            closed_form_problem(Family::Sphere, ClosedForm::Identity, 2, m, m), ClosedForm::Identity,
            closed_form_problem(Family::Sphere, ClosedForm::LinearOneMinusG, 2, m, m),
            ClosedForm::LinearOneMinusG);
  }
  compare("SU(3) identity vs sphere (1,7,7) identity",
          closed_form_problem(Family::SU3, ClosedForm::SU3Identity, 1, 1, 1), ClosedForm::SU3Identity,
          closed_form_problem(Family::Sphere, ClosedForm::Identity, 1, 7, 7), ClosedForm::Identity);
  return o;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Solved> solved;
  for (const auto& cv : kCovered)
    for (const auto& p : covered_problems(cv.family, cv.kind, 8))
      solved.push_back({&cv, p, solve_spectrum(p, cv.kind, 10, kSolveTol)});

  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"closed-form spectra, j <= 8, |dlambda_x| < 1e-6", [&] { return closed_form_reproduction(solved); }},
      {"g = 1 identity: lambda_1 = 1 - m, m = 2..7", smallest_eigenvalue_g1},
      {"g = 1 identity: eigenfunction at 1 - m is r'", rprime_eigenfunction},
      {"stability lists, g = 1 instability, borderline flags", stability_reproduction},
      {"oscillation, interlacing, simplicity at j_max = 10", [&] { return oscillation(solved); }},
      {"Weyl slope within 5% at j_max = 30", weyl},
      {"shooting families and nodal numbers", families},
      {"orthogonal polynomials", polynomials},
      {"spectral coincidences, j <= 10", coincidences},
  };

  std::vector<std::string> summary;
  int failed = 0, n = 0;
  for (const auto& [title, run] : criteria) {
    ++n;
    const auto c0 = std::chrono::steady_clock::now();
    const Outcome o = run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - c0).count();
    const std::string line = fmt("%s criterion %d: %s", o.pass ? "PASS" : "FAIL", n, title);
    std::printf("%s (%.1f s)\n", line.c_str(), secs);
    for (const auto& d : o.details) std::printf("%s\n", d.c_str());
    std::fflush(stdout);
    summary.push_back(line);
    if (!o.pass) ++failed;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("\nSummary (%.0f s):\n", total);
  for (const auto& s : summary) std::printf("%s\n", s.c_str());
  return failed == 0 ? 0 : 1;
}
