#include "hsmap/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "hsmap/error.hpp"

namespace hsmap {

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

std::string kind_name(const SolutionKind& kind) {
  if (const auto* c = std::get_if<ClosedForm>(&kind)) return to_string(*c);
  return "numeric";
}

int closed_form_k(Family family, ClosedForm kind, int g) {
  switch (kind) {
    case ClosedForm::Identity: return 1;
    case ClosedForm::LinearOneMinusG: return 1 - g;
    case ClosedForm::LinearOneMinusTwoG: return 1 - 2 * g;
    case ClosedForm::SU3Identity: return 0;
  }
  (void)family;
  return 1;
}

Stability classify(double lambda_1, double tol) {
  if (lambda_1 > tol) return Stability::Stable;
  if (lambda_1 < -tol) return Stability::Unstable;
  return Stability::WeaklyStable;
}

}  // namespace

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::WeaklyStable: return "weakly_stable";
    case Stability::Unstable: return "unstable";
  }
  return "?";
}

ProblemSpec closed_form_problem(Family family, ClosedForm kind, int g, int m0, int m1) {
  return make_problem(family, g, m0, m1, closed_form_k(family, kind, family == Family::SU3 ? 1 : g));
}

AnalyticSpectrum analytic_spectrum(const ProblemSpec& spec, ClosedForm kind) {
  // Validates family, multiplicities and k.
  ClosedFormSolution sol;
  try {
    sol = linear_solution(spec, kind);
  } catch (const Error& e) {
    throw Error(ErrorCode::NoClosedForm, std::string("no closed-form spectrum: ") + e.what());
  }
  AnalyticSpectrum a{spec, kind, sol.chart, Jacobi{0.0, 0.0}, EigenPrefactor::Sech, 1.0, ""};
  switch (kind) {
    case ClosedForm::Identity:
      a.poly = Jacobi{(spec.m1 + 1) / 2.0, (spec.m0 + 1) / 2.0};
      a.validity = std::string(spec.family == Family::Sphere ? "sphere" : "SO(n+2)") +
                   " identity: Jacobi polynomials in tanh x";
      break;
    case ClosedForm::LinearOneMinusG:
    case ClosedForm::LinearOneMinusTwoG:
      a.poly = Gegenbauer{(spec.m0 + 2) / 2.0};
      a.validity = std::string(spec.family == Family::Sphere ? "sphere (1-g)" : "SO(n+2) (1-2g)") +
                   "-linear solution: Gegenbauer polynomials in tanh x";
      break;
    case ClosedForm::SU3Identity:
      a.poly = Gegenbauer{4.5};
      a.prefactor = EigenPrefactor::CoshSquared;
      a.argument_scale = 0.5;
      a.validity = "SU(3) identity: listed closed form";
      break;
  }
  return a;
}

double AnalyticSpectrum::lambda(int j) const {
  if (j < 1) throw Error(ErrorCode::Precondition, "eigenvalue index starts at 1");
  const double jj = j;
  const double M = spec.multiplicity_sum();
  const double G = chart.G;
  switch (kind) {
    case ClosedForm::Identity: return -M / G + jj * (jj + M / 2.0);
    case ClosedForm::LinearOneMinusG:
    case ClosedForm::LinearOneMinusTwoG: {
      const double m = spec.m0;
      return jj * (jj + m) + 2.0 * m / G - 2.0 * m;
    }
    case ClosedForm::SU3Identity: return jj * (jj + 7.0) - 14.0;
  }
  return 0.0;
}

double AnalyticSpectrum::eigenfunction(int j, double x, int order) const {
  if (j < 1) throw Error(ErrorCode::Precondition, "eigenfunction index starts at 1");
  if (order < 0 || order > 2) throw Error(ErrorCode::Precondition, "derivative order 0..2");
  const double s = argument_scale;
  const double th = std::tanh(x);
  const double se = sech(x);
  const double u = s * th;
  const int n = j - 1;
  const double f0 = eval_poly(poly, n, u);
  double p0, p1, p2;
  if (prefactor == EigenPrefactor::Sech) {
    p0 = se;
    p1 = -se * th;
    p2 = se * (th * th - se * se);
  } else {
    const double c = std::cosh(x);
    p0 = c * c;
    p1 = std::sinh(2.0 * x);
    p2 = 2.0 * std::cosh(2.0 * x);
  }
  if (order == 0) return p0 * f0;
  const double fu = poly_derivative(poly, n, u, 1);
  const double du = s * se * se;
  const double f1 = fu * du;
  if (order == 1) return p1 * f0 + p0 * f1;
  const double fuu = poly_derivative(poly, n, u, 2);
  const double ddu = -2.0 * s * se * se * th;
  const double f2 = fuu * du * du + fu * ddu;
  return p2 * f0 + 2.0 * p1 * f1 + p0 * f2;
}

double analytic_residual(const ProblemSpec& spec, ClosedForm kind, int j, double x) {
  const AnalyticSpectrum a = analytic_spectrum(spec, kind);
  const LinearOdeCoefficients c = jacobi_coefficients(spec, kind);
  const double xi = a.eigenfunction(j, x, 0);
  const double d1 = a.eigenfunction(j, x, 1);
  const double d2 = a.eigenfunction(j, x, 2);
  return d2 + c.b(x) * d1 + (c.c(x) + a.lambda(j) * c.w(x)) * xi;
}

SpectrumReport solve_spectrum(const ProblemSpec& spec, const SolutionKind& kind, int j_max,
                              double tol, const SturmOptions& options) {
  const LinearOdeCoefficients coeffs = jacobi_coefficients(spec, kind);
  SpectrumReport report = spectrum(coeffs, j_max, tol, options);
  report.spec = spec;
  report.solution = kind_name(kind);
  return report;
}

ComparisonReport verify_spectrum(const SpectrumReport& numeric, const AnalyticSpectrum& analytic,
                                 double tol, double eigenfunction_tol, double window) {
  if (!numeric.spec || !(*numeric.spec == analytic.spec) ||
      numeric.solution != to_string(analytic.kind)) {
    throw Error(ErrorCode::Precondition,
                "spectrum report and closed form describe different problems");
  }
  ComparisonReport out;
  out.label = numeric.label;
  out.tol = tol;
  out.eigenfunction_tol = eigenfunction_tol;
  out.window = window;
  for (const auto& pair : numeric.pairs) {
    ComparisonEntry e{};
    e.j = pair.j;
    e.lambda_numeric = pair.lambda_x;
    e.lambda_analytic = analytic.lambda(pair.j);
    e.abs_diff = std::abs(e.lambda_numeric - e.lambda_analytic);
    e.rel_diff = e.abs_diff / std::max(1.0, std::abs(e.lambda_analytic));

    std::vector<double> xs, num, ana;
    for (const auto& s : pair.eigenfunction) {
      if (std::abs(s.x) > window) continue;
      xs.push_back(s.x);
      num.push_back(s.xi);
      ana.push_back(analytic.eigenfunction(pair.j, s.x));
    }
    double nmax = 0.0, amax = 0.0, dot = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      nmax = std::max(nmax, std::abs(num[i]));
      amax = std::max(amax, std::abs(ana[i]));
      dot += num[i] * ana[i];
    }
    double diff = std::numeric_limits<double>::infinity();
    if (nmax > 0.0 && amax > 0.0) {
      const double sign = dot < 0.0 ? -1.0 : 1.0;
      diff = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i)
        diff = std::max(diff, std::abs(num[i] / nmax - sign * ana[i] / amax));
    }
    e.eigenfunction_diff = diff;
    e.pass = e.abs_diff < tol && diff < eigenfunction_tol;
    out.all_pass = out.all_pass && e.pass;
    out.entries.push_back(e);
  }
  return out;
}

StabilityVerdict stability_verdict(const AnalyticSpectrum& spectrum, double tol, int j_max) {
  StabilityVerdict v;
  v.tol = tol;
  v.lambda_1 = spectrum.lambda(1);
  v.classification = classify(v.lambda_1, tol);
  for (int j = 1; j <= j_max; ++j)
    if (spectrum.lambda(j) < -tol) ++v.index;
  return v;
}

StabilityVerdict stability_verdict(const SpectrumReport& report, std::optional<double> tol) {
  if (report.pairs.empty()) throw Error(ErrorCode::Precondition, "spectrum has no eigenvalues");
  const EigenPair& first = report.pairs.front();
  StabilityVerdict v;
  v.tol = tol ? *tol : std::max(10.0 * first.uncertainty, 1e-8);
  v.lambda_1 = first.lambda_x;
  v.classification = classify(v.lambda_1, v.tol);
  for (const auto& p : report.pairs)
    if (p.lambda_x < -v.tol) ++v.index;
  return v;
}

std::vector<ProblemSpec> covered_problems(Family family, ClosedForm kind, int m_max) {
  std::vector<ProblemSpec> out;
  if (family == Family::SU3) {
    if (kind == ClosedForm::SU3Identity) out.push_back(closed_form_problem(family, kind, 1, 1, 1));
    return out;
  }
  const bool linear = kind != ClosedForm::Identity;
  if (kind == ClosedForm::SU3Identity) return out;
  if (kind == ClosedForm::LinearOneMinusG && family != Family::Sphere) return out;
  if (kind == ClosedForm::LinearOneMinusTwoG && family != Family::SpecialOrthogonal) return out;
  for (int g : {1, 2, 3, 4, 6}) {
    for (int m0 = 1; m0 <= m_max; ++m0) {
      for (int m1 = 1; m1 <= m_max; ++m1) {
        if (linear && m0 != m1) continue;
        if (!admissible_triple(g, m0, m1)) continue;
        out.push_back(closed_form_problem(family, kind, g, m0, m1));
      }
    }
  }
  return out;
}

namespace {

std::vector<ProblemSpec> identity_list(Family family, int m_max) {
  std::vector<std::array<int, 3>> triples;
  if (family == Family::Sphere) {
    triples.push_back({1, 1, 1});
  } else {
    for (int m = 1; m <= m_max; ++m) triples.push_back({1, m, m});
  }
  for (int a = 1; a <= m_max; ++a)
    for (int b = 1; b <= m_max; ++b) triples.push_back({2, a, b});
  for (int m : {1, 2, 4, 8})
    if (m <= m_max) triples.push_back({3, m, m});
  for (int a = 1; a <= m_max; ++a) triples.push_back({4, a, 1});
  triples.push_back({4, 2, 2});
  triples.push_back({6, 1, 1});
  triples.push_back({6, 2, 2});
  std::vector<ProblemSpec> out;
  for (const auto& t : triples) {
    if (!admissible_triple(t[0], t[1], t[2])) continue;
    const ProblemSpec p = closed_form_problem(family, ClosedForm::Identity, t[0], t[1], t[2]);
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

std::vector<ProblemSpec> linear_list(Family family, ClosedForm kind,
                                     const std::vector<std::pair<int, int>>& fixed,
                                     const std::vector<int>& all_m, int m_max) {
  std::vector<std::pair<int, int>> pairs = fixed;
  for (int g : all_m)
    for (int m = 1; m <= m_max; ++m) pairs.push_back({g, m});
  std::vector<ProblemSpec> out;
  for (const auto& [g, m] : pairs) {
    if (m > m_max || !admissible_triple(g, m, m)) continue;
    const ProblemSpec p = closed_form_problem(family, kind, g, m, m);
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const ProblemSpec& a, const ProblemSpec& b) {
    return std::tie(a.g, a.m0) < std::tie(b.g, b.m0);
  });
  return out;
}

}  // namespace

std::vector<ProblemSpec> sphere_identity_stable_list(int m_max) {
  return identity_list(Family::Sphere, m_max);
}

std::vector<ProblemSpec> so_identity_stable_list(int m_max) {
  return identity_list(Family::SpecialOrthogonal, m_max);
}

std::vector<ProblemSpec> sphere_linear_stable_list(int m_max) {
  return linear_list(Family::Sphere, ClosedForm::LinearOneMinusG,
                     {{3, 1}, {3, 2}, {4, 1}, {4, 2}, {6, 1}}, {1, 2}, m_max);
}

std::vector<ProblemSpec> so_linear_stable_list(int m_max) {
  return linear_list(Family::SpecialOrthogonal, ClosedForm::LinearOneMinusTwoG,
                     {{2, 1}, {2, 2}, {3, 1}, {4, 1}, {6, 1}}, {1}, m_max);
}

std::vector<ReproductionRow> reproduction_table(const ReproductionOptions& options) {
  struct Job {
    std::string section;
    ProblemSpec spec;
    ClosedForm kind;
    int j_max;
    std::string expected;
  };
  std::vector<Job> jobs;
  const auto add_formula = [&](const std::string& section, Family family, ClosedForm kind) {
    for (const auto& p : covered_problems(family, kind, options.m_max))
      jobs.push_back({section, p, kind, options.formula_j_max, "formula"});
  };
  add_formula("spectrum: sphere identity", Family::Sphere, ClosedForm::Identity);
  add_formula("spectrum: sphere (1-g)-linear", Family::Sphere, ClosedForm::LinearOneMinusG);
  add_formula("spectrum: SO identity", Family::SpecialOrthogonal, ClosedForm::Identity);
  add_formula("spectrum: SO (1-2g)-linear", Family::SpecialOrthogonal,
              ClosedForm::LinearOneMinusTwoG);
  add_formula("spectrum: SU(3) identity", Family::SU3, ClosedForm::SU3Identity);

  for (const auto& p : sphere_identity_stable_list(options.m_max))
    jobs.push_back({"stable list: sphere identity", p, ClosedForm::Identity, 1, "stable"});
  // Listed as stable although the closed form gives lambda_1 = 0; reported
  // as weakly stable and flagged.
  const auto borderline = [](const ProblemSpec& p, int g, int m) {
    return p.g == g && p.m0 == m && p.m1 == m;
  };
  for (const auto& p : sphere_linear_stable_list(options.m_max))
    jobs.push_back({"stable list: sphere (1-g)-linear", p, ClosedForm::LinearOneMinusG, 1,
                    borderline(p, 4, 2) ? "weakly_stable" : "stable"});
  for (const auto& p : so_identity_stable_list(options.m_max))
    jobs.push_back({"stable list: SO identity", p, ClosedForm::Identity, 1, "stable"});
  for (const auto& p : so_linear_stable_list(options.m_max))
    jobs.push_back({"stable list: SO (1-2g)-linear", p, ClosedForm::LinearOneMinusTwoG, 1,
                    borderline(p, 2, 2) ? "weakly_stable" : "stable"});
  for (int m = 2; m <= options.m_max; ++m)
    jobs.push_back({"unstable: sphere identity g = 1",
                    closed_form_problem(Family::Sphere, ClosedForm::Identity, 1, m, m),
                    ClosedForm::Identity, 1, "unstable"});
  jobs.push_back({"unstable: SU(3) identity",
                  closed_form_problem(Family::SU3, ClosedForm::SU3Identity, 1, 1, 1),
                  ClosedForm::SU3Identity, 1, "unstable"});

  std::vector<ReproductionRow> rows;
  rows.reserve(jobs.size());
  for (const auto& job : jobs) {
    const AnalyticSpectrum a = analytic_spectrum(job.spec, job.kind);
    const StabilityVerdict v = stability_verdict(a);
    ReproductionRow row{job.section, job.spec, job.kind, job.j_max, a.lambda(1),
                        std::numeric_limits<double>::quiet_NaN(), 0.0, v.classification,
                        job.expected, true, ""};
    std::ostringstream note;
    if (options.numeric) {
      const SpectrumReport rep = solve_spectrum(job.spec, job.kind, job.j_max, 0.01 * options.tol,
                                                options.sturm);
      row.lambda1_numeric = rep.pairs.front().lambda_x;
      for (const auto& p : rep.pairs)
        row.max_abs_diff = std::max(row.max_abs_diff, std::abs(p.lambda_x - a.lambda(p.j)));
    }
    const bool numeric_ok = !options.numeric || row.max_abs_diff < options.tol;
    if (job.expected == "formula") {
      row.agrees = numeric_ok;
    } else if (job.expected == "stable") {
      row.agrees = v.classification == Stability::Stable && numeric_ok;
      if (v.classification == Stability::WeaklyStable)
        note << "lambda_1 = 0: weakly stable although listed as stable; ";
    } else if (job.expected == "weakly_stable") {
      row.agrees = v.classification == Stability::WeaklyStable && numeric_ok;
      note << "flagged: listed as stable, lambda_1 = 0; ";
    } else {
      row.agrees = v.classification == Stability::Unstable && numeric_ok;
      if (job.spec.family == Family::Sphere && std::abs(a.lambda(1) - (1 - job.spec.m0)) > 1e-12)
        row.agrees = false;
    }
    if (!numeric_ok) note << "numeric spectrum differs from the closed form; ";
    row.note = note.str();
    if (!row.note.empty()) row.note.resize(row.note.size() - 2);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hsmap
