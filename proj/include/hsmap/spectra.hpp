#pragma once

// Closed-form spectra of the Jacobi operators of the linear solutions,
// their comparison with the numeric Sturm-Liouville solver, and stability
// verdicts.
//
// Covered pairs (lambda in the chart normalization of each problem):
//   sphere / SO identity     lambda_j = -M/G + j(j + M/2),
//                            xi_j = sech x P^{((m1+1)/2, (m0+1)/2)}_{j-1}(tanh x)
//   sphere (1-g)-linear      lambda_j = j(j+m) + 2m/g - 2m
//   SO (1-2g)-linear         lambda_j = j(j+m) + m/g - 2m,
//                            xi_j = sech x C^{((m+2)/2)}_{j-1}(tanh x)
//   SU(3) identity           lambda_j = j(j+7) - 14,
//                            xi_j = cosh^2 x C^{(9/2)}_{j-1}(tanh(x)/2)
// with M = m0 + m1 and G the effective g. The SU(3) entry is the listed
// formula; see the README for how it compares with the numeric spectrum.

#include <optional>
#include <string>
#include <vector>

#include "hsmap/orthopoly.hpp"
#include "hsmap/problems.hpp"
#include "hsmap/sturm.hpp"

namespace hsmap {

enum class EigenPrefactor { Sech, CoshSquared };

struct AnalyticSpectrum {
  ProblemSpec spec;
  ClosedForm kind;
  ChartMap chart;
  PolyKind poly;
  EigenPrefactor prefactor = EigenPrefactor::Sech;
  double argument_scale = 1.0;  // polynomial evaluated at argument_scale * tanh x
  std::string validity;

  double lambda(int j) const;
  // xi_j(x) and its first two x-derivatives (order 0, 1, 2), analytic.
  double eigenfunction(int j, double x, int order = 0) const;
};

AnalyticSpectrum analytic_spectrum(const ProblemSpec& spec, ClosedForm kind);

// xi'' + b xi' + (c + lambda w) xi at x for the closed-form pair.
double analytic_residual(const ProblemSpec& spec, ClosedForm kind, int j, double x);

// Numeric spectrum of a closed-form or numeric solution with spec/solution
// recorded in the report.
SpectrumReport solve_spectrum(const ProblemSpec& spec, const SolutionKind& kind, int j_max,
                              double tol, const SturmOptions& options = {});

struct ComparisonEntry {
  int j;
  double lambda_numeric;
  double lambda_analytic;
  double abs_diff;
  double rel_diff;
  double eigenfunction_diff;  // sup-norm over |x| <= window after normalization
  bool pass;
};

struct ComparisonReport {
  std::string label;
  double tol;
  double eigenfunction_tol;
  double window;
  std::vector<ComparisonEntry> entries;
  bool all_pass = true;
};

// Per-j comparison. Throws Precondition if the report was not computed for
// the same (spec, closed-form kind).
ComparisonReport verify_spectrum(const SpectrumReport& numeric, const AnalyticSpectrum& analytic,
                                 double tol, double eigenfunction_tol = 1e-5,
                                 double window = 8.0);

enum class Stability { Stable, WeaklyStable, Unstable };

const char* to_string(Stability s);

struct StabilityVerdict {
  double lambda_1 = 0.0;
  Stability classification = Stability::Stable;
  int index = 0;  // negative eigenvalues among the available ones
  double tol = 0.0;
};

inline constexpr double kAnalyticStabilityTol = 1e-9;

StabilityVerdict stability_verdict(const AnalyticSpectrum& spectrum,
                                   double tol = kAnalyticStabilityTol, int j_max = 10);
// tol defaults to the numeric uncertainty of lambda_1.
StabilityVerdict stability_verdict(const SpectrumReport& report,
                                   std::optional<double> tol = std::nullopt);

// One line of the consolidated reproduction table.
struct ReproductionRow {
  std::string section;
  ProblemSpec spec;
  ClosedForm kind;
  int j_max;
  double lambda1_analytic;
  double lambda1_numeric;
  double max_abs_diff;  // over j <= j_max
  Stability verdict;
  std::string expected;  // "stable", "weakly_stable", "unstable" or "formula"
  bool agrees;
  std::string note;
};

struct ReproductionOptions {
  int m_max = 8;
  int formula_j_max = 5;
  double tol = 1e-6;
  bool numeric = true;
  SturmOptions sturm{};
};

std::vector<ReproductionRow> reproduction_table(const ReproductionOptions& options = {});

// Members of the stability lists, instantiated with m <= m_max and filtered
// by admissibility.
std::vector<ProblemSpec> sphere_identity_stable_list(int m_max);
std::vector<ProblemSpec> so_identity_stable_list(int m_max);
std::vector<ProblemSpec> sphere_linear_stable_list(int m_max);
std::vector<ProblemSpec> so_linear_stable_list(int m_max);

// Every admissible parameter set with g <= 6, m0, m1 <= m_max for which the
// closed form exists.
std::vector<ProblemSpec> covered_problems(Family family, ClosedForm kind, int m_max);

// The closed-form kind matching a family's linear solution of slope 1 - G or
// the identity.
ProblemSpec closed_form_problem(Family family, ClosedForm kind, int g, int m0, int m1);

}  // namespace hsmap
