#pragma once

// Singular Sturm-Liouville eigensolver for
//
//   xi'' + b(x) xi' + (c(x) + lambda w(x)) xi = 0
//
// on the real line (x-chart), truncated at +-X with Robin rays along the
// decaying indicial direction, or on a finite interval with Dirichlet ends.
//
// Prüfer angle: xi = rho sin(theta), xi' = rho cos(theta),
//   theta' = cos^2 + b sin cos + (c + lambda w) sin^2.
// The left angle is integrated forward and the right angle backward to the
// matching point x_m; D(lambda) = theta_L(x_m) - theta_R(x_m) is increasing in
// lambda and lambda_j is the unique solution of D = (j - 1) pi.
//
// Indices follow j >= 1 (the ground state has j = 1); the usual
// lambda_0-first convention of Sturm-Liouville theory is j - 1.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hsmap/problems.hpp"

namespace hsmap {

enum class BoundaryKind { Decaying, Dirichlet };

struct SturmOptions {
  double x_max = 12.0;        // truncation X
  double x_max_limit = 24.0;  // X is increased up to this to meet tol
  double x_step = 2.0;        // truncation check compares X and X + x_step
  BoundaryKind boundary = BoundaryKind::Decaying;
  std::optional<std::pair<double, double>> domain;  // overrides (-X, X)
  double rtol = 1e-12;
  double atol = 1e-12;
  double h_max = 0.1;
  double sample_step = 0.01;
  bool parallel = true;
};

struct EigenSample {
  double x;
  double xi;
};

struct EigenPair {
  int j = 0;
  double lambda_x = 0.0;
  double lambda_t = 0.0;
  std::vector<EigenSample> eigenfunction;
  int zero_count = 0;
  double uncertainty = 0.0;
  double truncation = 0.0;  // X used
};

struct SpectrumReport {
  std::string label;
  std::optional<ProblemSpec> spec;  // set when built from a problem
  std::string solution;             // closed-form name, or "numeric"
  ChartMap chart;
  std::vector<EigenPair> pairs;
  std::optional<double> weyl_slope;
  double weyl_target = 0.0;
};

// Number of eigenvalues strictly below lambda on the given domain (defaults
// to (-X, X) from options).
int pruefer_count(const LinearOdeCoefficients& coeffs, double lambda,
                  const SturmOptions& options = {});
int pruefer_count(const LinearOdeCoefficients& coeffs, double lambda,
                  std::pair<double, double> domain, const SturmOptions& options = {});

// D(lambda) = theta_L(x_m) - theta_R(x_m).
double pruefer_mismatch(const LinearOdeCoefficients& coeffs, double lambda,
                        std::pair<double, double> domain, const SturmOptions& options);

// lambda_j with pruefer_count(lambda - tol) = j - 1 and
// pruefer_count(lambda + tol) = j on the truncated domain. The truncation
// uncertainty is available through eigen_pair().
double eigenvalue(const LinearOdeCoefficients& coeffs, int j, double tol,
                  const SturmOptions& options = {});

// Eigenfunction at an eigenvalue: both ends integrated along their decaying
// directions, matched at the midpoint and normalized to max |xi| = 1 with
// a positive value at the left end. Throws NotEigenvalue if the two halves
// are not parallel at the midpoint.
std::vector<EigenSample> eigenfunction(const LinearOdeCoefficients& coeffs, double lambda,
                                       const SturmOptions& options = {});

// Eigenvalue with truncation control, eigenfunction and zero count.
EigenPair eigen_pair(const LinearOdeCoefficients& coeffs, int j, double tol,
                     const SturmOptions& options = {});

SpectrumReport spectrum(const LinearOdeCoefficients& coeffs, int j_max, double tol,
                        const SturmOptions& options = {});

// Strict sign changes of xi, ignoring the exponentially small tails where
// |xi| < floor.
int zero_count(const std::vector<EigenSample>& f, double floor = 1e-7);

// Interior zeros (linear interpolation between sign changes).
std::vector<double> zeros_of(const std::vector<EigenSample>& f, double floor = 1e-7);

// True if between consecutive zeros of lower there is exactly one zero of
// upper.
bool interlaces(const std::vector<double>& lower, const std::vector<double>& upper);

// Least-squares slope of lambda_t against j^2 over the top half of the
// indices: lambda_t = a j^2 + b j + c, slope a. With fewer than three
// points a linear fit in j^2 is used; with one point there is no slope.
std::optional<double> weyl_slope(const std::vector<EigenPair>& pairs);

}  // namespace hsmap
