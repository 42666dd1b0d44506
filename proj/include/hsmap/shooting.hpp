#pragma once

// Shooting for the singular harmonic-map boundary value problems in the
// compactified chart.
//
// Left end: r leaves the equilibrium r = 0 along its unstable direction,
// r ~ A e^{kappa_L x}. A is the shooting parameter.
// Right end: r approaches the target T along the stable direction of the
// saddle at T, r - T ~ B e^{kappa_R x}.
//
// shoot() brackets A by terminal classification, bisects to the separatrix,
// checks which equilibrium the separatrix actually reaches, and then polishes
// (A, B) by Newton matching of the two half-trajectories at x_match.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hsmap/integrator.hpp"
#include "hsmap/problems.hpp"
#include "hsmap/profile.hpp"

namespace hsmap {

struct ShootingOptions {
  double x_start = -12.0;
  double x_end = 12.0;
  double x_match = 0.0;
  double rtol = 1e-13;
  double atol = 1e-15;
  double h_max = 0.1;
  double sample_step = 0.01;
  double blowup_bound = 50.0;     // |r| beyond this counts as divergence
  double seed_magnitude = 1e-4;   // |r - r_eq| allowed at a seeded endpoint
  int max_bisection = 300;
  int max_newton = 25;
  bool parallel = true;
};

struct Divergence {
  double x;
  int sign;  // sign of r at blow-up
};

struct Trajectory {
  std::vector<ProfileSample> samples;
  std::optional<Divergence> divergence;
  IntegrationStatus status = IntegrationStatus::Completed;
};

// Adaptive integration of harmonic_rhs_x from x_start to x_end
// (x_start < x_end) with local tolerance tol, sampled every sample_step.
Trajectory integrate_ivp(const ProblemSpec& spec, double x_start, double r0, double rprime0,
                         double x_end, double tol, const ShootingOptions& options = {});

struct Seed {
  double r0;
  double rprime0;
  double kappa;
};

// Initial data on the linearized unstable manifold of r = 0:
// r0 = amplitude e^{kappa x_start}, r0' = kappa r0.
Seed unstable_manifold_seed(const ProblemSpec& spec, double x_start, double amplitude);

// Terminal classification of one amplitude: the value of r where the
// trajectory stops (x_end or blow-up) and its side relative to the target.
struct Terminal {
  double x;
  double r;
  int sign;
  bool diverged;
};

Terminal classify_amplitude(const ProblemSpec& spec, double amplitude,
                            const ShootingOptions& options = {});

// Bisection plus two-sided polish. target_k replaces spec.k (l for SU3).
// Throws Bracketing if the bracket does not straddle the target, Convergence
// if the separatrix reaches a different equilibrium or the certified
// boundary_defect stays above tol.
SolutionProfile shoot(const ProblemSpec& spec, std::pair<double, double> bracket, int target_k,
                      double tol, const ShootingOptions& options = {});

struct FamilyDiagnostics {
  std::vector<std::string> notes;
  std::vector<SolutionProfile> duplicates;
};

// Scans `grid` log-spaced amplitudes in amplitude_range, refines every sign
// change with shoot(), merges duplicates (same nodal number and parameter
// within tol, the smaller boundary_defect wins), and returns the profiles
// sorted by nodal number.
std::vector<SolutionProfile> find_family(const ProblemSpec& spec,
                                         std::pair<double, double> amplitude_range, int grid,
                                         double tol, const ShootingOptions& options = {},
                                         FamilyDiagnostics* diagnostics = nullptr);

// Default amplitude scan range used by the CLI and the acceptance suite.
inline constexpr std::pair<double, double> kDefaultAmplitudeRange{1e-2, 1e5};

// Nearest equilibrium of the x -> +inf limit equation to r.
double nearest_right_equilibrium(const ProblemSpec& spec, double r);

// s(x) = T - r(-x); maps solutions of the m0 = m1 sphere/SO problems with
// k = 1 to solutions.
SolutionProfile mirrored(const SolutionProfile& profile);

}  // namespace hsmap
