#pragma once

#include <string>
#include <vector>

#include "hsmap/problems.hpp"

namespace hsmap {

struct ProfileSample {
  double x;
  double r;
  double rprime;
};

// A sampled solution of a harmonic-map boundary value problem in the
// compactified chart.
struct SolutionProfile {
  ProblemSpec spec;
  std::vector<ProfileSample> samples;  // strictly increasing in x
  double shooting_parameter = 0.0;     // left amplitude A: r ~ A e^{kappa x}
  double parameter_uncertainty = 0.0;
  double right_parameter = 0.0;        // right amplitude B: r - T ~ B e^{kappa x}
  int nodal_number = 0;
  double boundary_defect = 0.0;
  double residual_norm = 0.0;
  double target = 0.0;                 // k L, or (2l+1) pi/2 for SU3
  double kappa_left = 0.0;
  double kappa_right = 0.0;
  bool is_linear = false;              // coincides with a closed-form solution
  std::vector<std::string> flags;

  double x_min() const { return samples.front().x; }
  double x_max() const { return samples.back().x; }
};

// Strict sign changes of r - level over the samples.
int count_crossings(const std::vector<ProfileSample>& samples, double level);

// The level whose crossings define the nodal number: pi/2 for every family.
double nodal_level(const ProblemSpec& spec);

// sup over interior samples of |r'' - rhs(x, r, r')|, with r'' taken from a
// sixth-order central difference of the sampled r'. Needs a uniform grid.
double profile_residual(const SolutionProfile& profile);

// Cubic Hermite interpolation of (r, r') between samples. Outside the sample
// range the profile is continued along the asymptotic exponentials
// r ~ r(x0) e^{kappa_left (x - x0)} and r - T ~ (r(x1) - T) e^{kappa_right (x - x1)}.
class ProfileInterpolant {
public:
  explicit ProfileInterpolant(const SolutionProfile& profile);

  double r(double x) const;
  double rprime(double x) const;

private:
  std::vector<ProfileSample> samples_;
  double target_;
  double kappa_left_;
  double kappa_right_;
  bool uniform_;
  double h_;

  std::size_t locate(double x) const;
};

}  // namespace hsmap
