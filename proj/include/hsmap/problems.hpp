#pragma once

// Boundary-value families for equivariant harmonic self-maps and the
// coefficient functions of their linearized (Jacobi) equations.
//
// All three families share one chart. With G the effective number of
// principal curvatures (G = g on spheres, G = 2g on SO(n+2), G = 2 on SU(3))
// the orbit space is (0, L) with L = pi/G and
//
//   t = (2/G) arctan(e^x),   dt/dx = sech(x)/G,   cos(Gt) = -tanh x.
//
// In this chart the sphere equation (and SO(n+2), which is the sphere
// equation with g -> 2g) reads, with M = m0+m1, D = m0-m1,
//
//   r'' = 1/2((M-2) tanh x - D) r' + F(r, t)/(4G^2),
//   F   = G(G-2) sin(2(r-t)) (M + D cos Gt) + 2G sin(2(r-t)+Gt)(M cos Gt + D),
//
// obtained from the t-chart equation by the chain rule: the leading
// 4 sin^2(Gt) cancels against (dt/dx)^2 = sech^2(x)/G^2. For SU(3)
//
//   r'' = tanh x r' - (1+tanh x)/2 sin 2r + (1-tanh x)^{3/2}/sqrt(2) sin r,
//
// which is the t-chart SU(3) equation pushed through the chart and the
// Euler-Lagrange equation of the SU(3) energy.
//
// Jacobi equations are written xi'' + b xi' + (c + lambda w) xi = 0 with
// b = -d(rhs)/dr', c = -d(rhs)/dr and w = sech^2 (sphere, SO) or sech^2/4
// (SU(3), where lambda is the t-chart eigenvalue).

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <variant>

#include "hsmap/error.hpp"

namespace hsmap {

struct SolutionProfile;

enum class Family { Sphere, SpecialOrthogonal, SU3 };

const char* to_string(Family family);
Family family_from_string(const std::string& name);

struct ProblemSpec {
  Family family = Family::Sphere;
  int g = 1;
  int m0 = 1;
  int m1 = 1;
  int k = 1;  // target datum; for SU3 this is l with r(pi/2) = (2l+1) pi/2

  int effective_g() const;
  double length() const;  // L
  double target() const;  // right boundary value of r
  int multiplicity_sum() const { return m0 + m1; }
  int multiplicity_diff() const { return m0 - m1; }
  std::string label() const;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

// Validates (g, m0, m1) against the classification of cohomogeneity-one
// actions on spheres (SO(n+2) uses the same list). SU3 ignores g, m0, m1.
ProblemSpec make_problem(Family family, int g, int m0, int m1, int k_or_ell);

// True for admissible triples, false for inadmissible ones; exceptional g = 4
// triples report through `exceptional`.
bool admissible_triple(int g, int m0, int m1, bool* exceptional = nullptr);

struct ChartMap {
  Family family = Family::Sphere;
  int G = 1;
  double L = std::numbers::pi;
  double weight_at_center = 1.0;  // w(0)

  template <typename Scalar>
  Scalar t_of_x(Scalar x) const {
    using std::atan;
    using std::exp;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar s = x <= Scalar(0) ? Scalar(2) * atan(exp(x))
                                    : pi - Scalar(2) * atan(exp(-x));
    return s / Scalar(G);
  }

  template <typename Scalar>
  Scalar x_of_t(Scalar t) const {
    using std::log;
    using std::tan;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar s = Scalar(G) * t;
    if (s <= pi / Scalar(2)) return log(tan(s / Scalar(2)));
    return -log(tan((pi - s) / Scalar(2)));
  }

  template <typename Scalar>
  Scalar dt_dx(Scalar x) const {
    using std::cosh;
    return Scalar(1) / (Scalar(G) * cosh(x));
  }

  // Factor taking an x-chart eigenvalue to the t-chart normalization:
  // w(0) / (dt/dx(0))^2.
  double eigen_scale() const { return weight_at_center * G * G; }
  double weyl_target() const { return std::numbers::pi * std::numbers::pi / (L * L); }
};

ChartMap chart(const ProblemSpec& spec);

enum class ClosedForm { Identity, LinearOneMinusG, LinearOneMinusTwoG, SU3Identity };

const char* to_string(ClosedForm kind);
ClosedForm closed_form_from_string(const std::string& name);

using SolutionKind = std::variant<ClosedForm, std::shared_ptr<const SolutionProfile>>;

// r(t) = slope * t for the linear solutions.
struct ClosedFormSolution {
  ProblemSpec spec;
  ClosedForm kind;
  ChartMap chart;
  double slope;

  double r_of_t(double t) const { return slope * t; }
  double rdot_of_t(double) const { return slope; }
  double r(double x) const { return slope * chart.t_of_x(x); }
  double rprime(double x) const { return slope * chart.dt_dx(x); }
};

// The closed-form kind admitted for spec (checks family, m0 = m1 and k).
ClosedFormSolution linear_solution(const ProblemSpec& spec, ClosedForm kind);

// Value of r'' in the orbit-space chart. Throws Singularity outside (0, L).
double harmonic_rhs_t(const ProblemSpec& spec, double t, double r, double rdot);

// Value of r'' in the compactified chart.
double harmonic_rhs_x(const ProblemSpec& spec, double x, double r, double rprime);

// d(r'')/dr and d(r'')/dr' of the compactified equation.
double harmonic_rhs_x_dr(const ProblemSpec& spec, double x, double r);
double harmonic_rhs_x_drprime(const ProblemSpec& spec, double x);

// Coefficients of xi'' + b xi' + (c + lambda w) xi = 0 in the x-chart.
// b is always of the form b_const + b_tanh * tanh(x), so the Sturm-Liouville
// integrating factor p = exp(int_0^x b) has the closed form
// exp(b_const x + b_tanh log cosh x).
struct LinearOdeCoefficients {
  ChartMap chart;
  std::string label;
  double b_const = 0.0;
  double b_tanh = 0.0;
  std::function<double(double)> c;
  std::function<double(double)> w;

  double b(double x) const { return b_const + b_tanh * std::tanh(x); }
  double log_p(double x) const;
  double sl_p(double x) const { return std::exp(log_p(x)); }
  double sl_q(double x) const { return c(x) * sl_p(x); }
  double sl_z(double x) const { return w(x) * sl_p(x); }
};

// For closed-form kinds the displayed specializations are used directly; for
// a numeric profile, c is obtained by linearizing harmonic_rhs_x along the
// interpolated profile. Throws Precondition if the profile residual exceeds
// max_profile_residual.
LinearOdeCoefficients jacobi_coefficients(const ProblemSpec& spec, const SolutionKind& kind,
                                          double max_profile_residual = 1e-6);

// Linearization along an arbitrary solution r(x) supplied as a function.
LinearOdeCoefficients jacobi_coefficients_along(const ProblemSpec& spec,
                                                std::function<double(double)> r,
                                                std::string label);

// log of int_0^x b by adaptive Simpson quadrature; used to cross-check the
// closed-form integrating factor.
double log_integrating_factor_quadrature(const std::function<double(double)>& b, double x,
                                         double tol = 1e-12);

// Metric endomorphism P_t of the SU(3) action (diagonal entries).
Eigen::Matrix<double, 7, 1> su3_metric_endomorphism(double t);

// Limits of the compactified equation linearized at an equilibrium
// r = r_eq as x -> -inf (side < 0) or x -> +inf (side > 0):
// r'' = a r' + b r. Returns both roots of kappa^2 - a kappa - b = 0,
// ordered (smaller, larger). Throws Numeric if the roots are complex.
Eigen::Vector2d indicial_roots(const ProblemSpec& spec, int side, double r_eq);

}  // namespace hsmap
