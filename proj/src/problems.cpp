#include "hsmap/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hsmap/profile.hpp"

namespace hsmap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFarX = 40.0;  // tanh(40) == 1 in double precision

double sech(double x) { return 1.0 / std::cosh(x); }

// 1 + tanh x and 1 - tanh x without cancellation.
double one_plus_tanh(double x) { return 2.0 / (1.0 + std::exp(-2.0 * x)); }
double one_minus_tanh(double x) { return 2.0 / (1.0 + std::exp(2.0 * x)); }

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

void require_interior(const ProblemSpec& spec, double t) {
  const double L = spec.length();
  if (!(t > 0.0) || !(t < L)) {
    std::ostringstream msg;
    msg << "t = " << t << " is not inside the open orbit interval (0, " << L << ")";
    throw Error(ErrorCode::Singularity, msg.str());
  }
}

}  // namespace

const char* to_string(Family family) {
  switch (family) {
    case Family::Sphere: return "sphere";
    case Family::SpecialOrthogonal: return "so";
    case Family::SU3: return "su3";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  if (name == "sphere") return Family::Sphere;
  if (name == "so" || name == "special-orthogonal") return Family::SpecialOrthogonal;
  if (name == "su3") return Family::SU3;
  throw Error(ErrorCode::Config, "unknown family '" + name + "'");
}

const char* to_string(ClosedForm kind) {
  switch (kind) {
    case ClosedForm::Identity: return "identity";
    case ClosedForm::LinearOneMinusG: return "linear-1-g";
    case ClosedForm::LinearOneMinusTwoG: return "linear-1-2g";
    case ClosedForm::SU3Identity: return "su3-identity";
  }
  return "?";
}

ClosedForm closed_form_from_string(const std::string& name) {
  if (name == "identity") return ClosedForm::Identity;
  if (name == "linear-1-g") return ClosedForm::LinearOneMinusG;
  if (name == "linear-1-2g") return ClosedForm::LinearOneMinusTwoG;
  if (name == "su3-identity") return ClosedForm::SU3Identity;
  throw Error(ErrorCode::Config, "unknown solution kind '" + name + "'");
}

int ProblemSpec::effective_g() const {
  switch (family) {
    case Family::Sphere: return g;
    case Family::SpecialOrthogonal: return 2 * g;
    case Family::SU3: return 2;
  }
  return g;
}

double ProblemSpec::length() const { return kPi / effective_g(); }

double ProblemSpec::target() const {
  if (family == Family::SU3) return (2 * k + 1) * kPi / 2.0;
  return k * length();
}

std::string ProblemSpec::label() const {
  std::ostringstream out;
  out << to_string(family);
  if (family == Family::SU3)
    out << "(l=" << k << ")";
  else
    out << "(" << g << "," << m0 << "," << m1 << ",k=" << k << ")";
  return out.str();
}

bool admissible_triple(int g, int m0, int m1, bool* exceptional) {
  if (exceptional) *exceptional = false;
  if (g < 1 || m0 < 1 || m1 < 1) return false;
  const int a = std::min(m0, m1);
  const int b = std::max(m0, m1);
  switch (g) {
    case 1: return a == b;
    case 2: return true;
    case 3: return a == b && (a == 1 || a == 2 || a == 4 || a == 8);
    case 4: {
      if (a == 1 || (a == 2 && b == 2)) return true;
      const bool special = (a == 2 && b % 2 == 1 && b >= 3) ||
                           (a == 4 && b % 4 == 3 && b >= 7) || (a == 4 && b == 5) ||
                           (a == 6 && b == 9);
      if (special && exceptional) *exceptional = true;
      return false;
    }
    case 6: return a == b && (a == 1 || a == 2);
    default: return false;
  }
}

ProblemSpec make_problem(Family family, int g, int m0, int m1, int k_or_ell) {
  ProblemSpec spec;
  spec.family = family;
  spec.k = k_or_ell;
  if (family == Family::SU3) {
    spec.g = 1;
    spec.m0 = spec.m1 = 1;
    return spec;
  }
  bool exceptional = false;
  if (!admissible_triple(g, m0, m1, &exceptional)) {
    std::ostringstream msg;
    msg << "(g, m0, m1) = (" << g << ", " << m0 << ", " << m1 << ")";
    if (exceptional)
      throw Error(ErrorCode::TangentialUnknown,
                  msg.str() + ": tangential part of the tension field is not known to vanish");
    throw Error(ErrorCode::Inadmissible, msg.str() + " is not an admissible triple");
  }
  spec.g = g;
  spec.m0 = m0;
  spec.m1 = m1;
  return spec;
}

ChartMap chart(const ProblemSpec& spec) {
  ChartMap map;
  map.family = spec.family;
  map.G = spec.effective_g();
  map.L = spec.length();
  map.weight_at_center = spec.family == Family::SU3 ? 0.25 : 1.0;
  return map;
}

ClosedFormSolution linear_solution(const ProblemSpec& spec, ClosedForm kind) {
  const int G = spec.effective_g();
  auto mismatch = [&](const std::string& why) {
    return Error(ErrorCode::KindMismatch,
                 std::string(to_string(kind)) + " for " + spec.label() + ": " + why);
  };
  double slope = 1.0;
  switch (kind) {
    case ClosedForm::Identity:
      if (spec.family == Family::SU3) throw mismatch("use su3-identity");
      if (spec.k != 1) throw mismatch("identity requires k = 1");
      break;
    case ClosedForm::LinearOneMinusG:
    case ClosedForm::LinearOneMinusTwoG: {
      const Family expected = kind == ClosedForm::LinearOneMinusG ? Family::Sphere
                                                                  : Family::SpecialOrthogonal;
      if (spec.family != expected) throw mismatch("wrong family");
      if (spec.m0 != spec.m1) throw mismatch("requires m0 = m1");
      if (spec.k != 1 - G) throw mismatch("requires k = " + std::to_string(1 - G));
      slope = 1.0 - G;
      break;
    }
    case ClosedForm::SU3Identity:
      if (spec.family != Family::SU3) throw mismatch("wrong family");
      if (spec.k != 0) throw mismatch("requires l = 0");
      break;
  }
  return ClosedFormSolution{spec, kind, chart(spec), slope};
}

double harmonic_rhs_t(const ProblemSpec& spec, double t, double r, double rdot) {
  require_interior(spec, t);
  if (spec.family == Family::SU3) {
    const double s2 = std::sin(2.0 * t);
    const double c = std::cos(t);
    const double st = std::sin(t);
    return -(2.0 * std::sin(4.0 * t) * rdot + 4.0 * st * st * std::sin(2.0 * r) -
             8.0 * c * c * c * std::sin(r)) /
           (s2 * s2);
  }
  const double G = spec.effective_g();
  const double M = spec.multiplicity_sum();
  const double D = spec.multiplicity_diff();
  const double sg = std::sin(G * t);
  const double cg = std::cos(G * t);
  const double u = 2.0 * (r - t);
  const double B = G * M * std::sin(2.0 * G * t) + 2.0 * G * D * sg;
  const double F = G * (G - 2.0) * std::sin(u) * (M + D * cg) +
                   2.0 * G * std::sin(u + G * t) * (M * cg + D);
  return (F - B * rdot) / (4.0 * sg * sg);
}

double harmonic_rhs_x(const ProblemSpec& spec, double x, double r, double rprime) {
  const double th = std::tanh(x);
  if (spec.family == Family::SU3) {
    return th * rprime - 0.5 * one_plus_tanh(x) * std::sin(2.0 * r) +
           std::pow(one_minus_tanh(x), 1.5) / std::numbers::sqrt2 * std::sin(r);
  }
  const ChartMap map = chart(spec);
  const double G = map.G;
  const double M = spec.multiplicity_sum();
  const double D = spec.multiplicity_diff();
  const double t = map.t_of_x(x);
  const double cg = -th;
  const double sg = sech(x);
  const double u = 2.0 * (r - t);
  const double su = std::sin(u), cu = std::cos(u);
  const double F = G * (G - 2.0) * su * (M + D * cg) +
                   2.0 * G * (su * cg + cu * sg) * (M * cg + D);
  return 0.5 * ((M - 2.0) * th - D) * rprime + F / (4.0 * G * G);
}

double harmonic_rhs_x_dr(const ProblemSpec& spec, double x, double r) {
  if (spec.family == Family::SU3) {
    return -one_plus_tanh(x) * std::cos(2.0 * r) +
           std::pow(one_minus_tanh(x), 1.5) / std::numbers::sqrt2 * std::cos(r);
  }
  const ChartMap map = chart(spec);
  const double G = map.G;
  const double M = spec.multiplicity_sum();
  const double D = spec.multiplicity_diff();
  const double t = map.t_of_x(x);
  const double cg = -std::tanh(x);
  const double sg = sech(x);
  const double u = 2.0 * (r - t);
  const double su = std::sin(u), cu = std::cos(u);
  const double Fr = 2.0 * G * (G - 2.0) * cu * (M + D * cg) +
                    4.0 * G * (cu * cg - su * sg) * (M * cg + D);
  return Fr / (4.0 * G * G);
}

double harmonic_rhs_x_drprime(const ProblemSpec& spec, double x) {
  const double th = std::tanh(x);
  if (spec.family == Family::SU3) return th;
  const double M = spec.multiplicity_sum();
  const double D = spec.multiplicity_diff();
  return 0.5 * ((M - 2.0) * th - D);
}

double LinearOdeCoefficients::log_p(double x) const {
  return b_const * x + b_tanh * log_cosh(x);
}

namespace {

void set_first_order(const ProblemSpec& spec, LinearOdeCoefficients& out) {
  if (spec.family == Family::SU3) {
    out.b_const = 0.0;
    out.b_tanh = -1.0;
  } else {
    out.b_const = 0.5 * spec.multiplicity_diff();
    out.b_tanh = 0.5 * (2.0 - spec.multiplicity_sum());
  }
}

std::function<double(double)> weight(const ProblemSpec& spec) {
  if (spec.family == Family::SU3)
    return [](double x) { return 0.25 * sech(x) * sech(x); };
  return [](double x) { return sech(x) * sech(x); };
}

}  // namespace

LinearOdeCoefficients jacobi_coefficients_along(const ProblemSpec& spec,
                                                std::function<double(double)> r,
                                                std::string label) {
  LinearOdeCoefficients out;
  out.chart = chart(spec);
  out.label = std::move(label);
  set_first_order(spec, out);
  out.w = weight(spec);
  out.c = [spec, r = std::move(r)](double x) { return -harmonic_rhs_x_dr(spec, x, r(x)); };
  return out;
}

LinearOdeCoefficients jacobi_coefficients(const ProblemSpec& spec, const SolutionKind& kind,
                                          double max_profile_residual) {
  if (const auto* profile = std::get_if<std::shared_ptr<const SolutionProfile>>(&kind)) {
    if (!*profile) throw Error(ErrorCode::Precondition, "null solution profile");
    const SolutionProfile& prof = **profile;
    if (!(prof.spec == spec))
      throw Error(ErrorCode::Precondition, "profile belongs to " + prof.spec.label());
    if (!(prof.residual_norm <= max_profile_residual)) {
      std::ostringstream msg;
      msg << "profile residual " << prof.residual_norm << " exceeds " << max_profile_residual;
      throw Error(ErrorCode::Precondition, msg.str());
    }
    auto interp = std::make_shared<ProfileInterpolant>(prof);
    return jacobi_coefficients_along(
        spec, [interp](double x) { return interp->r(x); }, spec.label() + " numeric");
  }

  const ClosedForm form = std::get<ClosedForm>(kind);
  const ClosedFormSolution sol = linear_solution(spec, form);
  LinearOdeCoefficients out;
  out.chart = sol.chart;
  out.label = spec.label() + " " + to_string(form);
  set_first_order(spec, out);
  out.w = weight(spec);

  const double G = sol.chart.G;
  const double M = spec.multiplicity_sum();
  const double D = spec.multiplicity_diff();
  switch (form) {
    case ClosedForm::Identity:
      out.c = [M, D, G](double x) {
        const double s = sech(x);
        return -0.5 * (M - D * std::tanh(x)) + (M / G) * s * s;
      };
      break;
    case ClosedForm::LinearOneMinusG:
    case ClosedForm::LinearOneMinusTwoG: {
      const double m = spec.m0;
      out.c = [m, G](double x) {
        const double th = std::tanh(x);
        const double s = sech(x);
        return -m * th * th + (m - 2.0 * m / G) * s * s;
      };
      break;
    }
    case ClosedForm::SU3Identity:
      out.c = [](double x) {
        const double th = std::tanh(x);
        return -(0.5 + 1.5 * th * th);
      };
      break;
  }
  return out;
}

double log_integrating_factor_quadrature(const std::function<double(double)>& b, double x,
                                         double tol) {
  // Adaptive Simpson on [0, x].
  struct Rec {
    const std::function<double(double)>& f;
    double tol;
    double run(double a, double c, double fa, double fm, double fc, double whole,
               double eps, int depth) const {
      const double m = 0.5 * (a + c);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + c);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (c - m) / 6.0 * (fm + 4.0 * frm + fc);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
      return run(a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
             run(m, c, fm, frm, fc, right, eps / 2.0, depth - 1);
    }
  };
  if (x == 0.0) return 0.0;
  const double fa = b(0.0), fc = b(x), fm = b(0.5 * x);
  const double whole = x / 6.0 * (fa + 4.0 * fm + fc);
  return Rec{b, tol}.run(0.0, x, fa, fm, fc, whole, tol, 50);
}

Eigen::Matrix<double, 7, 1> su3_metric_endomorphism(double t) {
  const double c = std::cos(t);
  const double sh = std::sin(0.5 * t);
  const double ch = std::cos(0.5 * t);
  Eigen::Matrix<double, 7, 1> diag;
  diag << 1.0, c * c, c * c, sh * sh, sh * sh, ch * ch, ch * ch;
  return 4.0 * diag;
}

Eigen::Vector2d indicial_roots(const ProblemSpec& spec, int side, double r_eq) {
  const double x = side < 0 ? -kFarX : kFarX;
  const double a = harmonic_rhs_x_drprime(spec, x);
  const double b = harmonic_rhs_x_dr(spec, x, r_eq);
  const double disc = a * a + 4.0 * b;
  if (disc < 0.0)
    throw Error(ErrorCode::Numeric, "complex indicial roots for " + spec.label());
  const double sq = std::sqrt(disc);
  return {0.5 * (a - sq), 0.5 * (a + sq)};
}

}  // namespace hsmap
