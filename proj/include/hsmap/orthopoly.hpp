#pragma once

// Jacobi and Gegenbauer polynomials.
//
// Evaluation uses the upward three-term recurrence in the degree. For the
// Jacobi family the recurrence is the standard one for P_0 = 1,
//
//   2n(n+a+b)(2n+a+b-2) P_n
//     = (2n+a+b-1)[(2n+a+b)(2n+a+b-2) x + a^2 - b^2] P_{n-1}
//       - 2(n+a-1)(n+b-1)(2n+a+b) P_{n-2},
//
//   P_1 = (a+1) + (a+b+2)(x-1)/2.
//
// The recurrence degenerates when a+b = -2 (only a = b = -1 is admissible);
// there the explicit binomial sum
//
//   P_n = sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s)
//
// is used instead. Gegenbauer polynomials use
//
//   j C_j = 2x(j+d-1) C_{j-1} - (j+2d-2) C_{j-2},  C_0 = 1, C_1 = 2 d x.
//
// Derivatives lower the degree and shift the parameters:
//
//   d/dx P_n^{(a,b)} = (n+a+b+1)/2 P_{n-1}^{(a+1,b+1)},
//   d/dx C_n^{(d)}   = 2d C_{n-1}^{(d+1)}.

#include <cmath>
#include <string>
#include <type_traits>
#include <variant>

#include "hsmap/error.hpp"

namespace hsmap {

struct Jacobi {
  double alpha;
  double beta;
};

struct Gegenbauer {
  double delta;
};

using PolyKind = std::variant<Jacobi, Gegenbauer>;

enum class DerivativeMethod { ParameterShift, CentralDifference };

// Step used by DerivativeMethod::CentralDifference.
inline constexpr double kPolyDifferenceStep = 1e-5;

inline void validate(const PolyKind& kind) {
  if (const auto* j = std::get_if<Jacobi>(&kind)) {
    if (!(j->alpha >= -1.0) || !(j->beta >= -1.0))
      throw Error(ErrorCode::ParameterDomain,
                  "Jacobi parameters require alpha >= -1 and beta >= -1");
  } else {
    const double d = std::get<Gegenbauer>(kind).delta;
    if (!(d > -0.5) || d == 0.0)
      throw Error(ErrorCode::ParameterDomain,
                  "Gegenbauer parameter requires delta > -1/2 and delta != 0");
  }
}

// alpha or beta == -1 is accepted but lies outside the regime the test suite
// covers.
inline bool outside_tested_regime(const PolyKind& kind) {
  if (const auto* j = std::get_if<Jacobi>(&kind))
    return j->alpha == -1.0 || j->beta == -1.0;
  return false;
}

namespace detail {

// Generalized binomial coefficient C(z, k) for real z, integer k >= 0.
template <typename Scalar>
Scalar binomial(Scalar z, int k) {
  Scalar out(1);
  for (int i = 0; i < k; ++i) out *= (z - Scalar(i)) / Scalar(i + 1);
  return out;
}

template <typename Scalar>
Scalar jacobi_sum(double alpha, double beta, int n, Scalar x) {
  const Scalar am = (x - Scalar(1)) / Scalar(2);
  const Scalar ap = (x + Scalar(1)) / Scalar(2);
  Scalar sum(0);
  for (int s = 0; s <= n; ++s) {
    sum += binomial(Scalar(n + alpha), n - s) * binomial(Scalar(n + beta), s) *
           std::pow(am, s) * std::pow(ap, n - s);
  }
  return sum;
}

template <typename Scalar>
Scalar jacobi_recurrence(double alpha, double beta, int n, Scalar x) {
  if (n == 0) return Scalar(1);
  const Scalar a(alpha), b(beta);
  if (std::abs(alpha + beta + 2.0) < 1e-14 && n >= 2)
    return jacobi_sum(alpha, beta, n, x);

  Scalar p_prev(1);
  Scalar p = (a + Scalar(1)) + (a + b + Scalar(2)) * (x - Scalar(1)) / Scalar(2);
  for (int k = 2; k <= n; ++k) {
    const Scalar kk(k);
    const Scalar s = Scalar(2) * kk + a + b;
    const Scalar c0 = Scalar(2) * kk * (kk + a + b) * (s - Scalar(2));
    const Scalar c1 = (s - Scalar(1)) * (s * (s - Scalar(2)) * x + a * a - b * b);
    const Scalar c2 = Scalar(2) * (kk + a - Scalar(1)) * (kk + b - Scalar(1)) * s;
    const Scalar next = (c1 * p - c2 * p_prev) / c0;
    p_prev = p;
    p = next;
  }
  return p;
}

template <typename Scalar>
Scalar gegenbauer_recurrence(double delta, int n, Scalar x) {
  if (n == 0) return Scalar(1);
  const Scalar d(delta);
  Scalar c_prev(1);
  Scalar c = Scalar(2) * d * x;
  for (int j = 2; j <= n; ++j) {
    const Scalar jj(j);
    const Scalar next = (Scalar(2) * x * (jj + d - Scalar(1)) * c -
                         (jj + Scalar(2) * d - Scalar(2)) * c_prev) /
                        jj;
    c_prev = c;
    c = next;
  }
  return c;
}

}  // namespace detail

template <typename Scalar>
Scalar eval_poly(const PolyKind& kind, int degree, Scalar x) {
  validate(kind);
  if (degree < 0)
    throw Error(ErrorCode::ParameterDomain, "polynomial degree must be >= 0");
  if (const auto* j = std::get_if<Jacobi>(&kind))
    return detail::jacobi_recurrence(j->alpha, j->beta, degree, x);
  return detail::gegenbauer_recurrence(std::get<Gegenbauer>(kind).delta, degree, x);
}

// Eigenvalue lambda_j of A f'' + B f' + lambda_j f = 0.
inline double poly_eigenvalue(const PolyKind& kind, int degree) {
  const double j = degree;
  if (const auto* p = std::get_if<Jacobi>(&kind))
    return j * (j + 1.0 + p->alpha + p->beta);
  return j * (j + 2.0 * std::get<Gegenbauer>(kind).delta);
}

// First-order coefficient B(x) of the defining ODE (A = 1 - x^2, C = 0).
template <typename Scalar>
Scalar poly_ode_b(const PolyKind& kind, Scalar x) {
  if (const auto* p = std::get_if<Jacobi>(&kind))
    return Scalar(p->beta - p->alpha) - Scalar(p->alpha + p->beta + 2.0) * x;
  return -Scalar(2.0 * std::get<Gegenbauer>(kind).delta + 1.0) * x;
}

// order-th derivative via the parameter-shift identity. The shifted
// parameters always stay in the admissible domain.
template <typename Scalar>
Scalar poly_derivative(const PolyKind& kind, int degree, Scalar x, int order = 1) {
  validate(kind);
  if (order == 0) return eval_poly(kind, degree, x);
  if (degree < order) return Scalar(0);
  if (const auto* p = std::get_if<Jacobi>(&kind)) {
    const double factor = (degree + p->alpha + p->beta + 1.0) / 2.0;
    return Scalar(factor) *
           poly_derivative(PolyKind{Jacobi{p->alpha + 1.0, p->beta + 1.0}},
                           degree - 1, x, order - 1);
  }
  const double d = std::get<Gegenbauer>(kind).delta;
  return Scalar(2.0 * d) *
         poly_derivative(PolyKind{Gegenbauer{d + 1.0}}, degree - 1, x, order - 1);
}

template <typename Scalar>
Scalar poly_ode_residual(const PolyKind& kind, int degree, Scalar x,
                         DerivativeMethod method = DerivativeMethod::ParameterShift) {
  const Scalar f = eval_poly(kind, degree, x);
  Scalar d1, d2;
  if (method == DerivativeMethod::ParameterShift) {
    d1 = poly_derivative(kind, degree, x, 1);
    d2 = poly_derivative(kind, degree, x, 2);
  } else {
    const Scalar h(kPolyDifferenceStep);
    const Scalar fp = eval_poly(kind, degree, x + h);
    const Scalar fm = eval_poly(kind, degree, x - h);
    d1 = (fp - fm) / (Scalar(2) * h);
    d2 = (fp - Scalar(2) * f + fm) / (h * h);
  }
  return (Scalar(1) - x * x) * d2 + poly_ode_b(kind, x) * d1 +
         Scalar(poly_eigenvalue(kind, degree)) * f;
}

}  // namespace hsmap
