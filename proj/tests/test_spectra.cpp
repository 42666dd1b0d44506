#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "hsmap/spectra.hpp"
#include "oracles.hpp"

using namespace hsmap;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Numeric;
}

AnalyticSpectrum closed(Family f, ClosedForm kind, int g, int m0, int m1) {
  return analytic_spectrum(closed_form_problem(f, kind, g, m0, m1), kind);
}

// Residual of the closed-form pair with Richardson differences in place of
// the analytic derivatives.
double fd_residual(const AnalyticSpectrum& a, int j, double x) {
  const auto c = jacobi_coefficients(a.spec, a.kind);
  const auto f = [&](double s) { return a.eigenfunction(j, s); };
  return oracle::d2(f, x) + c.b(x) * oracle::d1(f, x) + (c.c(x) + a.lambda(j) * c.w(x)) * f(x);
}

struct Covered {
  Family family;
  ClosedForm kind;
};

const Covered kCovered[] = {{Family::Sphere, ClosedForm::Identity},
                            {Family::Sphere, ClosedForm::LinearOneMinusG},
                            {Family::SpecialOrthogonal, ClosedForm::Identity},
                            {Family::SpecialOrthogonal, ClosedForm::LinearOneMinusTwoG},
                            {Family::SU3, ClosedForm::SU3Identity}};

}  // namespace

TEST_CASE("spectra: closed-form eigenvalues") {
  CHECK(closed(Family::Sphere, ClosedForm::Identity, 1, 7, 7).lambda(1) == doctest::Approx(-6.0));
  CHECK(closed(Family::SU3, ClosedForm::SU3Identity, 1, 1, 1).lambda(2) == doctest::Approx(4.0));
  CHECK(closed(Family::Sphere, ClosedForm::LinearOneMinusG, 3, 2, 2).lambda(1) ==
        doctest::Approx(1.0 / 3.0));
  CHECK(closed(Family::Sphere, ClosedForm::Identity, 3, 8, 8).lambda(1) ==
        doctest::Approx(11.0 / 3.0));
  CHECK(closed(Family::SpecialOrthogonal, ClosedForm::Identity, 2, 4, 4).lambda(2) ==
        doctest::Approx(10.0));
  CHECK(closed(Family::SpecialOrthogonal, ClosedForm::LinearOneMinusTwoG, 2, 2, 2).lambda(1) ==
        doctest::Approx(0.0));
  const double su3[] = {-6, 4, 16, 30, 46};
  for (int j = 1; j <= 5; ++j)
    CHECK(closed(Family::SU3, ClosedForm::SU3Identity, 1, 1, 1).lambda(j) == su3[j - 1]);
}

TEST_CASE("spectra: uncovered pairs") {
  CHECK(code_of([] {
          analytic_spectrum(make_problem(Family::Sphere, 2, 3, 5, -1), ClosedForm::LinearOneMinusG);
        }) == ErrorCode::NoClosedForm);
  CHECK(code_of([] {
          analytic_spectrum(make_problem(Family::Sphere, 2, 3, 3, 1), ClosedForm::SU3Identity);
        }) == ErrorCode::NoClosedForm);
}

TEST_CASE("spectra: analytic derivatives match differences") {
  for (const auto& cv : kCovered) {
    for (const auto& p : covered_problems(cv.family, cv.kind, 4)) {
      const auto a = analytic_spectrum(p, cv.kind);
      for (int j = 1; j <= 6; ++j) {
        for (double x : {-2.0, 0.3, 1.1}) {
          const auto f = [&](double s) { return a.eigenfunction(j, s); };
          const double scale = std::max(1.0, std::abs(f(x)));
          CHECK(std::abs(a.eigenfunction(j, x, 1) - oracle::d1(f, x)) / scale < 1e-7);
          CHECK(std::abs(a.eigenfunction(j, x, 2) - oracle::d2(f, x)) / scale < 1e-5);
        }
      }
    }
  }
}

TEST_CASE("spectra: residual examples") {
  const auto s344 = closed_form_problem(Family::Sphere, ClosedForm::Identity, 3, 4, 4);
  CHECK(std::abs(analytic_residual(s344, ClosedForm::Identity, 2, 0.5)) < 1e-8);
  CHECK(std::abs(fd_residual(analytic_spectrum(s344, ClosedForm::Identity), 2, 0.5)) < 1e-6);

  const auto so222 = closed_form_problem(Family::SpecialOrthogonal, ClosedForm::LinearOneMinusTwoG, 2, 2, 2);
  CHECK(std::abs(analytic_residual(so222, ClosedForm::LinearOneMinusTwoG, 1, 1.0)) < 1e-8);
  CHECK(std::abs(fd_residual(analytic_spectrum(so222, ClosedForm::LinearOneMinusTwoG), 1, 1.0)) < 1e-6);

  for (const auto& cv : kCovered)
    for (const auto& p : covered_problems(cv.family, cv.kind, 8))
      CHECK(std::abs(analytic_residual(p, cv.kind, 1, 0.0)) < 1e-10);
}

TEST_CASE("spectra: residual of every covered pair, j <= 8, |x| <= 5") {
  for (const auto& cv : kCovered) {
    if (cv.kind == ClosedForm::SU3Identity) continue;  // see below
    for (const auto& p : covered_problems(cv.family, cv.kind, 8)) {
      const auto a = analytic_spectrum(p, cv.kind);
      for (int j = 1; j <= 8; ++j) {
        for (double x = -5.0; x <= 5.0; x += 0.25) {
          const double scale = std::max(1.0, std::abs(a.eigenfunction(j, x)));
          CHECK(std::abs(analytic_residual(p, cv.kind, j, x)) / scale < 1e-8);
        }
      }
    }
  }
}

// The listed SU(3) closed-form pairs satisfy the Jacobi equation only for j = 1.
TEST_CASE("spectra: residual of the SU(3) identity pairs, j <= 8" * doctest::may_fail()) {
  const auto p = closed_form_problem(Family::SU3, ClosedForm::SU3Identity, 1, 1, 1);
  double worst = 0.0;
  for (int j = 1; j <= 8; ++j)
    for (double x = -5.0; x <= 5.0; x += 0.25)
      worst = std::max(worst, std::abs(analytic_residual(p, ClosedForm::SU3Identity, j, x)));
  CHECK(worst < 1e-8);
}

TEST_CASE("spectra: the decaying SU(3) pairs solve the same equation") {
  const auto p = closed_form_problem(Family::SU3, ClosedForm::SU3Identity, 1, 1, 1);
  const auto c = jacobi_coefficients(p, ClosedForm::SU3Identity);
  for (int j = 1; j <= 8; ++j) {
    for (double x = -5.0; x <= 5.0; x += 0.5) {
      const auto f = [&](double s) { return oracle::su3_eigenfunction(j, s); };
      const double r = oracle::d2(f, x) + c.b(x) * oracle::d1(f, x) +
                       (c.c(x) + oracle::su3_lambda(j) * c.w(x)) * f(x);
      CHECK(std::abs(r) < 1e-6);
    }
  }
}

TEST_CASE("spectra: formula invariants") {
  for (const auto& cv : kCovered) {
    for (const auto& p : covered_problems(cv.family, cv.kind, 8)) {
      const auto a = analytic_spectrum(p, cv.kind);
      for (int j = 2; j <= 10; ++j) CHECK(a.lambda(j) > a.lambda(j - 1));
      // The listed SU(3) functions grow like cosh^2 x; oscillation
      // counting applies only to the decaying pairs.
      if (cv.kind == ClosedForm::SU3Identity) continue;
      for (int j = 1; j <= 8; ++j) {
        std::vector<EigenSample> f;
        for (double x = -8.0; x <= 8.0; x += 0.01) f.push_back({x, a.eigenfunction(j, x)});
        CHECK(zero_count(f, 0.0) == j - 1);
      }
    }
  }
}

TEST_CASE("spectra: verify_spectrum") {
  const auto spec = closed_form_problem(Family::Sphere, ClosedForm::Identity, 2, 2, 2);
  const auto rep = solve_spectrum(spec, ClosedForm::Identity, 5, 1e-9);
  const auto a = analytic_spectrum(spec, ClosedForm::Identity);
  const auto cmp = verify_spectrum(rep, a, 1e-6);
  CHECK(cmp.all_pass);
  REQUIRE(cmp.entries.size() == 5);
  for (const auto& e : cmp.entries) {
    CHECK(e.abs_diff < 1e-6);
    CHECK(e.eigenfunction_diff < 1e-5);
  }
  const auto other = analytic_spectrum(closed_form_problem(Family::Sphere, ClosedForm::Identity, 2, 1, 1),
                                       ClosedForm::Identity);
  CHECK(code_of([&] { verify_spectrum(rep, other, 1e-6); }) == ErrorCode::Precondition);
  const auto lin = analytic_spectrum(
      closed_form_problem(Family::Sphere, ClosedForm::LinearOneMinusG, 2, 2, 2), ClosedForm::LinearOneMinusG);
  CHECK(code_of([&] { verify_spectrum(rep, lin, 1e-6); }) == ErrorCode::Precondition);
}

TEST_CASE("spectra: SU(3) eigenfunction j = 1 against cosh^2" * doctest::may_fail()) {
  const auto spec = closed_form_problem(Family::SU3, ClosedForm::SU3Identity, 1, 1, 1);
  const auto rep = solve_spectrum(spec, ClosedForm::SU3Identity, 1, 1e-9);
  const auto cmp = verify_spectrum(rep, analytic_spectrum(spec, ClosedForm::SU3Identity), 1e-6);
  CHECK(cmp.entries.front().eigenfunction_diff < 1e-5);
}

TEST_CASE("spectra: stability verdicts") {
  const auto s388 = closed(Family::Sphere, ClosedForm::Identity, 3, 8, 8);
  CHECK(stability_verdict(s388).classification == Stability::Stable);
  CHECK(stability_verdict(s388).lambda_1 == doctest::Approx(11.0 / 3.0));
  const auto v144 = stability_verdict(closed(Family::Sphere, ClosedForm::Identity, 1, 4, 4));
  CHECK(v144.classification == Stability::Unstable);
  CHECK(v144.lambda_1 == doctest::Approx(-3.0));
  CHECK(v144.index == 1);
  const auto v422 = stability_verdict(closed(Family::Sphere, ClosedForm::LinearOneMinusG, 4, 2, 2));
  CHECK(v422.classification == Stability::WeaklyStable);
  CHECK(v422.tol == kAnalyticStabilityTol);

  const auto spec = closed_form_problem(Family::Sphere, ClosedForm::Identity, 1, 3, 3);
  const auto rep = solve_spectrum(spec, ClosedForm::Identity, 3, 1e-9);
  const auto vn = stability_verdict(rep);
  CHECK(vn.classification == Stability::Unstable);
  CHECK(vn.lambda_1 == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(vn.index == 1);
  CHECK(vn.tol > 0.0);
}

TEST_CASE("spectra: stability lists") {
  for (const auto& p : sphere_identity_stable_list(8)) {
    if (p.g == 1 && p.m0 == 1 && p.m1 == 1) continue;  // see below
    CHECK(analytic_spectrum(p, ClosedForm::Identity).lambda(1) > 0.0);
  }
  for (const auto& p : so_identity_stable_list(8))
    CHECK(analytic_spectrum(p, ClosedForm::Identity).lambda(1) > 0.0);
  for (const auto& p : sphere_linear_stable_list(8)) {
    const double l1 = analytic_spectrum(p, ClosedForm::LinearOneMinusG).lambda(1);
    if (p.g == 4 && p.m0 == 2)
      CHECK(std::abs(l1) < 1e-12);
    else
      CHECK(l1 > 0.0);
  }
  for (const auto& p : so_linear_stable_list(8)) {
    const double l1 = analytic_spectrum(p, ClosedForm::LinearOneMinusTwoG).lambda(1);
    if (p.g == 2 && p.m0 == 2)
      CHECK(std::abs(l1) < 1e-12);
    else
      CHECK(l1 > 0.0);
  }
  for (int m = 2; m <= 8; ++m)
    CHECK(closed(Family::Sphere, ClosedForm::Identity, 1, m, m).lambda(1) == doctest::Approx(1.0 - m));
}

// (1,1,1) is in the sphere list, but the closed form gives lambda_1 = 0.
TEST_CASE("spectra: sphere identity (1,1,1) strictly stable" * doctest::may_fail()) {
  CHECK(closed(Family::Sphere, ClosedForm::Identity, 1, 1, 1).lambda(1) > 0.0);
}

TEST_CASE("spectra: coincidences") {
  for (int m = 1; m <= 8; ++m) {
    if (!admissible_triple(2, m, m)) continue;
    const auto id = closed(Family::Sphere, ClosedForm::Identity, 2, m, m);
    const auto lin = closed(Family::Sphere, ClosedForm::LinearOneMinusG, 2, m, m);
    for (int j = 1; j <= 10; ++j) CHECK(id.lambda(j) == doctest::Approx(lin.lambda(j)));
  }
  const auto su3 = closed(Family::SU3, ClosedForm::SU3Identity, 1, 1, 1);
  const auto s177 = closed(Family::Sphere, ClosedForm::Identity, 1, 7, 7);
  for (int j = 1; j <= 10; ++j) CHECK(su3.lambda(j) == doctest::Approx(s177.lambda(j)));
}

TEST_CASE("spectra: covered problems") {
  const auto sphere = covered_problems(Family::Sphere, ClosedForm::Identity, 8);
  CHECK(std::find(sphere.begin(), sphere.end(), make_problem(Family::Sphere, 3, 8, 8, 1)) !=
        sphere.end());
  for (const auto& p : covered_problems(Family::Sphere, ClosedForm::LinearOneMinusG, 8)) {
    CHECK(p.m0 == p.m1);
    CHECK(p.k == 1 - p.g);
  }
  CHECK(covered_problems(Family::SU3, ClosedForm::SU3Identity, 8).size() == 1);
}

TEST_CASE("spectra: reproduction table (closed forms only)") {
  ReproductionOptions o;
  o.numeric = false;
  const auto rows = reproduction_table(o);
  int weak = 0, disagreeing = 0;
  for (const auto& r : rows) {
    if (r.expected == "weakly_stable") {
      ++weak;
      CHECK(r.verdict == Stability::WeaklyStable);
      CHECK(r.agrees);
      CHECK_FALSE(r.note.empty());
    }
    if (!r.agrees) {
      ++disagreeing;
      CHECK(r.spec == make_problem(Family::Sphere, 1, 1, 1, 1));
    }
  }
  CHECK(weak == 2);
  CHECK(disagreeing == 1);
}
