#include "hsmap/sturm.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>
#include <thread>

#include "hsmap/error.hpp"
#include "hsmap/integrator.hpp"

namespace hsmap {

namespace {

constexpr double kPi = std::numbers::pi;

using Angle = DormandPrince<double, 1>;
using Polar = DormandPrince<double, 2>;

std::pair<double, double> resolve_domain(const SturmOptions& options) {
  if (options.domain) return *options.domain;
  return {-options.x_max, options.x_max};
}

double q_of(const LinearOdeCoefficients& c, double lambda, double x) {
  return c.c(x) + lambda * c.w(x);
}

double theta_rhs(const LinearOdeCoefficients& c, double lambda, double x, double theta) {
  const double s = std::sin(theta), co = std::cos(theta);
  return co * co + c.b(x) * s * co + q_of(c, lambda, x) * s * s;
}

// Boundary angle at an endpoint. For decaying rays the frozen-coefficient
// indicial equation kappa^2 + b kappa + q = 0 is solved at the endpoint and
// the root that decays towards the end is used (larger on the left, smaller
// on the right).
double boundary_angle(const LinearOdeCoefficients& c, double lambda, double x, bool left,
                      BoundaryKind kind) {
  if (kind == BoundaryKind::Dirichlet) return left ? 0.0 : kPi;
  const double b = c.b(x);
  const double q = q_of(c, lambda, x);
  const double disc = b * b - 4.0 * q;
  const double sq = disc > 0.0 ? std::sqrt(disc) : 0.0;
  const double kappa = left ? 0.5 * (-b + sq) : 0.5 * (-b - sq);
  return std::atan2(1.0, kappa);
}

Angle::Options angle_options(const SturmOptions& o) {
  Angle::Options a;
  a.rtol = o.rtol;
  a.atol = o.atol;
  a.h_max = o.h_max;
  a.h_init = 1e-2;
  return a;
}

double integrate_angle(const LinearOdeCoefficients& c, double lambda, double from, double to,
                       double theta0, const SturmOptions& o) {
  const Angle stepper(angle_options(o));
  Angle::State y;
  y << theta0;
  const auto f = [&](double x, const Angle::State& s) {
    Angle::State d;
    d << theta_rhs(c, lambda, x, s[0]);
    return d;
  };
  const auto result = stepper.integrate(f, from, y, to);
  if (result.status != IntegrationStatus::Completed || !std::isfinite(result.y[0])) {
    std::ostringstream msg;
    msg << "Prüfer integration failed at lambda = " << lambda << " (x = " << result.x << ")";
    throw Error(ErrorCode::Numeric, msg.str());
  }
  return result.y[0];
}

int count_from_mismatch(double d) {
  if (d <= 0.0) return 0;
  return static_cast<int>(std::ceil(d / kPi - 1e-12));
}

std::vector<double> uniform_grid(double a, double b, double step) {
  const auto n = std::max<long>(1, static_cast<long>(std::ceil(std::abs(b - a) / step - 1e-9)));
  const double h = (b - a) / static_cast<double>(n);
  std::vector<double> grid(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) grid[static_cast<std::size_t>(i)] = a + h * static_cast<double>(i);
  grid.back() = b;
  return grid;
}

struct PolarSample {
  double x;
  double theta;
  double log_rho;
};

std::vector<PolarSample> integrate_polar(const LinearOdeCoefficients& c, double lambda,
                                         const std::vector<double>& grid, double theta0,
                                         const SturmOptions& o) {
  Polar::Options po;
  po.rtol = o.rtol;
  po.atol = o.atol;
  po.h_max = o.h_max;
  const auto f = [&](double x, const Polar::State& s) {
    const double sn = std::sin(s[0]), cs = std::cos(s[0]);
    const double q = q_of(c, lambda, x);
    const double b = c.b(x);
    Polar::State d;
    d << cs * cs + b * sn * cs + q * sn * sn, (1.0 - q) * sn * cs - b * cs * cs;
    return d;
  };
  std::vector<PolarSample> out;
  out.reserve(grid.size());
  Polar::State y(theta0, 0.0);
  out.push_back({grid.front(), y[0], y[1]});
  for (std::size_t i = 1; i < grid.size(); ++i) {
    po.h_init = std::abs(grid[i] - grid[i - 1]);
    const auto result = Polar(po).integrate(f, grid[i - 1], y, grid[i]);
    if (result.status != IntegrationStatus::Completed)
      throw Error(ErrorCode::Numeric, "eigenfunction integration failed");
    y = result.y;
    out.push_back({grid[i], y[0], y[1]});
  }
  return out;
}

template <typename F>
auto parallel_map(int n, bool parallel, F&& f) {
  using R = decltype(f(0));
  std::vector<R> out(static_cast<std::size_t>(n));
  const unsigned workers = parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(i);
    return out;
  }
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (int i = static_cast<int>(w); i < n; i += static_cast<int>(workers))
        out[static_cast<std::size_t>(i)] = f(i);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace

double pruefer_mismatch(const LinearOdeCoefficients& coeffs, double lambda,
                        std::pair<double, double> domain, const SturmOptions& options) {
  const auto [lo, hi] = domain;
  if (!(lo < hi)) throw Error(ErrorCode::Precondition, "empty Sturm-Liouville domain");
  const double mid = 0.5 * (lo + hi);
  const double th_l0 = boundary_angle(coeffs, lambda, lo, true, options.boundary);
  const double th_r0 = boundary_angle(coeffs, lambda, hi, false, options.boundary);
  const double th_l = integrate_angle(coeffs, lambda, lo, mid, th_l0, options);
  const double th_r = integrate_angle(coeffs, lambda, hi, mid, th_r0, options);
  return th_l - th_r;
}

int pruefer_count(const LinearOdeCoefficients& coeffs, double lambda,
                  std::pair<double, double> domain, const SturmOptions& options) {
  return count_from_mismatch(pruefer_mismatch(coeffs, lambda, domain, options));
}

int pruefer_count(const LinearOdeCoefficients& coeffs, double lambda,
                  const SturmOptions& options) {
  return pruefer_count(coeffs, lambda, resolve_domain(options), options);
}

double eigenvalue(const LinearOdeCoefficients& coeffs, int j, double tol,
                  const SturmOptions& options) {
  if (j < 1) throw Error(ErrorCode::Precondition, "eigenvalue index starts at 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::Precondition, "tol must be positive");
  const auto domain = resolve_domain(options);
  const auto D = [&](double lambda) { return pruefer_mismatch(coeffs, lambda, domain, options); };
  const auto N = [&](double lambda) { return count_from_mismatch(D(lambda)); };

  // Weyl estimate in the x-normalization: lambda_t ~ G^2 j^2.
  double w0 = std::abs(coeffs.w(0.5 * (domain.first + domain.second)));
  if (!(w0 > 0.0)) w0 = 1.0;
  const double estimate = static_cast<double>(j) * j / w0;
  double step = std::max(1.0, 0.25 * estimate);
  double hi = estimate + step;
  int expansions = 0;
  while (N(hi) < j) {
    hi += step;
    step *= 2.0;
    if (++expansions > 60) throw Error(ErrorCode::NotFound, "upper eigenvalue bracket not found");
  }
  step = std::max(1.0, 0.25 * estimate);
  double lo = std::min(estimate - step, hi - step);
  while (N(lo) > j - 1) {
    lo -= step;
    step *= 2.0;
    if (++expansions > 120) throw Error(ErrorCode::NotFound, "lower eigenvalue bracket not found");
  }

  // Narrow until the bracket isolates lambda_j.
  int n_lo = N(lo), n_hi = N(hi);
  for (int it = 0; it < 200 && (n_lo != j - 1 || n_hi != j); ++it) {
    const double mid = 0.5 * (lo + hi);
    const int n = N(mid);
    if (n >= j) {
      hi = mid;
      n_hi = n;
    } else {
      lo = mid;
      n_lo = n;
    }
  }
  if (n_lo != j - 1 || n_hi != j) throw Error(ErrorCode::NotFound, "eigenvalue not isolated");

  // Illinois iteration on D(lambda) - (j - 1) pi.
  const double level = (j - 1) * kPi;
  double f_lo = D(lo) - level, f_hi = D(hi) - level;
  int side = 0;
  double lambda = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= 0.25 * tol) break;
    lambda = (f_hi != f_lo) ? (lo * f_hi - hi * f_lo) / (f_hi - f_lo) : 0.5 * (lo + hi);
    if (!(lambda > lo && lambda < hi)) lambda = 0.5 * (lo + hi);
    const double f = D(lambda) - level;
    if (f == 0.0) {
      lo = hi = lambda;
      break;
    }
    if (f > 0.0) {
      hi = lambda;
      f_hi = f;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    } else {
      lo = lambda;
      f_lo = f;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    }
    // Guard against slow one-sided convergence.
    if (std::abs(f) < 1e-14 * (1.0 + level)) break;
  }
  lambda = (f_hi != f_lo && hi > lo) ? (lo * f_hi - hi * f_lo) / (f_hi - f_lo) : 0.5 * (lo + hi);
  lambda = std::clamp(lambda, lo, hi);
  return lambda;
}

std::vector<EigenSample> eigenfunction(const LinearOdeCoefficients& coeffs, double lambda,
                                       const SturmOptions& options) {
  const auto [lo, hi] = resolve_domain(options);
  const double mid = 0.5 * (lo + hi);
  const auto left_grid = uniform_grid(lo, mid, options.sample_step);
  const auto right_grid = uniform_grid(hi, mid, options.sample_step);
  const auto left = integrate_polar(coeffs, lambda, left_grid,
                                    boundary_angle(coeffs, lambda, lo, true, options.boundary),
                                    options);
  const auto right = integrate_polar(coeffs, lambda, right_grid,
                                     boundary_angle(coeffs, lambda, hi, false, options.boundary),
                                     options);
  const auto& a = left.back();
  const auto& b = right.back();
  const double mismatch = std::abs(std::sin(a.theta - b.theta));
  if (mismatch > 1e-6) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " is not an eigenvalue (angle mismatch " << mismatch << ")";
    throw Error(ErrorCode::NotEigenvalue, msg.str());
  }
  // Match xi (or xi' when xi is small) at the midpoint.
  double ratio_sign, log_ratio;
  if (std::abs(std::sin(a.theta)) >= std::abs(std::cos(a.theta))) {
    ratio_sign = std::sin(a.theta) * std::sin(b.theta) > 0 ? 1.0 : -1.0;
    log_ratio = a.log_rho - b.log_rho + std::log(std::abs(std::sin(a.theta) / std::sin(b.theta)));
  } else {
    ratio_sign = std::cos(a.theta) * std::cos(b.theta) > 0 ? 1.0 : -1.0;
    log_ratio = a.log_rho - b.log_rho + std::log(std::abs(std::cos(a.theta) / std::cos(b.theta)));
  }

  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& s : left) peak = std::max(peak, s.log_rho);
  for (const auto& s : right) peak = std::max(peak, s.log_rho + log_ratio);

  std::vector<EigenSample> out;
  out.reserve(left.size() + right.size());
  for (const auto& s : left) out.push_back({s.x, std::exp(s.log_rho - peak) * std::sin(s.theta)});
  for (auto it = right.rbegin() + 1; it != right.rend(); ++it)
    out.push_back({it->x, ratio_sign * std::exp(it->log_rho + log_ratio - peak) *
                              std::sin(it->theta)});

  double max_abs = 0.0;
  for (const auto& s : out) max_abs = std::max(max_abs, std::abs(s.xi));
  double sign = 1.0;
  for (const auto& s : out) {
    if (std::abs(s.xi) > 1e-12 * max_abs) {
      sign = s.xi > 0 ? 1.0 : -1.0;
      break;
    }
  }
  for (auto& s : out) s.xi *= sign / max_abs;
  return out;
}

EigenPair eigen_pair(const LinearOdeCoefficients& coeffs, int j, double tol,
                     const SturmOptions& options) {
  EigenPair pair;
  pair.j = j;
  SturmOptions o = options;
  if (o.domain) {
    pair.lambda_x = eigenvalue(coeffs, j, tol, o);
    pair.uncertainty = 0.0;
    pair.truncation = o.domain->second;
  } else {
    double current = eigenvalue(coeffs, j, tol, o);
    for (;;) {
      SturmOptions wider = o;
      wider.x_max = o.x_max + o.x_step;
      const double next = eigenvalue(coeffs, j, tol, wider);
      pair.uncertainty = std::abs(next - current);
      if (pair.uncertainty <= tol || wider.x_max + o.x_step > o.x_max_limit + 1e-12) {
        pair.lambda_x = next;
        o = wider;
        break;
      }
      o = wider;
      current = next;
    }
    pair.truncation = o.x_max;
  }
  pair.lambda_t = coeffs.chart.eigen_scale() * pair.lambda_x;
  pair.eigenfunction = eigenfunction(coeffs, pair.lambda_x, o);
  pair.zero_count = zero_count(pair.eigenfunction);
  return pair;
}

SpectrumReport spectrum(const LinearOdeCoefficients& coeffs, int j_max, double tol,
                        const SturmOptions& options) {
  if (j_max < 1) throw Error(ErrorCode::Precondition, "j_max must be at least 1");
  SpectrumReport report;
  report.label = coeffs.label;
  report.chart = coeffs.chart;
  report.weyl_target = coeffs.chart.weyl_target();
  report.pairs = parallel_map(j_max, options.parallel,
                              [&](int i) { return eigen_pair(coeffs, i + 1, tol, options); });
  report.weyl_slope = weyl_slope(report.pairs);
  return report;
}

int zero_count(const std::vector<EigenSample>& f, double floor) {
  return static_cast<int>(zeros_of(f, floor).size());
}

std::vector<double> zeros_of(const std::vector<EigenSample>& f, double floor) {
  std::vector<double> zeros;
  const EigenSample* last = nullptr;
  for (const auto& s : f) {
    if (std::abs(s.xi) < floor) continue;
    if (last && (s.xi > 0) != (last->xi > 0)) {
      zeros.push_back(last->x - last->xi * (s.x - last->x) / (s.xi - last->xi));
    }
    last = &s;
  }
  return zeros;
}

bool interlaces(const std::vector<double>& lower, const std::vector<double>& upper) {
  if (upper.size() != lower.size() + 1) return false;
  for (std::size_t i = 0; i + 1 < lower.size(); ++i) {
    const auto n = std::count_if(upper.begin(), upper.end(), [&](double z) {
      return z > lower[i] && z < lower[i + 1];
    });
    if (n != 1) return false;
  }
  return true;
}

std::optional<double> weyl_slope(const std::vector<EigenPair>& pairs) {
  const int n = static_cast<int>(pairs.size());
  if (n < 2) return std::nullopt;
  const bool quadratic = n >= 3;
  const int used = quadratic ? std::max(3, (n + 1) / 2) : n;
  const int cols = quadratic ? 3 : 2;
  Eigen::MatrixXd A(used, cols);
  Eigen::VectorXd y(used);
  for (int i = 0; i < used; ++i) {
    const auto& p = pairs[static_cast<std::size_t>(n - used + i)];
    const double j = p.j;
    A(i, 0) = j * j;
    if (quadratic) {
      A(i, 1) = j;
      A(i, 2) = 1.0;
    } else {
      A(i, 1) = 1.0;
    }
    y(i) = p.lambda_t;
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
  return coef(0);
}

}  // namespace hsmap
