#include "hsmap/shooting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "hsmap/error.hpp"

namespace hsmap {

namespace {

using Stepper = DormandPrince<double, 2>;
using State = Stepper::State;

constexpr double kHalfPi = std::numbers::pi / 2.0;

Stepper make_stepper(const ShootingOptions& options, double tol_scale = 1.0) {
  Stepper::Options o;
  o.rtol = options.rtol * tol_scale;
  o.atol = options.atol * tol_scale;
  o.h_max = options.h_max;
  o.h_init = std::min(1e-2, options.h_max);
  return Stepper(o);
}

auto rhs_for(const ProblemSpec& spec) {
  return [spec](double x, const State& y) {
    State d;
    d << y[1], harmonic_rhs_x(spec, x, y[0], y[1]);
    return d;
  };
}

bool blown_up(const State& y, double target, double bound) {
  return !std::isfinite(y[0]) || !std::isfinite(y[1]) || std::abs(y[0] - target) > bound ||
         std::abs(y[1]) > 1e6;
}

// Integrates from x_from to x_to (either direction) and returns the state at
// x_to, or the state at blow-up.
struct Endpoint {
  double x;
  State y;
  bool diverged;
};

Endpoint run(const ProblemSpec& spec, double x_from, const State& y0, double x_to,
             const ShootingOptions& options, double tol_scale = 1.0) {
  const double target = spec.target();
  const Stepper stepper = make_stepper(options, tol_scale);
  bool diverged = false;
  double x_stop = x_to;
  State y_stop = y0;
  auto result = stepper.integrate(rhs_for(spec), x_from, y0, x_to, [&](const Stepper::Step& s) {
    if (blown_up(s.y1, target, options.blowup_bound)) {
      diverged = true;
      x_stop = s.x1;
      y_stop = s.y1;
      return false;
    }
    return true;
  });
  if (!diverged) {
    if (result.status != IntegrationStatus::Completed) {
      diverged = true;
    }
    x_stop = result.x;
    y_stop = result.y;
  }
  return {x_stop, y_stop, diverged};
}

// Integrates along a uniform grid (either direction), restarting the stepper
// at every grid point so that samples are step endpoints rather than
// dense-output values.
std::vector<ProfileSample> run_on_grid(const ProblemSpec& spec, const std::vector<double>& grid,
                                       const State& y0, const ShootingOptions& options,
                                       std::optional<Divergence>* divergence,
                                       IntegrationStatus* status) {
  const double target = spec.target();
  const auto f = rhs_for(spec);
  Stepper::Options o;
  o.rtol = options.rtol;
  o.atol = options.atol;
  o.h_max = options.h_max;
  std::vector<ProfileSample> out;
  out.reserve(grid.size());
  State y = y0;
  out.push_back({grid.front(), y[0], y[1]});
  for (std::size_t i = 1; i < grid.size(); ++i) {
    o.h_init = std::abs(grid[i] - grid[i - 1]);
    const auto result = Stepper(o).integrate(f, grid[i - 1], y, grid[i]);
    if (result.status != IntegrationStatus::Completed) {
      if (status) *status = result.status;
      if (divergence) *divergence = Divergence{result.x, result.y[0] >= 0 ? 1 : -1};
      break;
    }
    y = result.y;
    if (blown_up(y, target, options.blowup_bound)) {
      if (divergence) *divergence = Divergence{grid[i], y[0] - target >= 0 ? 1 : -1};
      break;
    }
    out.push_back({grid[i], y[0], y[1]});
  }
  return out;
}

std::vector<double> uniform_grid(double a, double b, double step) {
  const auto n = static_cast<long>(std::ceil((b - a) / step - 1e-9));
  const double h = (b - a) / static_cast<double>(n);
  std::vector<double> grid(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) grid[static_cast<std::size_t>(i)] = a + h * static_cast<double>(i);
  grid.back() = b;
  return grid;
}

double left_kappa(const ProblemSpec& spec) { return indicial_roots(spec, -1, 0.0)[1]; }

double right_kappa(const ProblemSpec& spec) {
  return indicial_roots(spec, 1, spec.target())[0];
}

// Start further left when the amplitude is large so that the seed stays in
// the linear regime; continuous in the amplitude.
double seed_start(double x_start, double amplitude, double kappa, double magnitude) {
  if (amplitude <= 0.0) return x_start;
  return std::min(x_start, std::log(magnitude / amplitude) / kappa);
}

double seed_end(double x_end, double b, double kappa_right, double magnitude) {
  if (b == 0.0) return x_end;
  return std::max(x_end, std::log(magnitude / std::abs(b)) / kappa_right);
}

State left_state(double amplitude, double kappa, double x) {
  const double r = amplitude * std::exp(kappa * x);
  return State(r, kappa * r);
}

State right_state(double target, double b, double kappa, double x) {
  const double d = b * std::exp(kappa * x);
  return State(target + d, kappa * d);
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

struct Matching {
  Eigen::Vector2d mismatch;
  State left;
  State right;
  bool ok;
};

struct Geometry {
  double x_start;
  double x_end;
  double x_match;
  double kappa_left;
  double kappa_right;
  double target;
};

Matching match(const ProblemSpec& spec, const Geometry& geo, double a, double b,
               const ShootingOptions& options, double tol_scale) {
  const auto left = run(spec, geo.x_start, left_state(a, geo.kappa_left, geo.x_start),
                        geo.x_match, options, tol_scale);
  const auto right = run(spec, geo.x_end, right_state(geo.target, b, geo.kappa_right, geo.x_end),
                         geo.x_match, options, tol_scale);
  Matching m;
  m.left = left.y;
  m.right = right.y;
  m.ok = !left.diverged && !right.diverged;
  m.mismatch = (left.y - right.y).cast<double>();
  return m;
}

struct Polished {
  double a;
  double b;
  double mismatch;
  bool converged;
};

Polished newton_polish(const ProblemSpec& spec, const Geometry& geo, double a, double b,
                       const ShootingOptions& options, double tol_scale) {
  Matching m = match(spec, geo, a, b, options, tol_scale);
  if (!m.ok) return {a, b, std::numeric_limits<double>::infinity(), false};
  double norm = m.mismatch.norm();
  for (int it = 0; it < options.max_newton; ++it) {
    const double da = 1e-7 * std::max(std::abs(a), 1e-6);
    const double db = 1e-7 * std::max(std::abs(b), 1e-3);
    const Matching ma = match(spec, geo, a + da, b, options, tol_scale);
    const Matching mb = match(spec, geo, a, b + db, options, tol_scale);
    if (!ma.ok || !mb.ok) break;
    Eigen::Matrix2d jac;
    jac.col(0) = (ma.mismatch - m.mismatch) / da;
    jac.col(1) = (mb.mismatch - m.mismatch) / db;
    const Eigen::Vector2d step = jac.fullPivLu().solve(-m.mismatch);
    if (!step.allFinite()) break;

    // Damped update: halve until the mismatch decreases.
    double scale = 1.0;
    bool improved = false;
    for (int k = 0; k < 30; ++k) {
      const double a_new = a + scale * step[0];
      const double b_new = b + scale * step[1];
      if (a_new > 0.0) {
        const Matching trial = match(spec, geo, a_new, b_new, options, tol_scale);
        if (trial.ok && trial.mismatch.norm() < norm) {
          a = a_new;
          b = b_new;
          m = trial;
          norm = trial.mismatch.norm();
          improved = true;
          break;
        }
      }
      scale *= 0.5;
    }
    if (!improved) break;
    if (std::abs(step[0]) <= 1e-15 * std::abs(a) && std::abs(step[1]) <= 1e-15 * (1 + std::abs(b)))
      break;
    if (norm < 1e-14) break;
  }
  return {a, b, norm, norm < 1e-6};
}

// Separatrix endpoint from the final bisection bracket: the two trajectories
// agree until they are pushed apart near the equilibrium the separatrix
// reaches.
struct SeparatrixInfo {
  double equilibrium;
  double b_estimate;
};

// Accepted steps of one trajectory, integrated exactly as classify_amplitude
// does so that the final bisection bracket reproduces its two sides.
std::vector<Stepper::Step> record(const ProblemSpec& spec, double x_from, const State& y0,
                                  double x_to, const ShootingOptions& options) {
  const double target = spec.target();
  std::vector<Stepper::Step> steps;
  make_stepper(options).integrate(rhs_for(spec), x_from, y0, x_to, [&](const Stepper::Step& s) {
    steps.push_back(s);
    return !blown_up(s.y1, target, options.blowup_bound);
  });
  return steps;
}

std::optional<State> sample_steps(const std::vector<Stepper::Step>& steps, double x) {
  auto it = std::lower_bound(steps.begin(), steps.end(), x,
                             [](const Stepper::Step& s, double v) { return s.x1 < v; });
  if (it == steps.end() || x < it->x0) return std::nullopt;
  return (*it)(x);
}

SeparatrixInfo separatrix_info(const ProblemSpec& spec, double a_lo, double a_hi,
                               double kappa_left, double kappa_right,
                               const ShootingOptions& options) {
  const double xs_lo = seed_start(options.x_start, a_lo, kappa_left, options.seed_magnitude);
  const double xs_hi = seed_start(options.x_start, a_hi, kappa_left, options.seed_magnitude);
  const auto lo = record(spec, xs_lo, left_state(a_lo, kappa_left, xs_lo), options.x_end, options);
  const auto hi = record(spec, xs_hi, left_state(a_hi, kappa_left, xs_hi), options.x_end, options);
  if (lo.empty() || hi.empty()) throw Error(ErrorCode::Convergence, "empty trajectory");

  const double target = spec.target();
  const double kappa_unstable = indicial_roots(spec, 1, target)[1];
  const double x0 = std::max(lo.front().x0, hi.front().x0);
  const double x1 = std::min(lo.back().x1, hi.back().x1);
  const double dx = 0.01;
  double r_star = 0.0, x_star = x0;
  std::optional<double> b;
  double b_fallback = 0.0, best = std::numeric_limits<double>::infinity();
  for (double x = x0; x <= x1; x += dx) {
    const auto yl = sample_steps(lo, x);
    const auto yh = sample_steps(hi, x);
    if (!yl || !yh || std::abs((*yl)[0] - (*yh)[0]) > 0.02) break;
    r_star = 0.5 * ((*yl)[0] + (*yh)[0]);
    x_star = x;
    if (x < options.x_match) continue;
    // Stable component of the deviation from the target:
    // d = B e^{kR x} + C e^{kU x}  =>  B e^{kR x} = (kU d - d') / (kU - kR).
    const double d = r_star - target;
    const double dp = 0.5 * ((*yl)[1] + (*yh)[1]);
    const double stable = (kappa_unstable * d - dp) / (kappa_unstable - kappa_right);
    if (!b && std::abs(d) < 0.05) b = stable * std::exp(-kappa_right * x);
    if (std::abs(d) < best) {
      best = std::abs(d);
      b_fallback = stable * std::exp(-kappa_right * x);
    }
  }
  if (!std::isfinite(best)) b_fallback = (r_star - target) * std::exp(-kappa_right * x_star);
  return {nearest_right_equilibrium(spec, r_star), b ? *b : b_fallback};
}


bool coincides_with_closed_form(const SolutionProfile& p) {
  for (ClosedForm kind : {ClosedForm::Identity, ClosedForm::LinearOneMinusG,
                          ClosedForm::LinearOneMinusTwoG, ClosedForm::SU3Identity}) {
    try {
      const auto cf = linear_solution(p.spec, kind);
      double worst = 0.0;
      for (const auto& s : p.samples) worst = std::max(worst, std::abs(s.r - cf.r(s.x)));
      if (worst < 1e-6) return true;
    } catch (const Error&) {
    }
  }
  return false;
}

}  // namespace

double nearest_right_equilibrium(const ProblemSpec& spec, double r) {
  const double offset = spec.family == Family::SU3 ? 0.0 : spec.length();
  return offset + std::round((r - offset) / kHalfPi) * kHalfPi;
}

Trajectory integrate_ivp(const ProblemSpec& spec, double x_start, double r0, double rprime0,
                         double x_end, double tol, const ShootingOptions& options) {
  if (!(x_start < x_end)) throw Error(ErrorCode::Precondition, "integrate_ivp needs x_start < x_end");
  if (!(tol > 0.0)) throw Error(ErrorCode::Precondition, "integrate_ivp needs tol > 0");
  ShootingOptions o = options;
  o.rtol = tol;
  o.atol = tol * 0.1;
  Trajectory t;
  const auto grid = uniform_grid(x_start, x_end, o.sample_step);
  t.samples = run_on_grid(spec, grid, State(r0, rprime0), o, &t.divergence, &t.status);
  return t;
}

Seed unstable_manifold_seed(const ProblemSpec& spec, double x_start, double amplitude) {
  if (!(x_start <= -8.0)) throw Error(ErrorCode::Precondition, "seed needs x_start <= -8");
  if (!(amplitude >= 0.0)) throw Error(ErrorCode::Precondition, "seed needs amplitude >= 0");
  const double kappa = left_kappa(spec);
  if (!(kappa > 0.0)) throw Error(ErrorCode::Numeric, "no positive indicial root at r = 0");
  const State y = left_state(amplitude, kappa, x_start);
  return {y[0], y[1], kappa};
}

Terminal classify_amplitude(const ProblemSpec& spec, double amplitude,
                            const ShootingOptions& options) {
  const double kappa = left_kappa(spec);
  const double xs = seed_start(options.x_start, amplitude, kappa, options.seed_magnitude);
  const auto end = run(spec, xs, left_state(amplitude, kappa, xs), options.x_end, options);
  const double target = spec.target();
  return {end.x, end.y[0], sign_of(end.y[0] - target), end.diverged};
}

SolutionProfile shoot(const ProblemSpec& spec_in, std::pair<double, double> bracket,
                      int target_k, double tol, const ShootingOptions& options) {
  ProblemSpec spec = spec_in;
  spec.k = target_k;
  auto [a_lo, a_hi] = bracket;
  if (a_lo > a_hi) std::swap(a_lo, a_hi);
  if (!(a_lo > 0.0)) throw Error(ErrorCode::Precondition, "shooting amplitudes must be positive");
  if (!(tol > 0.0)) throw Error(ErrorCode::Precondition, "tolerance must be positive");

  const double target = spec.target();
  const double kappa_left = left_kappa(spec);
  const double kappa_right = right_kappa(spec);
  if (!(kappa_right < 0.0))
    throw Error(ErrorCode::Numeric, "target is not a saddle of the limit equation");

  int s_lo = classify_amplitude(spec, a_lo, options).sign;
  int s_hi = classify_amplitude(spec, a_hi, options).sign;
  if (s_lo == 0 || s_hi == 0 || s_lo == s_hi)
    throw Error(ErrorCode::Bracketing, "bracket does not straddle the target");

  int iterations = 0;
  while (a_hi - a_lo > 4.0 * std::numeric_limits<double>::epsilon() * a_hi) {
    if (++iterations > options.max_bisection)
      throw Error(ErrorCode::Convergence, "bisection stagnated");
    const double mid = a_hi / a_lo > 1.5 ? std::sqrt(a_lo * a_hi) : 0.5 * (a_lo + a_hi);
    if (mid <= a_lo || mid >= a_hi) break;
    const int s = classify_amplitude(spec, mid, options).sign;
    if (s == 0) {
      a_lo = a_hi = mid;
      break;
    }
    if (s == s_lo) a_lo = mid;
    else a_hi = mid;
  }

  const auto info = separatrix_info(spec, a_lo, a_hi, kappa_left, kappa_right, options);
  if (std::abs(info.equilibrium - target) > 1e-6) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "separatrix near A = " << a_lo << " reaches r = " << info.equilibrium
        << " instead of the target " << target;
    throw Error(ErrorCode::Convergence, msg.str());
  }

  // Two-sided polish on a grid that contains x_match.
  const double a0 = 0.5 * (a_lo + a_hi);
  const double h = options.sample_step;
  const double xs_raw = seed_start(options.x_start, a0, kappa_left, options.seed_magnitude);
  const double xe_raw = seed_end(options.x_end, info.b_estimate, kappa_right, options.seed_magnitude);
  Geometry geo;
  geo.x_match = options.x_match;
  geo.x_start = geo.x_match - h * std::ceil((geo.x_match - xs_raw) / h - 1e-9);
  geo.x_end = geo.x_match + h * std::ceil((xe_raw - geo.x_match) / h - 1e-9);
  geo.kappa_left = kappa_left;
  geo.kappa_right = kappa_right;
  geo.target = target;

  const Polished fine = newton_polish(spec, geo, a0, info.b_estimate, options, 1.0);
  if (!fine.converged)
    throw Error(ErrorCode::Convergence, "two-sided matching did not converge");
  const Polished loose = newton_polish(spec, geo, fine.a, fine.b, options, 10.0);

  // Sampled profile: left half forward, right half backward.
  const auto left_grid = uniform_grid(geo.x_start, geo.x_match, h);
  auto right_grid = uniform_grid(geo.x_match, geo.x_end, h);
  std::reverse(right_grid.begin(), right_grid.end());
  std::optional<Divergence> dl, dr;
  IntegrationStatus st = IntegrationStatus::Completed;
  auto left = run_on_grid(spec, left_grid, left_state(fine.a, kappa_left, geo.x_start), options,
                          &dl, &st);
  auto right = run_on_grid(spec, right_grid,
                           right_state(target, fine.b, kappa_right, geo.x_end), options, &dr, &st);
  if (dl || dr || left.size() != left_grid.size() || right.size() != right_grid.size())
    throw Error(ErrorCode::Divergence, "polished trajectory diverged");
  std::reverse(right.begin(), right.end());

  SolutionProfile p;
  p.spec = spec;
  p.target = target;
  p.kappa_left = kappa_left;
  p.kappa_right = kappa_right;
  p.shooting_parameter = fine.a;
  p.right_parameter = fine.b;
  p.samples = std::move(left);
  const ProfileSample junction_left = p.samples.back();
  const ProfileSample junction_right = right.front();
  p.samples.insert(p.samples.end(), right.begin() + 1, right.end());

  const double jump = std::abs(junction_left.r - junction_right.r) +
                      std::abs(junction_left.rprime - junction_right.rprime);
  const auto& last = p.samples.back();
  const auto& first = p.samples.front();
  const double right_limit = std::abs(last.r - last.rprime / kappa_right - target);
  const double left_limit = std::abs(first.r - first.rprime / kappa_left);
  p.boundary_defect = std::max({jump, right_limit, left_limit});
  p.parameter_uncertainty =
      std::max(std::abs(loose.a - fine.a), 4.0 * std::numeric_limits<double>::epsilon() * fine.a);
  p.residual_norm = profile_residual(p);
  p.nodal_number = count_crossings(p.samples, nodal_level(spec));
  p.is_linear = coincides_with_closed_form(p);

  if (spec.family != Family::SU3) {
    const int m = std::min(spec.m0, spec.m1);
    if (m < 2 || std::max(spec.m0, spec.m1) > 5) p.flags.push_back("multiplicity-outside-2..5");
  }
  if (!(p.boundary_defect < tol)) {
    std::ostringstream msg;
    msg << "boundary defect " << p.boundary_defect << " exceeds tolerance " << tol;
    throw Error(ErrorCode::Convergence, msg.str());
  }
  return p;
}

std::vector<SolutionProfile> find_family(const ProblemSpec& spec,
                                         std::pair<double, double> amplitude_range, int grid,
                                         double tol, const ShootingOptions& options,
                                         FamilyDiagnostics* diagnostics) {
  if (grid < 16) throw Error(ErrorCode::Precondition, "find_family needs grid >= 16");
  const auto [lo, hi] = amplitude_range;
  if (!(lo > 0.0) || !(hi > lo)) return {};

  const double step = std::log(hi / lo) / (grid - 1);
  std::vector<double> amps(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) amps[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  amps.back() = hi;

  std::vector<int> signs(amps.size(), 0);
  const unsigned workers =
      options.parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
  if (workers > 1) {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < amps.size(); i += workers)
          signs[i] = classify_amplitude(spec, amps[i], options).sign;
      }));
    }
    for (auto& j : jobs) j.get();
  } else {
    for (std::size_t i = 0; i < amps.size(); ++i)
      signs[i] = classify_amplitude(spec, amps[i], options).sign;
  }

  std::vector<SolutionProfile> found;
  for (std::size_t i = 0; i + 1 < amps.size(); ++i) {
    if (signs[i] == 0 || signs[i + 1] == 0 || signs[i] == signs[i + 1]) continue;
    try {
      found.push_back(shoot(spec, {amps[i], amps[i + 1]}, spec.k, tol, options));
    } catch (const Error& e) {
      if (diagnostics) {
        std::ostringstream note;
        note.precision(6);
        note << "bracket [" << amps[i] << ", " << amps[i + 1] << "]: " << e.what();
        diagnostics->notes.push_back(note.str());
      }
    }
  }

  std::sort(found.begin(), found.end(), [](const SolutionProfile& a, const SolutionProfile& b) {
    if (a.nodal_number != b.nodal_number) return a.nodal_number < b.nodal_number;
    return a.shooting_parameter < b.shooting_parameter;
  });

  std::vector<SolutionProfile> merged;
  for (auto& p : found) {
    if (!merged.empty()) {
      auto& q = merged.back();
      const double scale = std::max(1.0, std::abs(q.shooting_parameter));
      if (q.nodal_number == p.nodal_number &&
          std::abs(q.shooting_parameter - p.shooting_parameter) <= tol * scale) {
        if (p.boundary_defect < q.boundary_defect) std::swap(p, q);
        if (diagnostics) diagnostics->duplicates.push_back(std::move(p));
        continue;
      }
    }
    merged.push_back(std::move(p));
  }
  return merged;
}

SolutionProfile mirrored(const SolutionProfile& profile) {
  SolutionProfile m = profile;
  m.samples.clear();
  m.samples.reserve(profile.samples.size());
  for (auto it = profile.samples.rbegin(); it != profile.samples.rend(); ++it)
    m.samples.push_back({-it->x, profile.target - it->r, it->rprime});
  std::swap(m.kappa_left, m.kappa_right);
  m.kappa_left = -m.kappa_left;
  m.kappa_right = -m.kappa_right;
  std::swap(m.shooting_parameter, m.right_parameter);
  m.shooting_parameter = -m.shooting_parameter;
  m.right_parameter = -m.right_parameter;
  m.nodal_number = count_crossings(m.samples, nodal_level(m.spec));
  return m;
}

}  // namespace hsmap
