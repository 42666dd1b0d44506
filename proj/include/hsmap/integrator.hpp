#pragma once

// Embedded Dormand-Prince 5(4) pair with the 4th-order continuous extension
// (Hairer, Norsett, Wanner). Works in either direction of x.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace hsmap {

enum class IntegrationStatus { Completed, Stopped, StepTooSmall, MaxSteps, NonFinite };

template <typename Scalar, int Dim>
class DormandPrince {
public:
  using State = Eigen::Matrix<Scalar, Dim, 1>;

  struct Options {
    Scalar rtol = Scalar(1e-11);
    Scalar atol = Scalar(1e-12);
    Scalar h_max = Scalar(0.1);
    Scalar h_init = Scalar(1e-3);
    Scalar h_min = Scalar(1e-13);
    long max_steps = 2'000'000;
  };

  // One accepted step together with its dense-output polynomial.
  struct Step {
    Scalar x0, x1;
    State y0, y1;
    State r2, r3, r4, r5;

    State operator()(Scalar x) const {
      const Scalar h = x1 - x0;
      const Scalar th = (x - x0) / h;
      const Scalar th1 = Scalar(1) - th;
      return y0 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    }
  };

  struct Result {
    IntegrationStatus status;
    Scalar x;
    State y;
    long steps;
  };

  DormandPrince() = default;
  explicit DormandPrince(Options options) : options_(options) {}

  const Options& options() const { return options_; }

  // Integrates y' = f(x, y) from x0 to x1. The observer is called with every
  // accepted Step and returns false to stop early.
  template <typename Rhs, typename Observer>
  Result integrate(Rhs&& f, Scalar x0, const State& y_start, Scalar x1,
                   Observer&& observer) const {
    using std::abs;
    const Scalar dir = x1 >= x0 ? Scalar(1) : Scalar(-1);
    Scalar x = x0;
    State y = y_start;
    Result result{IntegrationStatus::Completed, x, y, 0};
    if (x0 == x1) return result;

    Scalar h = std::min(options_.h_init, options_.h_max) * dir;
    State k1 = f(x, y), k2, k3, k4, k5, k6, k7;
    long steps = 0;

    while ((x1 - x) * dir > Scalar(0)) {
      if (steps >= options_.max_steps) {
        result.status = IntegrationStatus::MaxSteps;
        break;
      }
      bool last = false;
      if ((x + h - x1) * dir >= Scalar(0)) {
        h = x1 - x;
        last = true;
      }

      k2 = f(x + c2 * h, y + h * (a21 * k1));
      k3 = f(x + c3 * h, y + h * (a31 * k1 + a32 * k2));
      k4 = f(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = f(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = f(x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const State y_new =
          y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      k7 = f(x + h, y_new);

      const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      Scalar norm(0);
      for (int i = 0; i < y.size(); ++i) {
        const Scalar sc = options_.atol +
                          options_.rtol * std::max(abs(y[i]), abs(y_new[i]));
        norm += (err[i] / sc) * (err[i] / sc);
      }
      norm = std::sqrt(norm / Scalar(y.size()));

      if (!std::isfinite(static_cast<double>(norm))) {
        if (abs(h) <= options_.h_min) {
          result.status = IntegrationStatus::NonFinite;
          break;
        }
        h *= Scalar(0.25);
        continue;
      }

      if (norm <= Scalar(1)) {
        Step step;
        step.x0 = x;
        step.x1 = last ? x1 : x + h;
        step.y0 = y;
        step.y1 = y_new;
        step.r2 = y_new - y;
        step.r3 = h * k1 - step.r2;
        step.r4 = step.r2 - h * k7 - step.r3;
        step.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

        x = step.x1;
        y = y_new;
        k1 = k7;
        ++steps;
        if (!observer(step)) {
          result.status = IntegrationStatus::Stopped;
          break;
        }
      }

      Scalar fac = norm > Scalar(0)
                       ? Scalar(0.9) * std::pow(norm, Scalar(-0.2))
                       : Scalar(5);
      fac = std::clamp(fac, Scalar(0.2), Scalar(5));
      if (norm > Scalar(1)) fac = std::min(fac, Scalar(1));
      h = dir * std::min(abs(h) * fac, options_.h_max);
      if (abs(h) < options_.h_min && (x1 - x) * dir > options_.h_min) {
        result.status = IntegrationStatus::StepTooSmall;
        break;
      }
    }
    result.x = x;
    result.y = y;
    result.steps = steps;
    return result;
  }

  template <typename Rhs>
  Result integrate(Rhs&& f, Scalar x0, const State& y0, Scalar x1) const {
    return integrate(std::forward<Rhs>(f), x0, y0, x1, [](const Step&) { return true; });
  }

private:
  Options options_{};

  static constexpr Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5,
                          c5 = Scalar(8) / 9;
  static constexpr Scalar a21 = Scalar(1) / 5;
  static constexpr Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
  static constexpr Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15,
                          a43 = Scalar(32) / 9;
  static constexpr Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187,
                          a53 = Scalar(64448) / 6561, a54 = Scalar(-212) / 729;
  static constexpr Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33,
                          a63 = Scalar(46732) / 5247, a64 = Scalar(49) / 176,
                          a65 = Scalar(-5103) / 18656;
  static constexpr Scalar a71 = Scalar(35) / 384, a73 = Scalar(500) / 1113,
                          a74 = Scalar(125) / 192, a75 = Scalar(-2187) / 6784,
                          a76 = Scalar(11) / 84;
  static constexpr Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695,
                          e4 = Scalar(71) / 1920, e5 = Scalar(-17253) / 339200,
                          e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;
  static constexpr Scalar d1 = Scalar(-12715105075.0L / 11282082432.0L),
                          d3 = Scalar(87487479700.0L / 32700410799.0L),
                          d4 = Scalar(-10690763975.0L / 1880347072.0L),
                          d5 = Scalar(701980252875.0L / 199316789632.0L),
                          d6 = Scalar(-1453857185.0L / 822651844.0L),
                          d7 = Scalar(69997945.0L / 29380423.0L);
};

}  // namespace hsmap
