#include "hsmap/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hsmap {

int count_crossings(const std::vector<ProfileSample>& samples, double level) {
  int count = 0;
  int last_sign = 0;
  for (const auto& s : samples) {
    const double d = s.r - level;
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) ++count;
    last_sign = sign;
  }
  return count;
}

double nodal_level(const ProblemSpec&) { return std::numbers::pi / 2.0; }

double profile_residual(const SolutionProfile& profile) {
  const auto& s = profile.samples;
  const std::size_t n = s.size();
  if (n < 7) throw Error(ErrorCode::Precondition, "profile has fewer than 7 samples");
  const double h = s[1].x - s[0].x;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((s[i].x - s[i - 1].x) - h) > 1e-9 * std::abs(h))
      throw Error(ErrorCode::Precondition, "profile_residual needs a uniform grid");
  }
  double worst = 0.0;
  for (std::size_t i = 3; i + 3 < n; ++i) {
    const double d2 = (-s[i - 3].rprime + 9.0 * s[i - 2].rprime - 45.0 * s[i - 1].rprime +
                       45.0 * s[i + 1].rprime - 9.0 * s[i + 2].rprime + s[i + 3].rprime) /
                      (60.0 * h);
    const double rhs = harmonic_rhs_x(profile.spec, s[i].x, s[i].r, s[i].rprime);
    worst = std::max(worst, std::abs(d2 - rhs));
  }
  return worst;
}

ProfileInterpolant::ProfileInterpolant(const SolutionProfile& profile)
    : samples_(profile.samples),
      target_(profile.target),
      kappa_left_(profile.kappa_left),
      kappa_right_(profile.kappa_right) {
  if (samples_.size() < 2)
    throw Error(ErrorCode::Precondition, "profile needs at least two samples");
  h_ = samples_[1].x - samples_[0].x;
  uniform_ = true;
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].x > samples_[i - 1].x))
      throw Error(ErrorCode::Precondition, "profile samples must be strictly increasing");
    if (std::abs((samples_[i].x - samples_[i - 1].x) - h_) > 1e-9 * h_) uniform_ = false;
  }
}

std::size_t ProfileInterpolant::locate(double x) const {
  if (uniform_) {
    const auto i = static_cast<std::size_t>((x - samples_.front().x) / h_);
    return std::min(i, samples_.size() - 2);
  }
  auto it = std::upper_bound(samples_.begin(), samples_.end(), x,
                             [](double v, const ProfileSample& s) { return v < s.x; });
  const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(
      0, std::distance(samples_.begin(), it) - 1));
  return std::min(idx, samples_.size() - 2);
}

double ProfileInterpolant::r(double x) const {
  const auto& first = samples_.front();
  const auto& last = samples_.back();
  if (x <= first.x) return first.r * std::exp(kappa_left_ * (x - first.x));
  if (x >= last.x) return target_ + (last.r - target_) * std::exp(kappa_right_ * (x - last.x));
  const std::size_t i = locate(x);
  const auto& a = samples_[i];
  const auto& b = samples_[i + 1];
  const double h = b.x - a.x;
  const double s = (x - a.x) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * a.r + (s3 - 2 * s2 + s) * h * a.rprime +
         (-2 * s3 + 3 * s2) * b.r + (s3 - s2) * h * b.rprime;
}

double ProfileInterpolant::rprime(double x) const {
  const auto& first = samples_.front();
  const auto& last = samples_.back();
  if (x <= first.x) return kappa_left_ * first.r * std::exp(kappa_left_ * (x - first.x));
  if (x >= last.x)
    return kappa_right_ * (last.r - target_) * std::exp(kappa_right_ * (x - last.x));
  const std::size_t i = locate(x);
  const auto& a = samples_[i];
  const auto& b = samples_[i + 1];
  const double h = b.x - a.x;
  const double s = (x - a.x) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * a.r + (-6 * s2 + 6 * s) * b.r) / h +
         (3 * s2 - 4 * s + 1) * a.rprime + (3 * s2 - 2 * s) * b.rprime;
}

}  // namespace hsmap
