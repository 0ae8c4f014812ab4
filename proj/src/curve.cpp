#include "cef/curve.hpp"

#include <algorithm>
#include <cmath>

#include "cef/errors.hpp"

namespace cef {

namespace {

double trapezoid(std::span<const double> f, double step) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * step;
}

}  // namespace

DensityCurve::DensityCurve(double lo, double hi, std::vector<double> density)
    : lo_(lo), hi_(hi), density_(std::move(density)) {
  if (!(hi_ > lo_)) throw InputError("density support must have hi > lo");
  if (density_.size() < 2) throw InputError("density needs at least 2 grid points");
  step_ = (hi_ - lo_) / static_cast<double>(density_.size() - 1);
  double mass = 0.0;
  for (double d : density_) {
    if (!std::isfinite(d) || d < 0.0) {
      throw EmptyDensityError("density has negative or non-finite values");
    }
  }
  mass = trapezoid(density_, step_);
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw EmptyDensityError("density has no mass on its support");
  }
  // keep already-normalized curves bit-stable across write/read cycles
  if (std::abs(mass - 1.0) > 1e-12) {
    for (double& d : density_) d /= mass;
  }
}

double DensityCurve::trapezoid_mass() const { return trapezoid(density_, step_); }

double DensityCurve::mode() const {
  const auto it = std::max_element(density_.begin(), density_.end());
  return x(static_cast<std::size_t>(it - density_.begin()));
}

double DensityCurve::mean() const {
  std::vector<double> xf(density_.size());
  for (std::size_t i = 0; i < density_.size(); ++i) xf[i] = x(i) * density_[i];
  return trapezoid(xf, step_);
}

double DensityCurve::sd() const {
  const double m = mean();
  std::vector<double> vf(density_.size());
  for (std::size_t i = 0; i < density_.size(); ++i) {
    const double d = x(i) - m;
    vf[i] = d * d * density_[i];
  }
  const double var = trapezoid(vf, step_);
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

double DensityCurve::cdf(double v) const {
  if (v <= lo_) return 0.0;
  if (v >= hi_) return 1.0;
  const double pos = (v - lo_) / step_;
  const auto full = static_cast<std::size_t>(pos);
  double c = 0.0;
  for (std::size_t i = 0; i + 1 <= full && i + 1 < density_.size(); ++i) {
    c += 0.5 * (density_[i] + density_[i + 1]) * step_;
  }
  const double frac = pos - static_cast<double>(full);
  if (full + 1 < density_.size() && frac > 0.0) {
    const double fv = density_[full] + frac * (density_[full + 1] - density_[full]);
    c += 0.5 * (density_[full] + fv) * frac * step_;
  }
  return std::clamp(c, 0.0, 1.0);
}

double DensityCurve::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("quantile level must be in [0, 1]");
  double c = 0.0;
  for (std::size_t i = 0; i + 1 < density_.size(); ++i) {
    const double seg = 0.5 * (density_[i] + density_[i + 1]) * step_;
    if (c + seg >= p) {
      const double frac = seg > 0.0 ? (p - c) / seg : 0.0;
      return x(i) + frac * step_;
    }
    c += seg;
  }
  return hi_;
}

double DensityCurve::value_at(double v) const {
  if (v < lo_ || v > hi_) return 0.0;
  const double pos = (v - lo_) / step_;
  const auto i = std::min(static_cast<std::size_t>(pos), density_.size() - 2);
  const double frac = pos - static_cast<double>(i);
  return density_[i] + frac * (density_[i + 1] - density_[i]);
}

double DensityCurve::l1_distance(const DensityCurve& other) const {
  if (std::abs(lo_ - other.lo_) > 1e-12 || std::abs(hi_ - other.hi_) > 1e-12) {
    throw InputError("l1_distance: supports differ");
  }
  constexpr std::size_t kComparisonPoints = 2049;
  const double h = (hi_ - lo_) / static_cast<double>(kComparisonPoints - 1);
  std::vector<double> diff(kComparisonPoints);
  for (std::size_t i = 0; i < kComparisonPoints; ++i) {
    const double v = lo_ + h * static_cast<double>(i);
    diff[i] = std::abs(value_at(v) - other.value_at(v));
  }
  return trapezoid(diff, h);
}

CurveStats summarize(const DensityCurve& curve) {
  CurveStats s;
  s.mode = curve.mode();
  s.mean = curve.mean();
  s.sd = curve.sd();
  s.lo95 = curve.quantile(0.025);
  s.hi95 = curve.quantile(0.975);
  return s;
}

}  // namespace cef
