#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cef {

// A normalized density on a uniform grid.  Construction renormalizes by the
// trapezoid rule and rejects curves with no finite mass.
class DensityCurve {
 public:
  DensityCurve(double lo, double hi, std::vector<double> density);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t size() const noexcept { return density_.size(); }
  double step() const noexcept { return step_; }
  double x(std::size_t i) const noexcept { return lo_ + step_ * static_cast<double>(i); }
  std::span<const double> density() const noexcept { return density_; }

  double trapezoid_mass() const;  // ~1 after construction
  double mode() const;            // grid point of the density maximum
  double mean() const;
  double sd() const;
  double cdf(double v) const;      // P(X <= v), trapezoid + linear interpolation
  double quantile(double p) const;
  double value_at(double v) const;  // linear interpolation, 0 outside support

  // Integral of |f - g| over the common support, on a fixed fine comparison
  // grid.  Supports must agree.
  double l1_distance(const DensityCurve& other) const;

 private:
  double lo_;
  double hi_;
  double step_;
  std::vector<double> density_;
};

struct CurveStats {
  double mode = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  double lo95 = 0.0;
  double hi95 = 0.0;
};

CurveStats summarize(const DensityCurve& curve);

}  // namespace cef
