#include "cef/effects.hpp"

#include <cmath>
#include <vector>

#include "cef/errors.hpp"
#include "cef/inference.hpp"

namespace cef {

double ate_cov(const FreqTensor& f_tz) {
  if (f_tz.n_axes() != 2 || f_tz.axes()[0].id != Axis::T || f_tz.axes()[1].id != Axis::Z) {
    throw InputError("ate_cov expects a (t,z) tensor");
  }
  double s = 0.0;
  for (std::size_t cell = 0; cell < 4; ++cell) {
    const int t = level_code(f_tz.level_of(cell, Axis::T));
    const int z = level_code(f_tz.level_of(cell, Axis::Z));
    s += f_tz[cell] * t * z;
  }
  return s;
}

double ate_diff(const FreqTensor& f, std::optional<AxisLevel> conditioning) {
  if (!f.has_axis(Axis::T) || !f.has_axis(Axis::Z)) {
    throw InputError("ate_diff needs tensors with t and z axes");
  }
  std::vector<AxisLevel> given_t = {{Axis::T, kPositive}};
  std::vector<AxisLevel> given_nt = {{Axis::T, kNegative}};
  if (conditioning) {
    if (conditioning->axis == Axis::T || conditioning->axis == Axis::Z) {
      throw InputError("ate_diff: conditioning must be on a non-(t,z) axis");
    }
    given_t.push_back(*conditioning);
    given_nt.push_back(*conditioning);
  }
  const double rate_t = conditional(f, {Axis::Z, kPositive}, given_t);
  const double rate_nt = conditional(f, {Axis::Z, kPositive}, given_nt);
  // E[z|T] - E[z|~T] under the {-1,+1} coding
  return 2.0 * (rate_t - rate_nt);
}

TreatmentEffectCurve pte_convolution(const DensityCurve& treated,
                                     const DensityCurve& untreated) {
  if (treated.size() != untreated.size()) {
    throw InputError("pte_convolution: curves must share a grid size");
  }
  const auto support_ok = [](const DensityCurve& c) {
    return std::abs(c.lo()) < 1e-12 && std::abs(c.hi() - 1.0) < 1e-12;
  };
  if (!support_ok(treated) || !support_ok(untreated)) {
    throw InputError("pte_convolution: curves must live on [0, 1]");
  }
  const std::size_t m = treated.size();
  const double h = treated.step();

  // mass per grid point of each trapezoid-weighted curve
  std::vector<double> wx(m), wy(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double w = (i == 0 || i + 1 == m) ? 0.5 * h : h;
    wx[i] = w * treated.density()[i];
    wy[i] = w * untreated.density()[i];
  }

  // tau grid: 2m-1 points on [-1, 1]; index k holds shift s = k - (m-1),
  // collecting mass from pairs with i - j = s
  const std::size_t out_n = 2 * m - 1;
  std::vector<double> mass(out_n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (wx[i] == 0.0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      mass[i - j + (m - 1)] += wx[i] * wy[j];
    }
  }

  // density = mass / grid weight, so the curve integrates to the joint mass
  std::vector<double> density(out_n);
  for (std::size_t k = 0; k < out_n; ++k) {
    const double w = (k == 0 || k + 1 == out_n) ? 0.5 * h : h;
    density[k] = mass[k] / w;
  }
  return DensityCurve(-1.0, 1.0, std::move(density));
}

TreatmentEffectCurve pte_from_paired_samples(std::span<const double> treated,
                                             std::span<const double> untreated, int grid_size) {
  if (treated.size() != untreated.size()) {
    throw InputError("pte_from_paired_samples: sample lengths differ");
  }
  std::vector<double> tau(treated.size());
  for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = treated[i] - untreated[i];
  return kde_curve(tau, -1.0, 1.0, 2 * grid_size - 1);
}

}  // namespace cef
