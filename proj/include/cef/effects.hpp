#pragma once

#include <optional>
#include <span>

#include "cef/curve.hpp"
#include "cef/tables.hpp"

namespace cef {

// Density of the treatment effect tau = q_Z|T - q_Z|~T on [-1, 1].
using TreatmentEffectCurve = DensityCurve;

// ATE as the covariance-form moment Cov[t,z] = sum q_{t,z} t z under the
// {-1,+1} coding.  Expects a 2-axis (t,z) tensor.
double ate_cov(const FreqTensor& f_tz);

// ATE as the difference of conditional outcome expectations,
// E[z|T] - E[z|~T] = 2 (q_Z|T - q_Z|~T), optionally within a conditioning
// slice (e.g. one confounder level of a 3-axis tensor).  The two ATE
// functionals differ in general; both are part of the public surface.
double ate_diff(const FreqTensor& f, std::optional<AxisLevel> conditioning = {});

// Density of tau = X - Y on [-1,1] for independent X ~ treated, Y ~ untreated,
// by discrete convolution of the trapezoid-weighted curves on a 2M-1 grid.
// Both inputs must share grid size and support [0,1].
TreatmentEffectCurve pte_convolution(const DensityCurve& treated,
                                     const DensityCurve& untreated);

// Cross-check variant: tau from paired sampler draws (no independence
// assumption), smoothed like any other marginal.
TreatmentEffectCurve pte_from_paired_samples(std::span<const double> treated,
                                             std::span<const double> untreated, int grid_size);

}  // namespace cef
