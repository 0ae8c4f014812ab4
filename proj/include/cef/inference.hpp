#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cef/curve.hpp"
#include "cef/models.hpp"

namespace cef {

struct SamplerConfig {
  std::int64_t steps = 200000;
  std::int64_t burn_in = 20000;
  std::int64_t thin = 10;
  double proposal_sd = 0.05;
  std::uint64_t seed = 0;

  void validate() const;  // throws InputError
};

struct SamplerDiagnostics {
  double accept_rate = 0.0;
  bool accept_warning = false;  // accept rate outside [0.05, 0.95]
  std::int64_t kept = 0;
};

// Kept samples, row-major with stride dim.
struct ChainResult {
  std::vector<double> samples;
  int dim = 0;
  SamplerDiagnostics diag;

  std::size_t n_samples() const { return dim ? samples.size() / dim : 0; }
  std::span<const double> row(std::size_t i) const {
    return {samples.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

using LogDensityFn = std::function<double(std::span<const double>)>;

// Random-walk Metropolis on [0,1]^dim: componentwise Gaussian proposals of
// sd = proposal_sd, reflected at the cube boundary, accepted by log ratio.
// Starts at the cube center.  Deterministic given cfg.seed.
ChainResult run_chain(const LogDensityFn& logpost, int dim, const SamplerConfig& cfg);

// Gaussian kernel density of `values` on an M-point grid over [lo, hi];
// Silverman-style bandwidth floored at one grid cell, curve renormalized by
// the trapezoid rule (boundary truncation folds back into the normalization).
DensityCurve kde_curve(std::span<const double> values, double lo, double hi, int grid_size);

inline constexpr int kDefaultGridSize = 512;

struct MapResult {
  Hypothesis point;
  double objective = 0.0;
  std::vector<double> start_objectives;  // best objective per start
};

// Multi-start coordinate ascent with bracketed golden-section refinement.
// Start 0 is the cube center; the rest are uniform draws from seed streams of
// `seed`.  Ties within tol resolve to the point closest to the cube center.
MapResult map_estimate(const ModelCase& model, const FreqTensor& data, double n,
                       int starts = 8, double tol = 1e-9, std::uint64_t seed = 0);

// exp(log posterior) along one coordinate, all others frozen at map_point,
// normalized on a uniform grid over [0,1].
DensityCurve profile_density(const ModelCase& model, const FreqTensor& data, double n,
                             int coordinate, const Hypothesis& map_point,
                             int grid_size = kDefaultGridSize);

// Posterior marginal of one hypothesis coordinate via MCMC + kernel smoothing.
DensityCurve sample_marginal(const ModelCase& model, const FreqTensor& data, double n,
                             int coordinate, const SamplerConfig& cfg,
                             int grid_size = kDefaultGridSize);

// Posterior distribution of an arbitrary scalar functional of the hypothesis,
// from the same chain a coordinate marginal would use.
DensityCurve sample_functional_curve(const ModelCase& model, const FreqTensor& data, double n,
                                     const std::function<double(std::span<const double>)>& fn,
                                     double lo, double hi, const SamplerConfig& cfg,
                                     int grid_size = kDefaultGridSize);

// Deterministic quadrature oracle for the 3-parameter MarginalLow case:
// tensor-product trapezoid marginalization of exp(log posterior) over the two
// non-target coordinates.  resolution is capped at 401 (memory/time guard).
DensityCurve grid_marginal(const ModelCase& model, const FreqTensor& data, double n,
                           int coordinate, int resolution);

struct PosteriorSummary {
  Hypothesis map_point;
  double map_objective = 0.0;
  std::vector<std::string> coordinates;
  std::vector<CurveStats> stats;  // one per coordinate, from sampled marginals
};

}  // namespace cef
