#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cef/curve.hpp"
#include "cef/inference.hpp"
#include "cef/tables.hpp"

namespace cef {

struct SweepGrid {
  std::vector<double> alphas;  // strictly increasing, within [-1, 1]
  std::vector<double> deltas;

  void validate() const;  // throws InputError
};

// Per-cell curves, kept only when requested.
struct SweepCellCurves {
  DensityCurve qzt_profile;
  DensityCurve qztbar_profile;
  DensityCurve qzt_marginal;
  DensityCurve qztbar_marginal;
  DensityCurve pte_profile;
  DensityCurve pte_marginal;
};

// Summary of one (alpha, delta) cell.  The treatment/no-treatment recovery
// curves are the confounder-conditional rates q_Z|A,T and q_Z|A,~T; the PTE is
// their convolution.  Mode columns locate the maximum-posterior effect
// (profile slices through the joint MAP); sd and tail-mass columns measure
// posterior dispersion (sampled marginals).  The marginal-curve modes are
// reported separately.
struct SweepCellResult {
  double alpha = 0.0;
  double delta = 0.0;
  double pte_mode = 0.0;       // profile-based
  double pte_sd = 0.0;         // marginal-based
  double p_neg = 0.0;          // P(tau < 0), marginal-based
  double qzt_mode = 0.0;       // profile-based
  double qzt_sd = 0.0;         // marginal-based
  double qztbar_mode = 0.0;    // profile-based
  double qztbar_sd = 0.0;      // marginal-based
  double accept_rate = 0.0;
  double pte_mode_marginal = 0.0;
  std::string error;           // empty on success
  std::optional<SweepCellCurves> curves;

  bool ok() const noexcept { return error.empty(); }
};

struct SweepOptions {
  SamplerConfig sampler;       // seed field is the master seed for the sweep
  int grid_size = kDefaultGridSize;
  int map_starts = 8;
  bool keep_curves = false;
};

// Runs the covariance-constrained CEF posterior over every (alpha, delta)
// cell.  Each cell derives its own seed from the master by cell index, so the
// whole sweep reproduces from one seed and cells may run in any order.
// Per-cell failures are captured in the result rather than aborting the sweep.
std::vector<SweepCellResult> run_sweep(const FreqTensor& data_tz, double n,
                                       const SweepGrid& grid, const SweepOptions& opts);

}  // namespace cef
