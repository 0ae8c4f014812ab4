#include "cef/sensitivity.hpp"

#include <cmath>

#include "cef/effects.hpp"
#include "cef/errors.hpp"
#include "cef/models.hpp"
#include "cef/rng.hpp"

namespace cef {

namespace {

void check_grid_axis(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw InputError(std::string("sweep grid: empty ") + name);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= -1.0 && v[i] <= 1.0)) {
      throw InputError(std::string("sweep grid: ") + name + " outside [-1, 1]");
    }
    if (i > 0 && !(v[i] > v[i - 1])) {
      throw InputError(std::string("sweep grid: ") + name + " not strictly increasing");
    }
  }
}

// q_Z|A,T and q_Z|A,~T are hypothesis coordinates 3 and 4
constexpr int kCoordQzt = 3;
constexpr int kCoordQztbar = 4;

}  // namespace

void SweepGrid::validate() const {
  check_grid_axis(alphas, "alphas");
  check_grid_axis(deltas, "deltas");
}

std::vector<SweepCellResult> run_sweep(const FreqTensor& data_tz, double n,
                                       const SweepGrid& grid, const SweepOptions& opts) {
  grid.validate();
  opts.sampler.validate();
  if (data_tz.n_axes() != 2) {
    throw InputError("run_sweep expects 2-axis (t,z) data");
  }

  std::vector<SweepCellResult> results;
  results.reserve(grid.alphas.size() * grid.deltas.size());

  std::uint64_t cell_index = 0;
  for (double alpha : grid.alphas) {
    for (double delta : grid.deltas) {
      SweepCellResult r;
      r.alpha = alpha;
      r.delta = delta;
      const std::uint64_t cell_seed =
          seed_stream(opts.sampler.seed, kStreamSweepCell + cell_index);
      ++cell_index;
      try {
        const ModelCase model = ModelCase::sensitivity(alpha, delta);
        const PosteriorEval eval(model, data_tz, n);

        // maximum-posterior location and the slices through it
        const MapResult map =
            map_estimate(model, data_tz, n, opts.map_starts, 1e-9, cell_seed);
        DensityCurve qzt_prof =
            profile_density(model, data_tz, n, kCoordQzt, map.point, opts.grid_size);
        DensityCurve qztbar_prof =
            profile_density(model, data_tz, n, kCoordQztbar, map.point, opts.grid_size);
        DensityCurve pte_prof = pte_convolution(qzt_prof, qztbar_prof);

        // posterior-mass view from one chain per cell
        SamplerConfig cfg = opts.sampler;
        cfg.seed = cell_seed;
        const ChainResult chain =
            run_chain([&eval](std::span<const double> x) { return eval(x); }, eval.dim(), cfg);
        std::vector<double> v_qzt(chain.n_samples());
        std::vector<double> v_qztbar(chain.n_samples());
        for (std::size_t i = 0; i < chain.n_samples(); ++i) {
          v_qzt[i] = chain.row(i)[kCoordQzt];
          v_qztbar[i] = chain.row(i)[kCoordQztbar];
        }
        DensityCurve qzt_marg = kde_curve(v_qzt, 0.0, 1.0, opts.grid_size);
        DensityCurve qztbar_marg = kde_curve(v_qztbar, 0.0, 1.0, opts.grid_size);
        DensityCurve pte_marg = pte_convolution(qzt_marg, qztbar_marg);

        r.pte_mode = pte_prof.mode();
        r.pte_sd = pte_marg.sd();
        r.p_neg = pte_marg.cdf(0.0);
        r.qzt_mode = qzt_prof.mode();
        r.qzt_sd = qzt_marg.sd();
        r.qztbar_mode = qztbar_prof.mode();
        r.qztbar_sd = qztbar_marg.sd();
        r.accept_rate = chain.diag.accept_rate;
        r.pte_mode_marginal = pte_marg.mode();
        if (opts.keep_curves) {
          r.curves = SweepCellCurves{std::move(qzt_prof),   std::move(qztbar_prof),
                                     std::move(qzt_marg),   std::move(qztbar_marg),
                                     std::move(pte_prof),   std::move(pte_marg)};
        }
      } catch (const std::exception& e) {
        r.error = e.what();
      }
      results.push_back(std::move(r));
    }
  }
  return results;
}

}  // namespace cef
