#include "cef/inference.hpp"

#include <algorithm>
#include <cmath>

#include "cef/errors.hpp"
#include "cef/infotheory.hpp"
#include "cef/rng.hpp"

namespace cef {

namespace {

// Fold into [0,1]; handles arbitrarily distant proposals and keeps the
// transition kernel symmetric.
double reflect01(double v) {
  double r = std::fmod(v, 2.0);
  if (r < 0.0) r += 2.0;
  return r <= 1.0 ? r : 2.0 - r;
}

double golden_section_max(const std::function<double(double)>& g, double a, double b,
                          double& best_x, double best_f) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = g(x1);
  double f2 = g(x2);
  for (int i = 0; i < 80 && (b - a) > 1e-12; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = g(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  const double fm = g(xm);
  if (fm > best_f) {
    best_x = xm;
    return fm;
  }
  return best_f;
}

// 1-D maximization along a coordinate: coarse scan, then golden-section
// around the best bracket.
double line_max(const std::function<double(double)>& g, double current, double f_current,
                double& out_x) {
  constexpr int kScan = 33;
  double best_x = current;
  double best_f = f_current;
  for (int i = 0; i < kScan; ++i) {
    const double v = static_cast<double>(i) / (kScan - 1);
    const double fv = g(v);
    if (fv > best_f) {
      best_f = fv;
      best_x = v;
    }
  }
  const double step = 1.0 / (kScan - 1);
  const double a = std::max(0.0, best_x - step);
  const double b = std::min(1.0, best_x + step);
  best_f = golden_section_max(g, a, b, best_x, best_f);
  out_x = best_x;
  return best_f;
}

double sq_distance_to_center(std::span<const double> x) {
  double d = 0.0;
  for (double v : x) d += (v - 0.5) * (v - 0.5);
  return d;
}

}  // namespace

void SamplerConfig::validate() const {
  if (steps <= 0 || burn_in < 0 || steps <= burn_in) {
    throw InputError("sampler: need steps > burn_in >= 0");
  }
  if (thin < 1) throw InputError("sampler: thin must be >= 1");
  if (!(proposal_sd > 0.0)) throw InputError("sampler: proposal_sd must be positive");
}

ChainResult run_chain(const LogDensityFn& logpost, int dim, const SamplerConfig& cfg) {
  cfg.validate();
  if (dim < 1) throw InputError("sampler: dimension must be >= 1");

  RandomSource rng(seed_stream(cfg.seed, kStreamChain));
  std::vector<double> x(static_cast<std::size_t>(dim), 0.5);
  std::vector<double> y(static_cast<std::size_t>(dim));
  double lp = logpost(x);

  ChainResult out;
  out.dim = dim;
  const std::int64_t expected = (cfg.steps - cfg.burn_in + cfg.thin - 1) / cfg.thin;
  out.samples.reserve(static_cast<std::size_t>(expected * dim));

  std::int64_t accepted = 0;
  for (std::int64_t step = 0; step < cfg.steps; ++step) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      y[i] = reflect01(x[i] + cfg.proposal_sd * rng.normal());
    }
    const double lpy = logpost(y);
    bool accept;
    if (std::isinf(lpy) && lpy < 0.0) {
      accept = std::isinf(lp) && lp < 0.0;  // wander only while nothing is feasible
    } else if (std::isinf(lp) && lp < 0.0) {
      accept = true;
    } else if (lpy >= lp) {
      accept = true;
    } else {
      double u = rng.uniform01();
      if (u <= 0.0) u = 0x1.0p-53;
      accept = std::log(u) < lpy - lp;
    }
    if (accept) {
      x = y;
      lp = lpy;
      ++accepted;
    }
    if (step >= cfg.burn_in && (step - cfg.burn_in) % cfg.thin == 0) {
      out.samples.insert(out.samples.end(), x.begin(), x.end());
    }
  }
  out.diag.kept = static_cast<std::int64_t>(out.samples.size()) / dim;
  out.diag.accept_rate = static_cast<double>(accepted) / static_cast<double>(cfg.steps);
  out.diag.accept_warning = out.diag.accept_rate < 0.05 || out.diag.accept_rate > 0.95;
  return out;
}

DensityCurve kde_curve(std::span<const double> values, double lo, double hi, int grid_size) {
  if (values.empty()) throw EmptyDensityError("kde: no samples");
  if (grid_size < 2) throw InputError("kde: grid size must be >= 2");
  const std::size_t m = static_cast<std::size_t>(grid_size);
  const double cell = (hi - lo) / static_cast<double>(m - 1);

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  const double sd = std::sqrt(var);

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto at_quantile = [&](double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return i + 1 < sorted.size() ? sorted[i] + frac * (sorted[i + 1] - sorted[i]) : sorted[i];
  };
  const double iqr = at_quantile(0.75) - at_quantile(0.25);

  // Silverman-style bandwidth, floored at one grid cell
  double sigma = sd;
  if (iqr > 0.0) sigma = std::min(sigma, iqr / 1.34);
  double bw = 0.9 * sigma * std::pow(static_cast<double>(values.size()), -0.2);
  bw = std::max(bw, cell);

  // linear binning, then kernel convolution on the grid
  std::vector<double> counts(m, 0.0);
  for (double v : values) {
    const double pos = std::clamp((v - lo) / cell, 0.0, static_cast<double>(m - 1));
    const auto i = std::min(static_cast<std::size_t>(pos), m - 2);
    const double frac = pos - static_cast<double>(i);
    counts[i] += 1.0 - frac;
    counts[i + 1] += frac;
  }
  const auto radius = static_cast<std::size_t>(std::ceil(6.0 * bw / cell));
  std::vector<double> kernel(radius + 1);
  for (std::size_t j = 0; j <= radius; ++j) {
    const double u = static_cast<double>(j) * cell / bw;
    kernel[j] = std::exp(-0.5 * u * u);
  }
  std::vector<double> density(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (counts[i] == 0.0) continue;
    const std::size_t j_lo = i > radius ? i - radius : 0;
    const std::size_t j_hi = std::min(i + radius, m - 1);
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      density[j] += counts[i] * kernel[j > i ? j - i : i - j];
    }
  }
  return DensityCurve(lo, hi, std::move(density));
}

MapResult map_estimate(const ModelCase& model, const FreqTensor& data, double n,
                       int starts, double tol, std::uint64_t seed) {
  if (starts < 1) throw InputError("map_estimate: need at least one start");
  if (!(tol > 0.0)) throw InputError("map_estimate: tol must be positive");
  const PosteriorEval f(model, data, n);
  const auto dim = static_cast<std::size_t>(f.dim());

  struct Candidate {
    std::vector<double> x;
    double obj;
  };
  std::vector<Candidate> results;
  results.reserve(static_cast<std::size_t>(starts));

  for (int s = 0; s < starts; ++s) {
    std::vector<double> x(dim, 0.5);
    if (s > 0) {
      RandomSource rng(seed_stream(seed, kStreamMapStart + static_cast<std::uint64_t>(s)));
      for (auto& v : x) v = rng.uniform01();
    }
    double obj = f(x);
    for (int sweep = 0; sweep < 200; ++sweep) {
      const double before = obj;
      for (std::size_t c = 0; c < dim; ++c) {
        const auto g = [&](double v) {
          const double saved = x[c];
          x[c] = v;
          const double fv = f(x);
          x[c] = saved;
          return fv;
        };
        double best_x = x[c];
        obj = line_max(g, x[c], obj, best_x);
        x[c] = best_x;
      }
      const double gain = obj - before;
      if (!(gain > tol * 1e-3) && sweep > 0) break;
      if (std::isinf(obj) && obj < 0.0) break;  // nothing feasible along any axis
    }
    results.push_back({std::move(x), obj});
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    const bool better = results[i].obj > results[best].obj + tol;
    const bool tied = std::abs(results[i].obj - results[best].obj) <= tol;
    if (better ||
        (tied && sq_distance_to_center(results[i].x) < sq_distance_to_center(results[best].x))) {
      best = i;
    }
  }

  MapResult out{make_hypothesis(model, results[best].x), results[best].obj, {}};
  out.start_objectives.reserve(results.size());
  for (const auto& r : results) out.start_objectives.push_back(r.obj);
  return out;
}

DensityCurve profile_density(const ModelCase& model, const FreqTensor& data, double n,
                             int coordinate, const Hypothesis& map_point, int grid_size) {
  if (grid_size < 64) throw InputError("profile: grid size must be >= 64");
  const PosteriorEval f(model, data, n);
  if (coordinate < 0 || coordinate >= f.dim()) {
    throw InputError("profile: coordinate out of range");
  }
  const auto base = hypothesis_coords(map_point);
  if (base.size() != static_cast<std::size_t>(f.dim())) {
    throw InputError("profile: anchor point has wrong dimension");
  }
  std::vector<double> x(base.begin(), base.end());
  const auto m = static_cast<std::size_t>(grid_size);
  std::vector<double> logv(m);
  double vmax = kNegInfinity;
  for (std::size_t i = 0; i < m; ++i) {
    x[static_cast<std::size_t>(coordinate)] =
        static_cast<double>(i) / static_cast<double>(m - 1);
    logv[i] = f(x);
    vmax = std::max(vmax, logv[i]);
  }
  if (std::isinf(vmax)) {
    throw EmptyDensityError("profile: slice has no posterior mass");
  }
  std::vector<double> density(m);
  for (std::size_t i = 0; i < m; ++i) {
    density[i] = std::isinf(logv[i]) ? 0.0 : std::exp(logv[i] - vmax);
  }
  return DensityCurve(0.0, 1.0, std::move(density));
}

DensityCurve sample_marginal(const ModelCase& model, const FreqTensor& data, double n,
                             int coordinate, const SamplerConfig& cfg, int grid_size) {
  const PosteriorEval f(model, data, n);
  if (coordinate < 0 || coordinate >= f.dim()) {
    throw InputError("sample_marginal: coordinate out of range");
  }
  const ChainResult chain =
      run_chain([&f](std::span<const double> x) { return f(x); }, f.dim(), cfg);
  std::vector<double> values(chain.n_samples());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = chain.row(i)[static_cast<std::size_t>(coordinate)];
  }
  return kde_curve(values, 0.0, 1.0, grid_size);
}

DensityCurve sample_functional_curve(const ModelCase& model, const FreqTensor& data, double n,
                                     const std::function<double(std::span<const double>)>& fn,
                                     double lo, double hi, const SamplerConfig& cfg,
                                     int grid_size) {
  const PosteriorEval f(model, data, n);
  const ChainResult chain =
      run_chain([&f](std::span<const double> x) { return f(x); }, f.dim(), cfg);
  std::vector<double> values(chain.n_samples());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = fn(chain.row(i));
  }
  return kde_curve(values, lo, hi, grid_size);
}

DensityCurve grid_marginal(const ModelCase& model, const FreqTensor& data, double n,
                           int coordinate, int resolution) {
  if (model.tag() != ModelTag::MarginalLow) {
    throw InputError("grid_marginal is defined for the marginal model only");
  }
  if (resolution < 3) throw InputError("grid_marginal: resolution must be >= 3");
  if (resolution > 401) {
    throw InputError("grid_marginal: resolution above 401 rejected (memory guard)");
  }
  if (coordinate < 0 || coordinate >= 3) {
    throw InputError("grid_marginal: coordinate out of range");
  }
  const PosteriorEval f(model, data, n);
  const auto res = static_cast<std::size_t>(resolution);
  const double h = 1.0 / static_cast<double>(res - 1);

  std::vector<double> weights(res, h);
  weights.front() = weights.back() = 0.5 * h;

  const std::size_t c0 = static_cast<std::size_t>(coordinate);
  const std::size_t c1 = c0 == 0 ? 1 : 0;
  const std::size_t c2 = c0 == 2 ? 1 : 2;

  std::vector<double> out(res, 0.0);
  std::array<double, 3> x{};
  for (std::size_t i = 0; i < res; ++i) {
    x[c0] = static_cast<double>(i) * h;
    double acc = 0.0;
    for (std::size_t j = 0; j < res; ++j) {
      x[c1] = static_cast<double>(j) * h;
      double inner = 0.0;
      for (std::size_t k = 0; k < res; ++k) {
        x[c2] = static_cast<double>(k) * h;
        const double lp = f(x);
        if (!std::isinf(lp)) inner += weights[k] * std::exp(lp);
      }
      acc += weights[j] * inner;
    }
    out[i] = acc;
  }
  return DensityCurve(0.0, 1.0, std::move(out));
}

}  // namespace cef
