// cef: Bayesian treatment-effect inference on binary contingency tables with
// entropy-favoring and constrained entropy-favoring priors.
//
// Subcommands: fit, pte, maxent, sweep.  Exit codes: 0 success, 1 numerical
// failure, 2 usage or input error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cef/effects.hpp"
#include "cef/errors.hpp"
#include "cef/inference.hpp"
#include "cef/io.hpp"
#include "cef/maxent.hpp"
#include "cef/models.hpp"
#include "cef/rng.hpp"
#include "cef/sensitivity.hpp"
#include "cef/tables.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string model = "marginal";
  std::string data_path;
  std::string qbar_path;
  std::vector<double> cov;  // alpha delta
  std::uint64_t n_override = 0;
  int grid = cef::kDefaultGridSize;
  std::int64_t steps = 200000;
  std::int64_t burn = 20000;
  std::int64_t thin = 10;
  double proposal_sd = 0.05;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::vector<std::string> coords;
  int starts = 8;
  std::vector<double> alphas;
  std::vector<double> deltas;
  bool curves = false;
};

ordered_json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cef::InputError("cannot read config file: " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw cef::InputError(std::string("invalid config JSON: ") + e.what());
  }
  return doc;
}

// Fills unset command-line options from the config document; flags win.
void apply_config(const ordered_json& doc, CLI::App* cmd, RunConfig& cfg) {
  const auto unset = [&](const char* flag) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    return opt != nullptr && opt->count() == 0;
  };
  if (doc.contains("model") && unset("--model")) cfg.model = doc["model"];
  if (doc.contains("data") && unset("--data")) cfg.data_path = doc["data"];
  if (doc.contains("qbar") && unset("--qbar")) cfg.qbar_path = doc["qbar"];
  if (doc.contains("cov") && unset("--cov")) cfg.cov = doc["cov"].get<std::vector<double>>();
  if (doc.contains("n") && unset("--n")) cfg.n_override = doc["n"];
  if (doc.contains("grid") && unset("--grid")) cfg.grid = doc["grid"];
  if (doc.contains("steps") && unset("--steps")) cfg.steps = doc["steps"];
  if (doc.contains("burn") && unset("--burn")) cfg.burn = doc["burn"];
  if (doc.contains("thin") && unset("--thin")) cfg.thin = doc["thin"];
  if (doc.contains("proposal_sd") && unset("--proposal-sd")) cfg.proposal_sd = doc["proposal_sd"];
  if (doc.contains("seed") && unset("--seed")) cfg.seed = doc["seed"];
  if (doc.contains("out") && unset("--out")) cfg.out_dir = doc["out"];
  if (doc.contains("coords") && unset("--coords"))
    cfg.coords = doc["coords"].get<std::vector<std::string>>();
  if (doc.contains("starts") && unset("--starts")) cfg.starts = doc["starts"];
  if (doc.contains("alphas") && unset("--alphas"))
    cfg.alphas = doc["alphas"].get<std::vector<double>>();
  if (doc.contains("deltas") && unset("--deltas"))
    cfg.deltas = doc["deltas"].get<std::vector<double>>();
  if (doc.contains("curves") && unset("--curves")) cfg.curves = doc["curves"];
}

cef::SamplerConfig sampler_config(const RunConfig& cfg) {
  cef::SamplerConfig s;
  s.steps = cfg.steps;
  s.burn_in = cfg.burn;
  s.thin = cfg.thin;
  s.proposal_sd = cfg.proposal_sd;
  s.seed = cfg.seed;
  s.validate();
  return s;
}

cef::ModelCase build_model(const RunConfig& cfg) {
  if (cfg.model == "joint") return cef::ModelCase::joint_full();
  if (cfg.model == "marginal") return cef::ModelCase::marginal_low();
  if (cfg.model == "latent") return cef::ModelCase::latent_low();
  if (cfg.model == "partial") {
    if (cfg.qbar_path.empty()) {
      throw cef::InputError("--qbar PATH is required for the partial model");
    }
    const cef::FreqTensor qbar = cef::normalize(cef::read_count_table(cfg.qbar_path));
    return cef::ModelCase::partial_info(qbar);
  }
  if (cfg.model == "sensitivity") {
    if (cfg.cov.size() != 2) {
      throw cef::InputError("--cov ALPHA DELTA is required for the sensitivity model");
    }
    return cef::ModelCase::sensitivity(cfg.cov[0], cfg.cov[1]);
  }
  throw cef::InputError("unknown model '" + cfg.model + "'");
}

struct LoadedData {
  cef::FreqTensor freqs;
  double n;
};

LoadedData load_data(const RunConfig& cfg) {
  if (cfg.data_path.empty()) throw cef::InputError("--data PATH is required");
  const cef::CountTable table = cef::read_count_table(cfg.data_path);
  const double n =
      cfg.n_override > 0 ? static_cast<double>(cfg.n_override) : static_cast<double>(table.total());
  return {cef::normalize(table), n};
}

ordered_json stats_json(const cef::CurveStats& s) {
  return ordered_json{{"mode", s.mode}, {"mean", s.mean}, {"sd", s.sd},
                      {"lo95", s.lo95}, {"hi95", s.hi95}};
}

void write_json(const fs::path& path, const ordered_json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cef::InputError("cannot write file: " + path.string());
  out << doc.dump(2) << "\n";
}

std::vector<int> resolve_coords(const cef::ModelCase& model, const std::vector<std::string>& req) {
  const auto& names = model.coordinate_names();
  std::vector<int> out;
  if (req.empty()) {
    for (std::size_t i = 0; i < names.size(); ++i) out.push_back(static_cast<int>(i));
    return out;
  }
  for (const auto& r : req) {
    bool found = false;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == r) {
        out.push_back(static_cast<int>(i));
        found = true;
        break;
      }
    }
    if (!found) throw cef::InputError("unknown coordinate '" + r + "' for this model");
  }
  return out;
}

// One chain per run; every marginal curve is a smoothed column of it.
struct FitArtifacts {
  cef::MapResult map;
  cef::ChainResult chain;
  std::vector<cef::DensityCurve> marginals;  // one per hypothesis coordinate
};

FitArtifacts run_fit(const cef::ModelCase& model, const LoadedData& data, const RunConfig& cfg) {
  FitArtifacts a{
      cef::map_estimate(model, data.freqs, data.n, cfg.starts, 1e-9, cfg.seed), {}, {}};
  const cef::PosteriorEval eval(model, data.freqs, data.n);
  a.chain = cef::run_chain([&eval](std::span<const double> x) { return eval(x); }, eval.dim(),
                           sampler_config(cfg));
  for (int c = 0; c < eval.dim(); ++c) {
    std::vector<double> values(a.chain.n_samples());
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = a.chain.row(i)[static_cast<std::size_t>(c)];
    }
    a.marginals.push_back(cef::kde_curve(values, 0.0, 1.0, cfg.grid));
  }
  return a;
}

int cmd_fit(const RunConfig& cfg) {
  const cef::ModelCase model = build_model(cfg);
  const LoadedData data = load_data(cfg);
  fs::create_directories(cfg.out_dir);
  const auto coords = resolve_coords(model, cfg.coords);
  const auto& names = model.coordinate_names();

  const FitArtifacts a = run_fit(model, data, cfg);

  ordered_json map_doc;
  map_doc["model"] = cfg.model;
  map_doc["objective"] = a.map.objective;
  ordered_json point;
  const auto map_coords = cef::hypothesis_coords(a.map.point);
  for (std::size_t i = 0; i < map_coords.size(); ++i) point[names[i]] = map_coords[i];
  map_doc["coordinates"] = point;
  map_doc["start_objectives"] = a.map.start_objectives;
  write_json(fs::path(cfg.out_dir) / "map.json", map_doc);

  cef::PosteriorSummary ps;
  ps.map_point = a.map.point;
  ps.map_objective = a.map.objective;

  ordered_json per_coord;
  for (int c : coords) {
    const auto& name = names[static_cast<std::size_t>(c)];
    const cef::DensityCurve prof =
        cef::profile_density(model, data.freqs, data.n, c, a.map.point, cfg.grid);
    cef::write_curve_csv(fs::path(cfg.out_dir) / ("profile_" + name + ".csv"), prof);
    const auto& marg = a.marginals[static_cast<std::size_t>(c)];
    cef::write_curve_csv(fs::path(cfg.out_dir) / ("marginal_" + name + ".csv"), marg);
    ps.coordinates.push_back(name);
    ps.stats.push_back(cef::summarize(marg));
    per_coord[name] = stats_json(ps.stats.back());
    per_coord[name]["profile_mode"] = prof.mode();
  }

  ordered_json summary;
  summary["model"] = cfg.model;
  summary["n"] = data.n;
  summary["seed"] = cfg.seed;
  summary["map_objective"] = ps.map_objective;
  summary["accept_rate"] = a.chain.diag.accept_rate;
  summary["accept_warning"] = a.chain.diag.accept_warning;
  summary["coordinates"] = per_coord;
  write_json(fs::path(cfg.out_dir) / "summary.json", summary);
  return 0;
}

ordered_json pte_json(const cef::DensityCurve& pte) {
  return ordered_json{
      {"mode", pte.mode()}, {"sd", pte.sd()}, {"p_neg", pte.cdf(0.0)}};
}

int cmd_pte(const RunConfig& cfg) {
  const cef::ModelCase model = build_model(cfg);
  const LoadedData data = load_data(cfg);
  fs::create_directories(cfg.out_dir);
  const FitArtifacts a = run_fit(model, data, cfg);

  ordered_json summary;
  if (model.hypothesis_dim() == 3) {
    const cef::DensityCurve pte = cef::pte_convolution(a.marginals[1], a.marginals[2]);
    cef::write_curve_csv(fs::path(cfg.out_dir) / "pte.csv", pte);
    summary["pte"] = pte_json(pte);
  } else {
    // margin rates q_Z|T and q_Z|~T as per-sample functionals of the joint
    const auto margin_rate = [](std::span<const double> x, bool treated) {
      cef::ParamVector7 theta;
      std::copy(x.begin(), x.end(), theta.v.begin());
      const auto q = cef::joint_cells(theta);
      const auto m = cef::margin_over_a(q);
      return treated ? m[0] / (m[0] + m[1]) : m[2] / (m[2] + m[3]);
    };
    std::vector<double> mzt(a.chain.n_samples()), mztb(a.chain.n_samples());
    for (std::size_t i = 0; i < a.chain.n_samples(); ++i) {
      mzt[i] = margin_rate(a.chain.row(i), true);
      mztb[i] = margin_rate(a.chain.row(i), false);
    }
    const cef::DensityCurve c_mzt = cef::kde_curve(mzt, 0.0, 1.0, cfg.grid);
    const cef::DensityCurve c_mztb = cef::kde_curve(mztb, 0.0, 1.0, cfg.grid);
    const cef::DensityCurve pte = cef::pte_convolution(c_mzt, c_mztb);
    cef::write_curve_csv(fs::path(cfg.out_dir) / "pte.csv", pte);
    summary["pte"] = pte_json(pte);

    const cef::DensityCurve pte_a = cef::pte_convolution(a.marginals[3], a.marginals[4]);
    const cef::DensityCurve pte_na = cef::pte_convolution(a.marginals[5], a.marginals[6]);
    cef::write_curve_csv(fs::path(cfg.out_dir) / "pte_A.csv", pte_a);
    cef::write_curve_csv(fs::path(cfg.out_dir) / "pte_nA.csv", pte_na);
    summary["pte_A"] = pte_json(pte_a);
    summary["pte_nA"] = pte_json(pte_na);
  }
  write_json(fs::path(cfg.out_dir) / "pte_summary.json", summary);
  return 0;
}

int cmd_maxent(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  std::optional<cef::MaxEntSolution> sol;
  if (!cfg.qbar_path.empty()) {
    const cef::FreqTensor qbar = cef::normalize(cef::read_count_table(cfg.qbar_path));
    sol = cef::solve_marginal_constraint(qbar);
  } else if (cfg.cov.size() == 2) {
    sol = cef::solve_covariance_constraints(cfg.cov[0], cfg.cov[1]);
  } else {
    throw cef::InputError("maxent needs --marginal PATH or --cov ALPHA DELTA");
  }
  ordered_json doc;
  doc["cells"] = std::vector<double>(sol->qhat.freqs().begin(), sol->qhat.freqs().end());
  doc["multipliers"] = sol->multipliers;
  doc["entropy"] = sol->achieved_entropy;
  doc["residual"] = sol->residual;
  write_json(fs::path(cfg.out_dir) / "qhat.json", doc);
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  const LoadedData data = load_data(cfg);
  if (cfg.alphas.empty() || cfg.deltas.empty()) {
    throw cef::InputError("sweep needs non-empty --alphas and --deltas");
  }
  fs::create_directories(cfg.out_dir);
  cef::SweepGrid grid{cfg.alphas, cfg.deltas};
  cef::SweepOptions opts;
  opts.sampler = sampler_config(cfg);
  opts.grid_size = cfg.grid;
  opts.map_starts = cfg.starts;
  opts.keep_curves = cfg.curves;

  const auto rows = cef::run_sweep(data.freqs, data.n, grid, opts);
  cef::write_sweep_csv(fs::path(cfg.out_dir) / "sweep.csv", rows);

  if (cfg.curves) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < grid.alphas.size(); ++i) {
      for (std::size_t j = 0; j < grid.deltas.size(); ++j, ++idx) {
        const auto& r = rows[idx];
        if (!r.curves) continue;
        const std::string stem =
            "cell_" + std::to_string(i) + "_" + std::to_string(j) + "_";
        const fs::path dir(cfg.out_dir);
        cef::write_curve_csv(dir / (stem + "qzt_profile.csv"), r.curves->qzt_profile);
        cef::write_curve_csv(dir / (stem + "qztbar_profile.csv"), r.curves->qztbar_profile);
        cef::write_curve_csv(dir / (stem + "qzt_marginal.csv"), r.curves->qzt_marginal);
        cef::write_curve_csv(dir / (stem + "qztbar_marginal.csv"), r.curves->qztbar_marginal);
        cef::write_curve_csv(dir / (stem + "pte_profile.csv"), r.curves->pte_profile);
        cef::write_curve_csv(dir / (stem + "pte_marginal.csv"), r.curves->pte_marginal);
      }
    }
  }
  for (const auto& r : rows) {
    if (r.ok()) return 0;
  }
  std::cerr << "cef sweep: every cell failed\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian treatment-effect inference under confounding"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;

  const auto add_common = [&](CLI::App* cmd, bool with_model, bool with_sampler) {
    cmd->add_option("--config", config_path, "JSON config file; flags override it");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    if (with_model) {
      cmd->add_option("--model", cfg.model,
                      "model case: joint|marginal|latent|partial|sensitivity");
      cmd->add_option("--data", cfg.data_path, "contingency table (CSV or JSON)");
      cmd->add_option("--qbar", cfg.qbar_path, "(a,z) table for the partial model");
      cmd->add_option("--cov", cfg.cov, "covariance targets ALPHA DELTA")->expected(2);
      cmd->add_option("--n", cfg.n_override, "sample size override (default: table total)");
    }
    if (with_sampler) {
      cmd->add_option("--grid", cfg.grid, "density grid points");
      cmd->add_option("--steps", cfg.steps, "MCMC steps");
      cmd->add_option("--burn", cfg.burn, "burn-in steps");
      cmd->add_option("--thin", cfg.thin, "thinning stride");
      cmd->add_option("--proposal-sd", cfg.proposal_sd, "random-walk proposal sd");
      cmd->add_option("--seed", cfg.seed, "master seed")->envname("CEF_SEED");
      cmd->add_option("--starts", cfg.starts, "optimizer starts");
    }
  };

  CLI::App* fit = app.add_subcommand("fit", "MAP, profile and marginal posterior curves");
  add_common(fit, true, true);
  fit->add_option("--coords", cfg.coords, "coordinates to emit (default: all)")->delimiter(',');

  CLI::App* pte = app.add_subcommand("pte", "posterior treatment-effect curves");
  add_common(pte, true, true);

  CLI::App* maxent = app.add_subcommand("maxent", "constrained maximum-entropy reference");
  add_common(maxent, false, false);
  maxent->add_option("--marginal", cfg.qbar_path, "(a,z) marginal table");
  maxent->add_option("--cov", cfg.cov, "covariance targets ALPHA DELTA")->expected(2);

  CLI::App* sweep = app.add_subcommand("sweep", "covariance-target sensitivity sweep");
  add_common(sweep, false, true);
  sweep->add_option("--data", cfg.data_path, "(t,z) contingency table");
  sweep->add_option("--n", cfg.n_override, "sample size override");
  sweep->add_option("--alphas", cfg.alphas, "treatment-covariance targets")->delimiter(',');
  sweep->add_option("--deltas", cfg.deltas, "outcome-covariance targets")->delimiter(',');
  sweep->add_flag("--curves", cfg.curves, "write per-cell curve files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (!config_path.empty()) {
      apply_config(load_config_file(config_path), cmd, cfg);
    }
    if (cmd == fit) return cmd_fit(cfg);
    if (cmd == pte) return cmd_pte(cfg);
    if (cmd == maxent) return cmd_maxent(cfg);
    if (cmd == sweep) return cmd_sweep(cfg);
    return 2;
  } catch (const cef::InputError& e) {
    std::cerr << "cef: " << e.what() << "\n";
    return 2;
  } catch (const cef::UndefinedConditionalError& e) {
    std::cerr << "cef: " << e.what() << "\n";
    return 2;
  } catch (const cef::InfeasibleConstraintError& e) {
    std::cerr << "cef: " << e.what() << "\n";
    return 2;
  } catch (const cef::ConvergenceError& e) {
    std::cerr << "cef: " << e.what() << "\n";
    return 1;
  } catch (const cef::EmptyDensityError& e) {
    std::cerr << "cef: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "cef: " << e.what() << "\n";
    return 1;
  }
}
