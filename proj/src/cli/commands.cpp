#include "ddp/cli/commands.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "ddp/dependence.hpp"
#include "ddp/prior.hpp"
#include "ddp/stats.hpp"

namespace ddp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.out + "': " + ec.message());
  return dir;
}

/// T for runs without a dataset: explicit T, else the length of a per-t list.
int series_without_data(const RunConfig& cfg) {
  if (cfg.T > 0) return cfg.T;
  if (cfg.c.size() > 1) return static_cast<int>(cfg.c.size());
  if (cfg.structure.kind == "custom" && !cfg.structure.sets.empty()) return static_cast<int>(cfg.structure.sets.size());
  throw ConfigError("T is required when there is no dataset");
}

Partition<double> explicit_partition(const RunConfig& cfg) {
  if (!cfg.x_min || !cfg.x_max) throw ConfigError("x_min and x_max are required without a dataset");
  return build_partition(*cfg.x_min, *cfg.x_max, static_cast<Eigen::Index>(cfg.K));
}

/// Configured mu0 / sigma0 override the derived values one at a time.
NormalBase<double> with_overrides(const RunConfig& cfg, NormalBase<double> base) {
  if (cfg.mu0) base.mu0 = *cfg.mu0;
  if (cfg.sigma0) base.sigma0 = *cfg.sigma0;
  return base;
}

NormalBase<double> explicit_base(const RunConfig& cfg) {
  const Eigen::Vector2d bounds(*cfg.x_min, *cfg.x_max);
  return with_overrides(cfg, default_base_params(bounds));
}

DdpModel make_model(const RunConfig& cfg, int T, const Eigen::VectorXd& masses) {
  try {
    return DdpModel(build_params(cfg, T), build_structure(cfg.structure, T), masses);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

Eigen::VectorXd masses_for(const NormalBase<double>& base, const Partition<double>& partition) {
  try {
    return base_masses(base, partition);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

GibbsConfig gibbs_config(const RunConfig& cfg, std::uint64_t seed) {
  GibbsConfig g;
  g.iterations = cfg.iterations;
  g.burn_in = cfg.burn_in;
  g.thin = cfg.thin;
  g.mh_moves_per_sweep = cfg.mh_moves;
  g.mh_partner = cfg.mh_partner == "uniform" ? MhPartner::uniform : MhPartner::last_bin;
  g.seed = seed;
  return g;
}

json stats_json(const RunConfig& cfg, std::uint64_t seed, const FitResult& r) {
  RunConfig echo = cfg;
  echo.seed = seed;
  std::vector<double> rates;
  for (const auto& tally : r.chain.mh) rates.push_back(tally.rate());
  const auto& am = r.summary.anchor_mean;
  const auto& av = r.summary.anchor_variance;
  std::vector<double> anchor(am.data(), am.data() + am.size());
  std::vector<double> anchor_var(av.data(), av.data() + av.size());
  return {
      {"lpml_log", r.summary.lpml.lpml_log},
      {"lpml_paper", r.summary.lpml.lpml_paper},
      {"lmea", r.summary.lmea},
      {"nu", r.summary.nu},
      {"zero_density_observations", r.summary.lpml.zero_density},
      {"acceptance_rates", rates},
      {"stored_draws", r.chain.size()},
      {"T", r.model.series()},
      {"K", r.model.bins()},
      {"partition", {{"x_min", r.partition.lower()}, {"x_max", r.partition.upper()}}},
      {"base", {{"mu0", r.base.mu0}, {"sigma0", r.base.sigma0}}},
      {"anchor_mean", anchor},
      {"anchor_variance", anchor_var},
      {"config", config_to_json(echo)},
  };
}

Dataset load_dataset(const RunConfig& cfg) {
  if (cfg.data.empty()) throw ConfigError("a data file is required (--data or \"data\")");
  return ingest_file(cfg.data, cfg.format);
}

}  // namespace

Partition<double> fit_partition(const RunConfig& cfg, const Dataset& data) {
  if (cfg.x_min && cfg.x_max) return build_partition(*cfg.x_min, *cfg.x_max, static_cast<Eigen::Index>(cfg.K));
  const double lo = data.min(), hi = data.max();
  if (!(hi > lo)) throw DegenerateScale("data have zero range; cannot build a partition");
  return build_partition(lo, hi, static_cast<Eigen::Index>(cfg.K));
}

NormalBase<double> fit_base(const RunConfig& cfg, const Dataset& data) {
  if (cfg.mu0 && cfg.sigma0) return {*cfg.mu0, *cfg.sigma0};
  const auto pooled = data.pooled();
  return with_overrides(cfg, default_base_params(Eigen::Map<const Eigen::VectorXd>(
                                 pooled.data(), static_cast<Eigen::Index>(pooled.size()))));
}

FitResult fit(const RunConfig& cfg, const Dataset& data, std::uint64_t seed) {
  validate(cfg);
  Partition<double> partition = fit_partition(cfg, data);
  const NormalBase<double> base = fit_base(cfg, data);
  DdpModel model = make_model(cfg, data.T(), masses_for(base, partition));
  ObservedData observed = ObservedData::from_values(data.series, partition);
  ChainSamples chain = run_gibbs(observed, model, gibbs_config(cfg, seed));
  FitSummary summary = summarize(chain, observed, partition, cfg.nu);
  return {std::move(partition), base, std::move(model), std::move(observed), std::move(chain), std::move(summary)};
}

std::uint64_t cell_seed(std::uint64_t seed, int q, int c) {
  const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(q)) << 32) |
                            static_cast<std::uint32_t>(c);
  return RngStream(seed).split(key).engine()();
}

std::vector<GridRow> grid(const RunConfig& cfg, const Dataset& data, std::uint64_t seed) {
  validate(cfg);
  if (cfg.structure.kind != "ma") throw ConfigError("grid runs require the moving-average structure");
  std::vector<int> qs = cfg.q_list.empty() ? std::vector<int>{cfg.structure.q} : cfg.q_list;
  std::vector<int> cs = cfg.c_list.empty() ? std::vector<int>{cfg.c.front()} : cfg.c_list;
  std::sort(qs.begin(), qs.end());
  std::sort(cs.begin(), cs.end());

  std::vector<GridRow> rows;
  for (int c : cs) {
    for (int q : qs) {
      GridRow row;
      row.q = q;
      row.c = c;
      RunConfig cell = cfg;
      cell.structure.q = q;
      cell.c = {c};
      try {
        const FitResult r = fit(cell, data, cell_seed(seed, q, c));
        row.lpml_log = r.summary.lpml.lpml_log;
        row.lpml_paper = r.summary.lpml.lpml_paper;
        row.lmea = r.summary.lmea;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

ExitCode cmd_fit(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const std::uint64_t seed = resolve_seed(cfg);
  const Dataset data = load_dataset(cfg);
  log << fmt::format("data: T={} observations={} range=[{}, {}]\n", data.T(), data.pooled().size(), data.min(),
                     data.max());
  const fs::path dir = prepare_out_dir(cfg);

  FitResult r = [&] {
    try {
      return fit(cfg, data, seed);
    } catch (const ChainFailure& e) {
      auto chain_out = open_output(dir / "chain.csv");
      write_chain_csv(chain_out, e.partial());
      auto dump = open_output(dir / "failure_state.txt");
      dump << e.what() << '\n' << e.state_dump();
      throw;
    }
  }();

  {
    auto out = open_output(dir / "summary.csv");
    write_summary_csv(out, r.summary, r.partition);
  }
  {
    auto out = open_output(dir / "stats.json");
    out << stats_json(cfg, seed, r).dump(2) << '\n';
  }
  if (cfg.dump_chain) {
    auto out = open_output(dir / "chain.csv");
    write_chain_csv(out, r.chain);
  }

  log << fmt::format("stored draws: {}\n", r.chain.size());
  log << fmt::format("LPML (log CPO): {}\nLPML (plain CPO): {}\nLMEA(nu={}): {}\n", r.summary.lpml.lpml_log,
                     r.summary.lpml.lpml_paper, cfg.nu, r.summary.lmea);
  if (r.summary.lpml.zero_density > 0)
    log << fmt::format("warning: {} observations had zero density in some draw; their CPO is 0\n",
                       r.summary.lpml.zero_density);
  bool stalled = false;
  for (std::size_t t = 0; t < r.chain.mh.size(); ++t) {
    log << fmt::format("MH acceptance t={}: {:.4f}\n", t + 1, r.chain.mh[t].rate());
    stalled = stalled || (r.chain.mh[t].proposed > 0 && r.chain.mh[t].rate() < 0.01);
  }
  if (stalled && cfg.mh_partner == "last")
    log << "warning: latent-count acceptance below 1%; the last bin may carry little mass, try --mh-partner uniform\n";
  return ExitCode::ok;
}

ExitCode cmd_grid(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const std::uint64_t seed = resolve_seed(cfg);
  const Dataset data = load_dataset(cfg);
  const fs::path dir = prepare_out_dir(cfg);
  const auto rows = grid(cfg, data, seed);
  auto out = open_output(dir / "grid.csv");
  write_grid_csv(out, rows);
  for (const auto& r : rows) {
    if (r.error.empty())
      log << fmt::format("q={} c={} lpml_log={} lpml_paper={} lmea={}\n", r.q, r.c, r.lpml_log, r.lpml_paper, r.lmea);
    else
      log << fmt::format("q={} c={} failed: {}\n", r.q, r.c, r.error);
  }
  return ExitCode::ok;
}

ExitCode cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const std::uint64_t seed = resolve_seed(cfg);
  const int T = series_without_data(cfg);
  const Partition<double> partition = explicit_partition(cfg);
  const DdpModel model = make_model(cfg, T, masses_for(explicit_base(cfg), partition));
  const fs::path dir = prepare_out_dir(cfg);
  const RngStream root(seed);

  if (cfg.mode == "prior") {
    std::vector<PriorDraw> draws;
    draws.reserve(static_cast<std::size_t>(cfg.replicates));
    for (int r = 0; r < cfg.replicates; ++r) {
      RngStream rng = root.split(static_cast<std::uint64_t>(r));
      draws.push_back(sample_prior(model, rng));
    }
    auto out = open_output(dir / "prior_draws.csv");
    write_prior_csv(out, draws);
    log << fmt::format("wrote {} prior draws (T={}, K={})\n", draws.size(), T, model.bins());
  } else {
    RngStream rng = root.split(0);
    const SequenceSample sample = simulate_sequences(model, sequence_lengths(cfg, T), partition, rng);
    auto out = open_output(dir / "sequences.csv");
    write_sequences_csv(out, sample.values);
    std::size_t total = 0;
    for (const auto& s : sample.values) total += s.size();
    log << fmt::format("wrote {} urn draws over {} series\n", total, T);
  }
  return ExitCode::ok;
}

ExitCode cmd_check(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const std::uint64_t seed = resolve_seed(cfg);
  const RngStream root(seed);

  std::optional<Dataset> data;
  if (!cfg.data.empty()) data = ingest_file(cfg.data, cfg.format);
  const int T = data ? data->T() : series_without_data(cfg);
  if (T < 2) throw ConfigError("check needs at least two series");

  // Prior checks use the configured partition when bounds exist, else K equal masses.
  std::optional<Partition<double>> partition;
  Eigen::VectorXd masses;
  if (data) {
    partition = fit_partition(cfg, *data);
    masses = masses_for(fit_base(cfg, *data), *partition);
  } else if (cfg.x_min) {
    partition = explicit_partition(cfg);
    masses = masses_for(explicit_base(cfg), *partition);
  } else {
    masses = Eigen::VectorXd::Constant(cfg.K, 1.0 / cfg.K);
  }
  const DdpModel model = make_model(cfg, T, masses);
  const int M = std::max(cfg.replicates, 1000);
  bool all_pass = true;
  auto report = [&](const std::string& what, double target, const Estimate& est) {
    const bool pass = est.agrees_with(target);
    all_pass = all_pass && pass;
    log << fmt::format("[{}] {}: analytic {:.6f}, Monte Carlo {:.6f} (SE {:.6f})\n", pass ? "PASS" : "FAIL", what,
                       target, est.value, est.se);
  };

  std::uint64_t stream = 0;
  for (int t = 0; t + 1 < T && t < 3; ++t) {
    RngStream rng = root.split(stream++);
    report(fmt::format("Corr F_{}(B_1), F_{}(B_1)", t + 1, t + 2), corr_same_set(t, t + 1, model.params, model.structure),
           mc_correlation(model, t, t + 1, 0, 0, M, rng));
  }
  {
    RngStream rng = root.split(stream++);
    report("Corr F_1(B_1), F_2(B_2)",
           corr_cross_sets(0, 1, model.base[0], model.base[1], model.params, model.structure),
           mc_correlation(model, 0, 1, 0, 1, M, rng));
  }
  {
    RngStream rng = root.split(stream++);
    std::vector<double> x(M);
    for (int r = 0; r < M; ++r) x[r] = sample_prior(model, rng).F[0][0];
    const Moments exact = marginal_moments(model.base[0], model.c0());
    report("E F_1(B_1)", exact.mean, mean_estimate(x));
    report("Var F_1(B_1)", exact.variance, variance_estimate(x));
  }
  if (model.params.total() == 0) log << "all c_t = 0: the measures are independent a priori\n";

  if (data && partition) {
    const ObservedData observed = ObservedData::from_values(data->series, *partition);
    try {
      const ExactPosterior exact = exact_posterior_small(observed, model);
      const ChainSamples chain = run_gibbs(observed, model, gibbs_config(cfg, root.split(stream++).engine()()));
      double worst = 0;
      for (int t = 0; t < T; ++t) {
        const Eigen::VectorXd chain_mean = [&] {
          Eigen::VectorXd s = Eigen::VectorXd::Zero(model.bins());
          for (const auto& d : chain.draws) s += d.F[t].probs;
          return Eigen::VectorXd(s / static_cast<double>(chain.size()));
        }();
        worst = std::max(worst, (chain_mean - exact.mean.row(t).transpose()).cwiseAbs().maxCoeff());
      }
      const bool pass = worst < 0.01;
      all_pass = all_pass && pass;
      log << fmt::format("[{}] Gibbs vs exact enumeration ({} configurations): max |delta mean| = {:.5f}\n",
                         pass ? "PASS" : "FAIL", exact.configurations, worst);
    } catch (const InvalidArgument& e) {
      log << fmt::format("[SKIP] exact enumeration: {}\n", e.what());
    }
  }
  return all_pass ? ExitCode::ok : ExitCode::check_failed;
}

}  // namespace ddp::cli
