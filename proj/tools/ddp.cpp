// Batch front end: fit, grid, simulate, check.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ddp/cli/commands.hpp"
#include "ddp/error.hpp"

namespace {

using namespace ddp::cli;

struct Overrides {
  std::string config, data, out, format, mode, mh_partner;
  std::optional<std::uint64_t> seed;
  std::optional<long> iterations, burn_in, thin;
  std::optional<int> K, q, T, replicates;
  std::optional<double> c0, nu;
  std::vector<int> c, q_list, c_list, n_per_t;
  bool dump_chain = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON config file (flat object)");
  cmd->add_option("--data", o.data, "input CSV");
  cmd->add_option("--format", o.format, "input layout: long or wide");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "random seed (falls back to DDP_SEED, then 0)");
  cmd->add_option("--iterations", o.iterations, "total Gibbs sweeps");
  cmd->add_option("--burn-in", o.burn_in, "sweeps discarded before storing");
  cmd->add_option("--thin", o.thin, "store every n-th sweep after burn-in");
  cmd->add_option("--k", o.K, "number of partition bins");
  cmd->add_option("--c0", o.c0, "precision of the centring measure");
  cmd->add_option("--c", o.c, "latent sizes c_t: one value (constant) or one per series")->delimiter(',');
  cmd->add_option("--q", o.q, "moving-average / circular order");
  cmd->add_option("--nu", o.nu, "L-measure weight in [0, 1]");
  cmd->add_option("--mh-partner", o.mh_partner, "compensating bin of latent-count proposals: last or uniform");
}

RunConfig assemble(const Overrides& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.data.empty()) cfg.data = o.data;
  if (!o.format.empty()) cfg.format = o.format;
  if (!o.out.empty()) cfg.out = o.out;
  if (!o.mode.empty()) cfg.mode = o.mode;
  if (!o.mh_partner.empty()) cfg.mh_partner = o.mh_partner;
  if (o.seed) cfg.seed = o.seed;
  if (o.iterations) cfg.iterations = *o.iterations;
  if (o.burn_in) cfg.burn_in = *o.burn_in;
  if (o.thin) cfg.thin = *o.thin;
  if (o.K) cfg.K = *o.K;
  if (o.q) cfg.structure.q = *o.q;
  if (o.T) cfg.T = *o.T;
  if (o.replicates) cfg.replicates = *o.replicates;
  if (o.c0) cfg.c0 = *o.c0;
  if (o.nu) cfg.nu = *o.nu;
  if (!o.c.empty()) cfg.c = o.c;
  if (!o.q_list.empty()) cfg.q_list = o.q_list;
  if (!o.c_list.empty()) cfg.c_list = o.c_list;
  if (!o.n_per_t.empty()) cfg.n_per_t = o.n_per_t;
  if (o.dump_chain) cfg.dump_chain = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dependent Dirichlet processes driven by latent multinomial processes"};
  app.require_subcommand(1);
  Overrides o;

  auto* fit = app.add_subcommand("fit", "run the Gibbs sampler and write summary.csv / stats.json");
  add_common(fit, o);
  fit->add_flag("--dump-chain", o.dump_chain, "also write chain.csv");

  auto* grid = app.add_subcommand("grid", "fit a (q, c) grid of moving-average models and write grid.csv");
  add_common(grid, o);
  grid->add_option("--q-list", o.q_list, "orders to try")->delimiter(',');
  grid->add_option("--c-list", o.c_list, "latent sizes to try")->delimiter(',');

  auto* simulate = app.add_subcommand("simulate", "draw from the prior or from the Polya urns");
  add_common(simulate, o);
  simulate->add_option("--mode", o.mode, "prior or sequences");
  simulate->add_option("--T", o.T, "number of series");
  simulate->add_option("--replicates", o.replicates, "prior draws to emit");
  simulate->add_option("--n-per-t", o.n_per_t, "sequence length(s)")->delimiter(',');

  auto* check = app.add_subcommand("check", "compare analytic dependence and posterior results with simulation");
  add_common(check, o);
  check->add_option("--T", o.T, "number of series when no data are given");
  check->add_option("--replicates", o.replicates, "prior draws per Monte Carlo check");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = assemble(o);
    ExitCode code = ExitCode::ok;
    if (*fit) code = cmd_fit(cfg, std::cout);
    if (*grid) code = cmd_grid(cfg, std::cout);
    if (*simulate) code = cmd_simulate(cfg, std::cout);
    if (*check) code = cmd_check(cfg, std::cout);
    return static_cast<int>(code);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::data);
  } catch (const ddp::DegenerateScale& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::data);
  } catch (const ddp::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numeric);
  } catch (const ddp::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  }
}
