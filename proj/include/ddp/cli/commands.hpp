#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ddp/cli/config.hpp"
#include "ddp/cli/dataset.hpp"
#include "ddp/cli/output.hpp"
#include "ddp/gibbs.hpp"
#include "ddp/inference.hpp"
#include "ddp/partition.hpp"

namespace ddp::cli {

/// Everything produced by one fit.
struct FitResult {
  Partition<double> partition;
  NormalBase<double> base;
  DdpModel model;
  ObservedData data;
  ChainSamples chain;
  FitSummary summary;
};

/// Partition from the configured bounds, or the data range when absent.
Partition<double> fit_partition(const RunConfig& cfg, const Dataset& data);

/// Configured (mu0, sigma0), or midrange and range/7 of the data.
NormalBase<double> fit_base(const RunConfig& cfg, const Dataset& data);

FitResult fit(const RunConfig& cfg, const Dataset& data, std::uint64_t seed);

/// Seed used for grid cell (q, c); depends only on the run seed and the cell.
std::uint64_t cell_seed(std::uint64_t seed, int q, int c);

/// One moving-average fit per (q, c), rows sorted by (c, q). A failing
/// cell is recorded in its row and does not stop the others.
std::vector<GridRow> grid(const RunConfig& cfg, const Dataset& data, std::uint64_t seed);

/// The subcommands write into cfg.out and report progress on `log`.
ExitCode cmd_fit(const RunConfig& cfg, std::ostream& log);
ExitCode cmd_grid(const RunConfig& cfg, std::ostream& log);
ExitCode cmd_simulate(const RunConfig& cfg, std::ostream& log);
ExitCode cmd_check(const RunConfig& cfg, std::ostream& log);

}  // namespace ddp::cli
