#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ddp/gibbs.hpp"
#include "ddp/inference.hpp"
#include "ddp/prior.hpp"

namespace ddp::cli {

/// One (q, c) cell of a model-selection grid.
struct GridRow {
  int q = 0;
  int c = 0;
  double lpml_log = 0;
  double lpml_paper = 0;
  double lmea = 0;
  std::string error;  // empty on success
};

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

/// Columns t,k,bin_left,bin_right,mean,var,cdf; t and k are 1-based.
void write_summary_csv(std::ostream& out, const FitSummary& summary, const Partition<double>& partition);

/// One row per stored draw: iteration, F_t_k..., N_t_k..., G_k... (t-major, then k).
void write_chain_csv(std::ostream& out, const ChainSamples& chain);

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows);

/// One row per prior draw: draw, G_k..., N_t_k..., F_t_k...
void write_prior_csv(std::ostream& out, const std::vector<PriorDraw>& draws);

/// Long format `t,value`, readable by the long-format ingester.
void write_sequences_csv(std::ostream& out, const std::vector<std::vector<double>>& values);

}  // namespace ddp::cli
