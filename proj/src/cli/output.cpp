#include "ddp/cli/output.hpp"

#include <fmt/format.h>

#include <ostream>

namespace ddp::cli {

std::string format_number(double x) { return fmt::format("{}", x); }

void write_summary_csv(std::ostream& out, const FitSummary& summary, const Partition<double>& partition) {
  out << "t,k,bin_left,bin_right,mean,var,cdf\n";
  for (Eigen::Index t = 0; t < summary.mean.rows(); ++t)
    for (Eigen::Index k = 0; k < summary.mean.cols(); ++k)
      out << fmt::format("{},{},{},{},{},{},{}\n", t + 1, k + 1, partition.left(k), partition.right(k),
                         summary.mean(t, k), summary.variance(t, k), summary.cdf(t, k));
}

void write_chain_csv(std::ostream& out, const ChainSamples& chain) {
  out << "iteration";
  if (chain.empty()) {
    out << '\n';
    return;
  }
  const auto& first = chain.draws.front();
  const std::size_t T = first.F.size();
  const Eigen::Index K = first.G.size();
  for (const char* name : {"F", "N"})
    for (std::size_t t = 0; t < T; ++t)
      for (Eigen::Index k = 0; k < K; ++k) out << fmt::format(",{}_{}_{}", name, t + 1, k + 1);
  for (Eigen::Index k = 0; k < K; ++k) out << fmt::format(",G_{}", k + 1);
  out << '\n';
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& d = chain.draws[i];
    out << chain.iterations[i];
    for (std::size_t t = 0; t < T; ++t)
      for (Eigen::Index k = 0; k < K; ++k) out << ',' << format_number(d.F[t][k]);
    for (std::size_t t = 0; t < T; ++t)
      for (Eigen::Index k = 0; k < K; ++k) out << ',' << d.N[t][k];
    for (Eigen::Index k = 0; k < K; ++k) out << ',' << format_number(d.G[k]);
    out << '\n';
  }
}

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows) {
  out << "q,c,lpml_log,lpml_paper,lmea,error\n";
  for (const auto& r : rows) {
    if (r.error.empty())
      out << fmt::format("{},{},{},{},{},\n", r.q, r.c, r.lpml_log, r.lpml_paper, r.lmea);
    else
      out << fmt::format("{},{},nan,nan,nan,\"{}\"\n", r.q, r.c, r.error);
  }
}

void write_prior_csv(std::ostream& out, const std::vector<PriorDraw>& draws) {
  out << "draw";
  if (draws.empty()) {
    out << '\n';
    return;
  }
  const std::size_t T = draws.front().F.size();
  const Eigen::Index K = draws.front().G.size();
  for (Eigen::Index k = 0; k < K; ++k) out << fmt::format(",G_{}", k + 1);
  for (const char* name : {"N", "F"})
    for (std::size_t t = 0; t < T; ++t)
      for (Eigen::Index k = 0; k < K; ++k) out << fmt::format(",{}_{}_{}", name, t + 1, k + 1);
  out << '\n';
  for (std::size_t r = 0; r < draws.size(); ++r) {
    const auto& d = draws[r];
    out << r + 1;
    for (Eigen::Index k = 0; k < K; ++k) out << ',' << format_number(d.G[k]);
    for (std::size_t t = 0; t < T; ++t)
      for (Eigen::Index k = 0; k < K; ++k) out << ',' << d.N[t][k];
    for (std::size_t t = 0; t < T; ++t)
      for (Eigen::Index k = 0; k < K; ++k) out << ',' << format_number(d.F[t][k]);
    out << '\n';
  }
}

void write_sequences_csv(std::ostream& out, const std::vector<std::vector<double>>& values) {
  out << "t,value\n";
  for (std::size_t t = 0; t < values.size(); ++t)
    for (double x : values[t]) out << t + 1 << ',' << format_number(x) << '\n';
}

}  // namespace ddp::cli
