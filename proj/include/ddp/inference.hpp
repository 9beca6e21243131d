#pragma once

#include <Eigen/Dense>

#include <vector>

#include "ddp/gibbs.hpp"
#include "ddp/model.hpp"
#include "ddp/partition.hpp"
#include "ddp/rng.hpp"

namespace ddp {

/// E(F_t | N, X_t) on the partition: (c0 F0 + sum_{j in d_t} N_j + h_t) / (c0 + sum c_j + m_t).
Eigen::VectorXd predictive_mean(const ChainState& state, const ObservedData& data, int t, const DdpModel& model);

/// Chain average of the per-draw predictive means.
Eigen::VectorXd predictive_mean(const ChainSamples& chain, const ObservedData& data, int t, const DdpModel& model);

/// Generalised Polya urns sharing latent balls. Balls are bin indices.
struct UrnState {
  double c0 = 1.0;
  Eigen::VectorXd base;
  std::vector<std::vector<Eigen::Index>> latent;  // latent[j]: the c_j balls Y_{.,j}
  std::vector<std::vector<Eigen::Index>> drawn;   // drawn[t]: X_{1,t}, X_{2,t}, ...
};

/// Y_{i,j} | G iid G with G ~ Dir(c0 F0); no balls drawn yet.
UrnState seed_urns(const DdpModel& model, RngStream& rng);

/// Next-draw distribution of urn t over bins:
/// (c0 F0 + sum_{j in d_t} c_j Ghat_j + m_t Fhat_t) / (c0 + sum c_j + m_t).
Eigen::VectorXd urn_predictive(const UrnState& urn, const NeighborStructure& s, int t);

/// Draws the next ball of urn t (a fresh F0 ball or a copy of one already
/// in the urn) and returns it to the urn.
Eigen::Index urn_next(UrnState& urn, const NeighborStructure& s, int t, RngStream& rng);

struct SequenceSample {
  UrnState urn;
  std::vector<std::vector<Eigen::Index>> bins;  // same as urn.drawn
  std::vector<std::vector<double>> values;      // uniform within each drawn bin
};

/// Partially exchangeable sequences: n_per_t[t] draws from urn t.
SequenceSample simulate_sequences(const DdpModel& model, const std::vector<int>& n_per_t,
                                  const Partition<double>& partition, RngStream& rng);

struct LpmlResult {
  double lpml_log = 0;    // (1/T) sum_t (1/m_t) sum_i log CPO_{i,t}
  double lpml_paper = 0;  // same average of CPO_{i,t} without the log
  std::vector<std::vector<double>> cpo;
  long zero_density = 0;  // observations whose density vanished in some draw
};

/// Harmonic-mean CPO with the piecewise-constant density F_t(B_k) / width(B_k).
/// Series with m_t = 0 are left out of the averages.
LpmlResult lpml(const ChainSamples& chain, const ObservedData& data, const Partition<double>& partition);

/// LMEA(nu) = variance term + nu * bias term.
struct LMeasureTerms {
  double variance = 0;
  double bias = 0;

  double at(double nu) const { return variance + nu * bias; }
};

LMeasureTerms lmeasure_terms(const ChainSamples& chain, const ObservedData& data);

double lmeasure(const ChainSamples& chain, const ObservedData& data, double nu);

struct FitSummary {
  Eigen::MatrixXd mean;      // T x K posterior means of F_t(B_k)
  Eigen::MatrixXd variance;  // T x K
  Eigen::MatrixXd cdf;       // row-wise cumulative means
  Eigen::VectorXd anchor_mean;
  Eigen::VectorXd anchor_variance;
  LpmlResult lpml;
  double nu = 0.5;
  double lmea = 0;
};

FitSummary summarize(const ChainSamples& chain, const ObservedData& data, const Partition<double>& partition,
                     double nu = 0.5);

}  // namespace ddp
