#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "ddp/error.hpp"
#include "ddp/model.hpp"
#include "ddp/partition.hpp"
#include "ddp/rng.hpp"

namespace ddp {

/// Observations X_{i,t} grouped by series, with bin counts h_{t,k}.
/// The sampler only sees the counts; raw values are kept for density-based
/// scores such as the CPO.
struct ObservedData {
  std::vector<std::vector<double>> values;
  Eigen::MatrixXi counts;  // T x K

  static ObservedData from_values(std::vector<std::vector<double>> values, const Partition<double>& partition);
  static ObservedData from_counts(Eigen::MatrixXi counts);

  int series() const { return static_cast<int>(counts.rows()); }
  Eigen::Index bins() const { return counts.cols(); }
  int size(int t) const { return counts.row(t).sum(); }
  /// h_t / m_t; zero vector when m_t = 0.
  Eigen::VectorXd empirical(int t) const;
};

struct ChainState {
  std::vector<SimplexMeasure> F;
  std::vector<CountMeasure> N;
  SimplexMeasure G;
};

/// Compensating bin of a latent-count proposal for cell k.
enum class MhPartner {
  last_bin,  // always bin K
  uniform,   // a bin drawn uniformly from the other K - 1
};

struct GibbsConfig {
  long iterations = 100000;
  long burn_in = 5000;
  long thin = 25;
  int mh_moves_per_sweep = 1;
  MhPartner mh_partner = MhPartner::last_bin;
  std::uint64_t seed = 0;

  void validate() const;
  long stored_draws() const { return (iterations - burn_in) / thin; }
};

struct MhTally {
  long proposed = 0;
  long accepted = 0;

  double rate() const { return proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0; }
  MhTally& operator+=(const MhTally& o) {
    proposed += o.proposed;
    accepted += o.accepted;
    return *this;
  }
};

/// Thinned post-burn-in states plus Metropolis-Hastings diagnostics per index.
struct ChainSamples {
  std::vector<ChainState> draws;
  std::vector<long> iterations;
  std::vector<MhTally> mh;

  std::size_t size() const { return draws.size(); }
  bool empty() const { return draws.empty(); }
  Eigen::VectorXd acceptance_rates() const;
};

/// Raised when a chain meets a non-finite quantity; keeps what was stored so far.
class ChainFailure : public NumericError {
 public:
  ChainFailure(const std::string& what, ChainSamples partial, std::string state_dump)
      : NumericError(what), partial_(std::move(partial)), dump_(std::move(state_dump)) {}

  const ChainSamples& partial() const { return partial_; }
  const std::string& state_dump() const { return dump_; }

 private:
  ChainSamples partial_;
  std::string dump_;
};

/// Dirichlet parameters of F_t | N, X_t: c0 F0 + sum_{j in d_t} N_j + h_t.
Eigen::VectorXd posterior_alpha(const ChainState& state, const ObservedData& data, int t, const DdpModel& model);

void update_F(ChainState& state, const ObservedData& data, const DdpModel& model, RngStream& rng);

/// Unnormalized log of P(N_t = n | F, G, N_{-t}).
double log_density_N(const Eigen::VectorXi& n, int t, const ChainState& state, const DdpModel& model);

/// Metropolis-Hastings scan over cells k = 1..K-1 of N_t. Each proposal moves
/// one unit between bin k and its partner bin in a random direction.
MhTally update_N_mh(ChainState& state, int t, const DdpModel& model, RngStream& rng, int moves_per_cell = 1,
                    MhPartner partner = MhPartner::last_bin);

void update_G(ChainState& state, const DdpModel& model, RngStream& rng);

/// N_t from the Dirichlet-multinomial prior marginal, then F and G from their conditionals.
ChainState initial_state(const ObservedData& data, const DdpModel& model, RngStream& rng);

/// One systematic scan F -> N_1..N_T -> G; returns per-index MH tallies.
std::vector<MhTally> gibbs_sweep(ChainState& state, const ObservedData& data, const DdpModel& model, RngStream& rng,
                                 int moves_per_cell = 1, MhPartner partner = MhPartner::last_bin);

ChainSamples run_gibbs(const ObservedData& data, const DdpModel& model, const GibbsConfig& config);

std::string dump_state(const ChainState& state);

/// Exact posterior of F_t(B_k) by enumerating every joint configuration of
/// the latent counts, with F and G integrated analytically.
struct ExactPosterior {
  Eigen::MatrixXd mean;      // T x K
  Eigen::MatrixXd variance;  // T x K
  /// log probability of the observed bin-label sequence
  double log_marginal_likelihood = 0;
  std::size_t configurations = 0;
};

ExactPosterior exact_posterior_small(const ObservedData& data, const DdpModel& model,
                                     std::size_t max_configurations = 100000);

}  // namespace ddp
