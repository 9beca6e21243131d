#include "ddp/gibbs.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ddp {

using detail::require;

ObservedData ObservedData::from_values(std::vector<std::vector<double>> values, const Partition<double>& partition) {
  ObservedData data;
  data.counts = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(values.size()), partition.bins());
  for (std::size_t t = 0; t < values.size(); ++t)
    for (double x : values[t]) ++data.counts(static_cast<Eigen::Index>(t), partition.locate(x));
  data.values = std::move(values);
  return data;
}

ObservedData ObservedData::from_counts(Eigen::MatrixXi counts) {
  require((counts.array() >= 0).all(), "bin counts must be nonnegative");
  ObservedData data;
  data.counts = std::move(counts);
  data.values.resize(static_cast<std::size_t>(data.counts.rows()));
  return data;
}

Eigen::VectorXd ObservedData::empirical(int t) const {
  const int m = size(t);
  if (m == 0) return Eigen::VectorXd::Zero(bins());
  return counts.row(t).transpose().cast<double>() / static_cast<double>(m);
}

void GibbsConfig::validate() const {
  require(iterations >= 1, "iterations must be positive");
  require(burn_in >= 0 && burn_in < iterations, "burn-in must be in [0, iterations)");
  require(thin >= 1, "thin must be at least 1");
  require(mh_moves_per_sweep >= 1, "mh_moves_per_sweep must be at least 1");
}

Eigen::VectorXd ChainSamples::acceptance_rates() const {
  Eigen::VectorXd rates(static_cast<Eigen::Index>(mh.size()));
  for (std::size_t t = 0; t < mh.size(); ++t) rates[static_cast<Eigen::Index>(t)] = mh[t].rate();
  return rates;
}

namespace {

void check_dims(const ObservedData& data, const DdpModel& model) {
  require(data.series() == model.series(), "data series count does not match the model");
  require(data.bins() == model.bins(), "data bin count does not match the model");
}

}  // namespace

Eigen::VectorXd posterior_alpha(const ChainState& state, const ObservedData& data, int t, const DdpModel& model) {
  return model.c0() * model.base + latent_sum(state.N, model.structure.forward(t)) +
         data.counts.row(t).transpose().cast<double>();
}

void update_F(ChainState& state, const ObservedData& data, const DdpModel& model, RngStream& rng) {
  for (int t = 0; t < model.series(); ++t) state.F[t] = sample_dirichlet(posterior_alpha(state, data, t, model), rng);
}

double log_density_N(const Eigen::VectorXi& n, int t, const ChainState& state, const DdpModel& model) {
  require(n.size() == model.bins(), "candidate has the wrong number of bins");
  require((n.array() >= 0).all(), "candidate counts must be nonnegative");
  require(n.sum() == model.c(t), "candidate counts must sum to c_t");
  const auto& rev = model.structure.reversed(t);

  std::vector<CountMeasure> N = state.N;
  N[t] = CountMeasure(n, model.c(t));

  double value = 0;
  for (Eigen::Index k = 0; k < n.size(); ++k) {
    if (n[k] > 0) {
      double log_weight = std::log(state.G[k]);
      for (int j : rev) log_weight += std::log(state.F[j][k]);
      value += n[k] * log_weight;
    }
    value -= std::lgamma(n[k] + 1.0);
  }
  for (int j : rev) {
    const Eigen::VectorXd alpha = model.c0() * model.base + latent_sum(N, model.structure.forward(j));
    for (Eigen::Index k = 0; k < alpha.size(); ++k) value -= std::lgamma(alpha[k]);
  }
  return value;
}

MhTally update_N_mh(ChainState& state, int t, const DdpModel& model, RngStream& rng, int moves_per_cell,
                    MhPartner partner) {
  MhTally tally;
  const int ct = model.c(t);
  const Eigen::Index K = model.bins();
  if (ct == 0 || K < 2) return tally;

  const auto& rev = model.structure.reversed(t);
  // log G_k + sum_{j in r_t} log F_j(B_k)
  Eigen::VectorXd log_weight = state.G.probs.array().log().matrix();
  // alpha(r, k) = c0 F0(B_k) + sum_{l in d_j} N_l(B_k) for the r-th j in r_t
  Eigen::MatrixXd alpha(static_cast<Eigen::Index>(rev.size()), K);
  for (std::size_t r = 0; r < rev.size(); ++r) {
    const int j = rev[r];
    log_weight += state.F[j].probs.array().log().matrix();
    alpha.row(static_cast<Eigen::Index>(r)) =
        (model.c0() * model.base + latent_sum(state.N, model.structure.forward(j))).transpose();
  }

  Eigen::VectorXi& n = state.N[t].counts;
  const Eigen::Index last = K - 1;
  for (Eigen::Index k = 0; k < last; ++k) {
    for (int move = 0; move < moves_per_cell; ++move) {
      ++tally.proposed;
      Eigen::Index other = last;
      if (partner == MhPartner::uniform) {
        other = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(K - 1)));
        if (other >= k) ++other;
      }
      const bool outward = rng.uniform() < 0.5;
      const Eigen::Index from = outward ? k : other;
      const Eigen::Index to = outward ? other : k;
      const double u = rng.uniform();
      if (n[from] == 0) continue;

      double delta = log_weight[to] - log_weight[from] - std::log(n[to] + 1.0) + std::log(static_cast<double>(n[from]));
      for (Eigen::Index r = 0; r < alpha.rows(); ++r)
        delta += std::log(alpha(r, from) - 1.0) - std::log(alpha(r, to));
      if (std::isnan(delta)) {
        throw NumericError("non-finite log-density ratio in the latent-count update for index " +
                           std::to_string(t + 1) + ", bins " + std::to_string(from + 1) + "->" +
                           std::to_string(to + 1));
      }
      if (std::log(u) < delta) {
        --n[from];
        ++n[to];
        alpha.col(from).array() -= 1.0;
        alpha.col(to).array() += 1.0;
        ++tally.accepted;
      }
    }
  }
  return tally;
}

void update_G(ChainState& state, const DdpModel& model, RngStream& rng) {
  Eigen::VectorXd alpha = model.c0() * model.base;
  for (const auto& n : state.N) alpha += n.counts.cast<double>();
  state.G = sample_dirichlet(alpha, rng);
}

ChainState initial_state(const ObservedData& data, const DdpModel& model, RngStream& rng) {
  check_dims(data, model);
  ChainState state;
  state.N.reserve(model.series());
  for (int t = 0; t < model.series(); ++t)
    state.N.push_back(sample_dirichlet_multinomial(model.c(t), model.c0(), model.base, rng));
  state.F.resize(model.series());
  update_F(state, data, model, rng);
  update_G(state, model, rng);
  return state;
}

std::vector<MhTally> gibbs_sweep(ChainState& state, const ObservedData& data, const DdpModel& model, RngStream& rng,
                                 int moves_per_cell, MhPartner partner) {
  std::vector<MhTally> tallies(model.series());
  update_F(state, data, model, rng);
  for (int t = 0; t < model.series(); ++t) tallies[t] = update_N_mh(state, t, model, rng, moves_per_cell, partner);
  update_G(state, model, rng);
  return tallies;
}

ChainSamples run_gibbs(const ObservedData& data, const DdpModel& model, const GibbsConfig& config) {
  config.validate();
  check_dims(data, model);
  RngStream rng(config.seed);
  ChainState state = initial_state(data, model, rng);

  ChainSamples chain;
  chain.mh.assign(model.series(), {});
  chain.draws.reserve(static_cast<std::size_t>(config.stored_draws()));
  for (long it = 1; it <= config.iterations; ++it) {
    try {
      const auto tallies = gibbs_sweep(state, data, model, rng, config.mh_moves_per_sweep, config.mh_partner);
      for (int t = 0; t < model.series(); ++t) chain.mh[t] += tallies[t];
    } catch (const NumericError& e) {
      throw ChainFailure(std::string(e.what()) + " at iteration " + std::to_string(it), std::move(chain),
                         dump_state(state));
    }
    if (it > config.burn_in && (it - config.burn_in) % config.thin == 0) {
      chain.draws.push_back(state);
      chain.iterations.push_back(it);
    }
  }
  return chain;
}

std::string dump_state(const ChainState& state) {
  std::ostringstream out;
  out.precision(17);
  auto row = [&](const auto& v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) out << (k ? " " : "") << v[k];
    out << '\n';
  };
  out << "G: ";
  row(state.G.probs);
  for (std::size_t t = 0; t < state.F.size(); ++t) {
    out << "F[" << t + 1 << "]: ";
    row(state.F[t].probs);
    out << "N[" << t + 1 << "]: ";
    row(state.N[t].counts);
  }
  return out.str();
}

}  // namespace ddp
