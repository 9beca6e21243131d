#include "ddp/inference.hpp"

#include <cmath>
#include <limits>

namespace ddp {

using detail::require;

Eigen::VectorXd predictive_mean(const ChainState& state, const ObservedData& data, int t, const DdpModel& model) {
  const Eigen::VectorXd alpha = posterior_alpha(state, data, t, model);
  return alpha / alpha.sum();
}

Eigen::VectorXd predictive_mean(const ChainSamples& chain, const ObservedData& data, int t, const DdpModel& model) {
  require(!chain.empty(), "chain has no stored draws");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(model.bins());
  for (const auto& draw : chain.draws) sum += predictive_mean(draw, data, t, model);
  return sum / static_cast<double>(chain.size());
}

UrnState seed_urns(const DdpModel& model, RngStream& rng) {
  UrnState urn;
  urn.c0 = model.c0();
  urn.base = model.base;
  const SimplexMeasure G = sample_dirichlet(model.c0() * model.base, rng);
  urn.latent.resize(model.series());
  urn.drawn.resize(model.series());
  for (int j = 0; j < model.series(); ++j) {
    const CountMeasure n = sample_multinomial(model.c(j), G, rng);
    for (Eigen::Index k = 0; k < n.size(); ++k) urn.latent[j].insert(urn.latent[j].end(), n[k], k);
  }
  return urn;
}

Eigen::VectorXd urn_predictive(const UrnState& urn, const NeighborStructure& s, int t) {
  Eigen::VectorXd weights = urn.c0 * urn.base;
  for (int j : s.forward(t))
    for (Eigen::Index ball : urn.latent[j]) weights[ball] += 1.0;
  for (Eigen::Index ball : urn.drawn[t]) weights[ball] += 1.0;
  return weights / weights.sum();
}

namespace {

Eigen::Index draw_from(const Eigen::VectorXd& probs, RngStream& rng) {
  double u = rng.uniform() * probs.sum();
  for (Eigen::Index k = 0; k + 1 < probs.size(); ++k) {
    u -= probs[k];
    if (u <= 0) return k;
  }
  return probs.size() - 1;
}

}  // namespace

Eigen::Index urn_next(UrnState& urn, const NeighborStructure& s, int t, RngStream& rng) {
  std::size_t balls = urn.drawn[t].size();
  for (int j : s.forward(t)) balls += urn.latent[j].size();
  const double total = urn.c0 + static_cast<double>(balls);

  Eigen::Index drawn;
  if (rng.uniform() * total < urn.c0) {
    drawn = draw_from(urn.base, rng);
  } else {
    // copy the pick-th ball: latent balls of d_t first, then earlier draws
    std::size_t pick = rng.below(balls);
    drawn = -1;
    for (int j : s.forward(t)) {
      if (pick < urn.latent[j].size()) {
        drawn = urn.latent[j][pick];
        break;
      }
      pick -= urn.latent[j].size();
    }
    if (drawn < 0) drawn = urn.drawn[t][pick];
  }
  urn.drawn[t].push_back(drawn);
  return drawn;
}

SequenceSample simulate_sequences(const DdpModel& model, const std::vector<int>& n_per_t,
                                  const Partition<double>& partition, RngStream& rng) {
  require(static_cast<int>(n_per_t.size()) == model.series(), "need one sequence length per index");
  require(partition.bins() == model.bins(), "partition does not match the model's bins");
  SequenceSample out;
  out.urn = seed_urns(model, rng);
  out.values.resize(model.series());
  for (int t = 0; t < model.series(); ++t) {
    require(n_per_t[t] >= 0, "sequence lengths must be nonnegative");
    for (int i = 0; i < n_per_t[t]; ++i) {
      const Eigen::Index k = urn_next(out.urn, model.structure, t, rng);
      out.values[t].push_back(partition.left(k) + rng.uniform() * partition.width(k));
    }
  }
  out.bins = out.urn.drawn;
  return out;
}

LpmlResult lpml(const ChainSamples& chain, const ObservedData& data, const Partition<double>& partition) {
  require(!chain.empty(), "chain has no stored draws");
  require(partition.bins() == data.bins(), "partition does not match the data");
  const double L = static_cast<double>(chain.size());
  LpmlResult out;
  out.cpo.resize(data.values.size());
  double sum_log = 0, sum_plain = 0;
  int used_series = 0;
  std::vector<double> neg_log_f(chain.size());
  for (std::size_t t = 0; t < data.values.size(); ++t) {
    const auto& xs = data.values[t];
    if (xs.empty()) continue;
    double series_log = 0, series_plain = 0;
    for (double x : xs) {
      const Eigen::Index k = partition.locate(x);
      const double log_width = std::log(partition.width(k));
      bool vanished = false;
      for (std::size_t l = 0; l < chain.size(); ++l) {
        const double p = chain.draws[l].F[t][k];
        if (!(p > 0)) vanished = true;
        neg_log_f[l] = log_width - std::log(p);
      }
      double log_cpo = -std::numeric_limits<double>::infinity();
      if (vanished) {
        ++out.zero_density;
      } else {
        double top = -std::numeric_limits<double>::infinity();
        for (double v : neg_log_f) top = std::max(top, v);
        double acc = 0;
        for (double v : neg_log_f) acc += std::exp(v - top);
        log_cpo = std::log(L) - (top + std::log(acc));
      }
      const double cpo = std::exp(log_cpo);
      out.cpo[t].push_back(cpo);
      series_log += log_cpo;
      series_plain += cpo;
    }
    const double m = static_cast<double>(xs.size());
    sum_log += series_log / m;
    sum_plain += series_plain / m;
    ++used_series;
  }
  require(used_series > 0, "LPML needs at least one observation");
  out.lpml_log = sum_log / used_series;
  out.lpml_paper = sum_plain / used_series;
  return out;
}

LMeasureTerms lmeasure_terms(const ChainSamples& chain, const ObservedData& data) {
  require(!chain.empty(), "chain has no stored draws");
  const int T = data.series();
  const Eigen::Index K = data.bins();
  const double L = static_cast<double>(chain.size());
  LMeasureTerms terms;
  int used_series = 0;
  for (int t = 0; t < T; ++t) {
    if (data.size(t) == 0) continue;
    ++used_series;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(K);
    for (const auto& d : chain.draws) mean += d.F[t].probs;
    mean /= L;
    Eigen::VectorXd var = Eigen::VectorXd::Zero(K);
    for (const auto& d : chain.draws) var += (d.F[t].probs - mean).cwiseAbs2();
    var /= L;
    terms.variance += var.sum();
    terms.bias += (mean - data.empirical(t)).squaredNorm();
  }
  require(used_series > 0, "L-measure needs at least one observation");
  const double cells = static_cast<double>(used_series) * static_cast<double>(K);
  terms.variance /= cells;
  terms.bias /= cells;
  return terms;
}

double lmeasure(const ChainSamples& chain, const ObservedData& data, double nu) {
  require(nu >= 0 && nu <= 1, "nu must lie in [0, 1]");
  return lmeasure_terms(chain, data).at(nu);
}

FitSummary summarize(const ChainSamples& chain, const ObservedData& data, const Partition<double>& partition,
                     double nu) {
  require(!chain.empty(), "chain has no stored draws");
  const int T = data.series();
  const Eigen::Index K = data.bins();
  const double L = static_cast<double>(chain.size());
  FitSummary s;
  s.nu = nu;
  s.mean = Eigen::MatrixXd::Zero(T, K);
  s.variance = Eigen::MatrixXd::Zero(T, K);
  s.anchor_mean = Eigen::VectorXd::Zero(K);
  s.anchor_variance = Eigen::VectorXd::Zero(K);
  for (const auto& d : chain.draws) {
    for (int t = 0; t < T; ++t) s.mean.row(t) += d.F[t].probs.transpose();
    s.anchor_mean += d.G.probs;
  }
  s.mean /= L;
  s.anchor_mean /= L;
  for (const auto& d : chain.draws) {
    for (int t = 0; t < T; ++t) s.variance.row(t) += (d.F[t].probs.transpose() - s.mean.row(t)).cwiseAbs2();
    s.anchor_variance += (d.G.probs - s.anchor_mean).cwiseAbs2();
  }
  s.variance /= L;
  s.anchor_variance /= L;
  s.cdf = s.mean;
  for (Eigen::Index k = 1; k < K; ++k) s.cdf.col(k) += s.cdf.col(k - 1);

  s.lpml = lpml(chain, data, partition);
  s.lmea = lmeasure(chain, data, nu);
  return s;
}

}  // namespace ddp
