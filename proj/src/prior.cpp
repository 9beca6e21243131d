#include "ddp/prior.hpp"

#include <cmath>
#include <string>

#include "ddp/error.hpp"

namespace ddp {

using detail::require;

DdpModel::DdpModel(PrecisionParams p, NeighborStructure s, Eigen::VectorXd b)
    : params(std::move(p)), structure(std::move(s)), base(std::move(b)) {
  require(params.series() == structure.size(), "precision vector has " + std::to_string(params.series()) +
                                                   " entries but the structure has " +
                                                   std::to_string(structure.size()) + " indices");
  require(base.size() >= 1, "base measure must have at least one bin");
  for (Eigen::Index k = 0; k < base.size(); ++k)
    require(base[k] > 0 && std::isfinite(base[k]), "base mass of bin " + std::to_string(k + 1) + " must be positive");
  require(std::abs(base.sum() - 1.0) < 1e-9, "base masses must sum to one");
}

Eigen::VectorXd latent_sum(const std::vector<CountMeasure>& N, const NeighborStructure::IndexSet& set) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(N.front().size());
  for (int j : set) sum += N[j].counts.cast<double>();
  return sum;
}

PriorDraw sample_prior(const DdpModel& model, RngStream& rng) {
  const int T = model.series();
  const Eigen::VectorXd prior_alpha = model.c0() * model.base;
  PriorDraw draw;
  draw.G = sample_dirichlet(prior_alpha, rng);
  draw.N.reserve(T);
  for (int t = 0; t < T; ++t) draw.N.push_back(sample_multinomial(model.c(t), draw.G, rng));
  draw.F.reserve(T);
  for (int t = 0; t < T; ++t)
    draw.F.push_back(sample_dirichlet(prior_alpha + latent_sum(draw.N, model.structure.forward(t)), rng));
  return draw;
}

Moments marginal_moments(double mass, double c0) {
  require(mass > 0 && mass < 1, "bin mass must lie in (0, 1)");
  require(c0 > 0, "c0 must be positive");
  return {mass, mass * (1 - mass) / (c0 + 1)};
}

Estimate mc_correlation(const DdpModel& model, int t, int t2, Eigen::Index k, Eigen::Index k2, int replicates,
                        RngStream& rng) {
  require(replicates >= 1000, "mc_correlation needs at least 1000 replicates");
  require(t >= 0 && t < model.series() && t2 >= 0 && t2 < model.series(), "index out of range");
  require(k >= 0 && k < model.bins() && k2 >= 0 && k2 < model.bins(), "bin out of range");
  std::vector<double> x(replicates), y(replicates);
  for (int r = 0; r < replicates; ++r) {
    const PriorDraw d = sample_prior(model, rng);
    x[r] = d.F[t][k];
    y[r] = d.F[t2][k2];
  }
  return jackknife_correlation(x, y);
}

}  // namespace ddp
