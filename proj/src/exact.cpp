#include <cmath>
#include <limits>
#include <string>

#include "ddp/gibbs.hpp"

namespace ddp {

namespace {

using detail::require;

/// All vectors of `bins` nonnegative integers summing to `total`.
std::vector<Eigen::VectorXi> compositions(int total, Eigen::Index bins) {
  std::vector<Eigen::VectorXi> out;
  Eigen::VectorXi current = Eigen::VectorXi::Zero(bins);
  auto recurse = [&](auto&& self, Eigen::Index k, int left) -> void {
    if (k == bins - 1) {
      current[k] = left;
      out.push_back(current);
      return;
    }
    for (int v = left; v >= 0; --v) {
      current[k] = v;
      self(self, k + 1, left - v);
    }
  };
  recurse(recurse, 0, total);
  return out;
}

double log_beta(const Eigen::VectorXd& a) {
  double s = 0;
  for (Eigen::Index k = 0; k < a.size(); ++k) s += std::lgamma(a[k]);
  return s - std::lgamma(a.sum());
}

}  // namespace

ExactPosterior exact_posterior_small(const ObservedData& data, const DdpModel& model, std::size_t max_configurations) {
  require(data.series() == model.series() && data.bins() == model.bins(), "data dimensions do not match the model");
  const int T = model.series();
  const Eigen::Index K = model.bins();

  std::vector<std::vector<Eigen::VectorXi>> options(T);
  double log_size = 0;
  for (int t = 0; t < T; ++t) {
    // C(c_t + K - 1, K - 1) feasible vectors for N_t
    log_size += std::lgamma(model.c(t) + K) - std::lgamma(model.c(t) + 1.0) - std::lgamma(static_cast<double>(K));
  }
  const double size_estimate = std::exp(log_size);
  if (size_estimate > static_cast<double>(max_configurations) + 0.5) {
    throw InvalidArgument("latent state space has about " + std::to_string(static_cast<long long>(size_estimate)) +
                          " joint configurations; exact enumeration is limited to " +
                          std::to_string(max_configurations));
  }
  for (int t = 0; t < T; ++t) options[t] = compositions(model.c(t), K);

  const Eigen::VectorXd prior_alpha = model.c0() * model.base;
  const double log_beta_prior = log_beta(prior_alpha);
  std::vector<CountMeasure> N(T);
  std::vector<std::size_t> pick(T, 0);

  std::vector<double> log_weights;
  std::vector<Eigen::MatrixXd> means, second;
  for (;;) {
    for (int t = 0; t < T; ++t) N[t] = CountMeasure(options[t][pick[t]], model.c(t));

    // p(N): product of multinomials with G integrated out
    Eigen::VectorXd pooled = prior_alpha;
    double lw = -log_beta_prior;
    for (int t = 0; t < T; ++t) {
      lw += std::lgamma(model.c(t) + 1.0);
      for (Eigen::Index k = 0; k < K; ++k) lw -= std::lgamma(N[t][k] + 1.0);
      pooled += N[t].counts.cast<double>();
    }
    lw += log_beta(pooled);

    // p(labels | N) with each F_t integrated out
    Eigen::MatrixXd m(T, K), s(T, K);
    for (int t = 0; t < T; ++t) {
      const Eigen::VectorXd alpha = prior_alpha + latent_sum(N, model.structure.forward(t));
      const Eigen::VectorXd post = alpha + data.counts.row(t).transpose().cast<double>();
      lw += log_beta(post) - log_beta(alpha);
      const double A = post.sum();
      m.row(t) = (post / A).transpose();
      s.row(t) = (post.array() * (post.array() + 1.0) / (A * (A + 1.0))).matrix().transpose();
    }
    log_weights.push_back(lw);
    means.push_back(std::move(m));
    second.push_back(std::move(s));

    int t = T - 1;
    while (t >= 0 && ++pick[t] == options[t].size()) pick[t--] = 0;
    if (t < 0) break;
  }

  double top = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) top = std::max(top, lw);
  double total = 0;
  for (double lw : log_weights) total += std::exp(lw - top);

  ExactPosterior out;
  out.configurations = log_weights.size();
  out.log_marginal_likelihood = top + std::log(total);
  out.mean = Eigen::MatrixXd::Zero(T, K);
  Eigen::MatrixXd raw_second = Eigen::MatrixXd::Zero(T, K);
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    const double w = std::exp(log_weights[i] - top) / total;
    out.mean += w * means[i];
    raw_second += w * second[i];
  }
  out.variance = raw_second - out.mean.cwiseProduct(out.mean);
  return out;
}

}  // namespace ddp
