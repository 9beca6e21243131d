#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>

#include "ddp/error.hpp"
#include "ddp/partition.hpp"
#include "ddp/rng.hpp"

namespace ddp {

/// Probability vector over K bins, e.g. (F(B_1), ..., F(B_K)).
struct SimplexMeasure {
  Eigen::VectorXd probs;

  SimplexMeasure() = default;
  explicit SimplexMeasure(Eigen::VectorXd p) : probs(std::move(p)) {}

  Eigen::Index size() const { return probs.size(); }
  double operator[](Eigen::Index k) const { return probs[k]; }

  bool valid(double tol = 1e-10) const {
    return probs.size() > 0 && (probs.array() >= 0).all() && std::abs(probs.sum() - 1.0) <= tol;
  }
};

/// Nonnegative counts over K bins summing to a fixed total, e.g. N(B_k).
struct CountMeasure {
  Eigen::VectorXi counts;
  int total = 0;

  CountMeasure() = default;
  CountMeasure(Eigen::VectorXi n, int c) : counts(std::move(n)), total(c) {}

  static CountMeasure zeros(Eigen::Index bins) { return {Eigen::VectorXi::Zero(bins), 0}; }

  Eigen::Index size() const { return counts.size(); }
  int operator[](Eigen::Index k) const { return counts[k]; }

  bool valid() const { return total >= 0 && (counts.array() >= 0).all() && counts.sum() == total; }
};

/// Truncated stick-breaking draw: sum(weights) + residual == 1.
struct StickBreakingDraw {
  Eigen::VectorXd weights;
  Eigen::VectorXd atoms;
  double residual = 1.0;
};

namespace detail {

/// log of a Gamma(shape, 1) variate. Shapes below one use the
/// Gamma(a) = Gamma(a + 1) * U^{1/a} boost so tiny shapes do not underflow.
inline double log_gamma_variate(double shape, RngStream& rng) {
  if (shape >= 1.0) {
    std::gamma_distribution<double> gamma(shape, 1.0);
    return std::log(gamma(rng.engine()));
  }
  std::gamma_distribution<double> gamma(shape + 1.0, 1.0);
  const double boosted = std::log(gamma(rng.engine()));
  return boosted + std::log(rng.uniform()) / shape;
}

inline double beta_variate(double a, double b, RngStream& rng) {
  const double x = log_gamma_variate(a, rng);
  const double y = log_gamma_variate(b, rng);
  const double m = std::max(x, y);
  const double ex = std::exp(x - m);
  return ex / (ex + std::exp(y - m));
}

}  // namespace detail

/// Dirichlet(alpha) draw via normalized gamma variates, normalized in log space.
template <typename Derived>
SimplexMeasure sample_dirichlet(const Eigen::MatrixBase<Derived>& alpha, RngStream& rng) {
  const Eigen::Index K = alpha.size();
  detail::require(K >= 1, "Dirichlet needs at least one component");
  for (Eigen::Index k = 0; k < K; ++k) {
    const double a = static_cast<double>(alpha(k));
    detail::require(a > 0 && std::isfinite(a), "Dirichlet parameters must be positive and finite");
  }
  if (K == 1) return SimplexMeasure(Eigen::VectorXd::Ones(1));

  Eigen::VectorXd logs(K);
  for (Eigen::Index k = 0; k < K; ++k) logs[k] = detail::log_gamma_variate(static_cast<double>(alpha(k)), rng);
  const double top = logs.maxCoeff();
  Eigen::VectorXd p = (logs.array() - top).exp().matrix();
  p /= p.sum();
  return SimplexMeasure(std::move(p));
}

/// Multinomial(c; p) by sequential conditional binomials.
inline CountMeasure sample_multinomial(int trials, const SimplexMeasure& p, RngStream& rng) {
  detail::require(trials >= 0, "multinomial needs a nonnegative number of trials");
  detail::require(p.valid(1e-8), "multinomial probabilities must form a simplex");
  const Eigen::Index K = p.size();
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(K);
  int remaining = trials;
  double mass_left = 1.0;
  for (Eigen::Index k = 0; k + 1 < K && remaining > 0; ++k) {
    double q = mass_left > 0 ? p[k] / mass_left : 0.0;
    q = std::clamp(q, 0.0, 1.0);
    std::binomial_distribution<int> binom(remaining, q);
    counts[k] = binom(rng.engine());
    remaining -= counts[k];
    mass_left -= p[k];
  }
  counts[K - 1] += remaining;
  return {std::move(counts), trials};
}

/// Dirichlet-multinomial draw with G ~ Dirichlet(c0 * base) integrated out.
/// Runs the Blackwell-MacQueen urn over bins, one ball at a time.
template <typename Derived>
CountMeasure sample_dirichlet_multinomial(int trials, double c0, const Eigen::MatrixBase<Derived>& base,
                                          RngStream& rng) {
  detail::require(trials >= 0, "Dirichlet-multinomial needs a nonnegative number of trials");
  detail::require(c0 > 0 && std::isfinite(c0), "c0 must be positive");
  const Eigen::Index K = base.size();
  detail::require(K >= 1, "base must be nonempty");
  Eigen::VectorXd weights = c0 * base.template cast<double>();
  detail::require((weights.array() >= 0).all(), "base masses must be nonnegative");
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(K);
  for (int ball = 0; ball < trials; ++ball) {
    double u = rng.uniform() * (c0 + ball);
    Eigen::Index k = 0;
    for (; k + 1 < K; ++k) {
      u -= weights[k];
      if (u <= 0) break;
    }
    ++counts[k];
    weights[k] += 1.0;
  }
  return {std::move(counts), trials};
}

/// First J sticks of a DP(c0, F0) draw; atoms come from `quantile(U)`.
template <typename Quantile>
StickBreakingDraw sample_stick_breaking(double c0, Quantile&& quantile, Eigen::Index truncation, RngStream& rng) {
  detail::require(c0 > 0 && std::isfinite(c0), "c0 must be positive");
  detail::require(truncation >= 1, "truncation must be at least 1");
  StickBreakingDraw draw;
  draw.weights.resize(truncation);
  draw.atoms.resize(truncation);
  double remaining = 1.0;
  for (Eigen::Index j = 0; j < truncation; ++j) {
    // v ~ Beta(1, c0) by inversion
    const double v = -std::expm1(std::log(rng.uniform()) / c0);
    draw.weights[j] = remaining * v;
    remaining *= 1.0 - v;
    draw.atoms[j] = quantile(rng.uniform());
  }
  draw.residual = remaining;
  return draw;
}

}  // namespace ddp
