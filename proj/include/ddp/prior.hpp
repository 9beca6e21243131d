#pragma once

#include <vector>

#include "ddp/model.hpp"
#include "ddp/rng.hpp"
#include "ddp/stats.hpp"

namespace ddp {

/// One joint draw (G, N_1..N_T, F_1..F_T) from the three-level hierarchy.
struct PriorDraw {
  SimplexMeasure G;
  std::vector<CountMeasure> N;
  std::vector<SimplexMeasure> F;
};

/// G ~ Dir(c0 F0); N_t | G ~ Mult(c_t, G); F_t | N ~ Dir(c0 F0 + sum_{j in d_t} N_j).
PriorDraw sample_prior(const DdpModel& model, RngStream& rng);

struct Moments {
  double mean = 0;
  double variance = 0;
};

/// Mean and variance of F_t(B) under its DP(c0, F0) marginal.
Moments marginal_moments(double mass, double c0);

/// Monte Carlo Corr{F_t(B_k), F_t'(B_k')} over independent prior draws,
/// with a grouped jackknife SE. Requires at least 1000 replicates.
Estimate mc_correlation(const DdpModel& model, int t, int t2, Eigen::Index k, Eigen::Index k2, int replicates,
                        RngStream& rng);

}  // namespace ddp
