#pragma once

#include <Eigen/Dense>

#include <vector>

#include "ddp/dependence.hpp"
#include "ddp/measures.hpp"

namespace ddp {

/// The DDP(c, F0) prior projected on a partition: precisions, neighbour
/// structure and base masses F0(B_k).
struct DdpModel {
  PrecisionParams params;
  NeighborStructure structure;
  Eigen::VectorXd base;

  /// Throws when sizes disagree or a base mass is not strictly positive.
  DdpModel(PrecisionParams p, NeighborStructure s, Eigen::VectorXd b);

  int series() const { return structure.size(); }
  Eigen::Index bins() const { return base.size(); }
  double c0() const { return params.c0; }
  int c(int t) const { return params.c[t]; }
};

/// sum_{j in set} N_j(B_k) as a real vector.
Eigen::VectorXd latent_sum(const std::vector<CountMeasure>& N, const NeighborStructure::IndexSet& set);

}  // namespace ddp
