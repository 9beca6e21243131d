#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace ddp {

/// Index set {0..T-1} with forward neighbour sets d_t (each containing t)
/// and reversed sets r_t = { j : t in d_j }. Sets are sorted and unique.
class NeighborStructure {
 public:
  using IndexSet = std::vector<int>;

  /// Validates t in d_t and range of every member.
  explicit NeighborStructure(std::vector<IndexSet> forward);

  int size() const { return static_cast<int>(forward_.size()); }
  const IndexSet& forward(int t) const { return forward_.at(t); }
  const IndexSet& reversed(int t) const { return reversed_.at(t); }
  const std::vector<IndexSet>& forward_sets() const { return forward_; }

  /// d_t ∩ d_t'
  IndexSet shared(int t, int t2) const;

  bool operator==(const NeighborStructure& other) const { return forward_ == other.forward_; }

 private:
  std::vector<IndexSet> forward_;
  std::vector<IndexSet> reversed_;
};

/// Order-q moving average: d_t = {max(0, t-q), ..., t}.
NeighborStructure moving_average(int T, int q);

/// d_t = {t} plus graph neighbours; edges are zero-based index pairs.
NeighborStructure spatial(int T, const std::vector<std::pair<int, int>>& edges);

/// Moving average of order q with indices wrapped modulo T; circular(2)
/// gives d_1 = d_2 = {1, 2}.
NeighborStructure circular(int T, int q = 1);

NeighborStructure custom(std::vector<NeighborStructure::IndexSet> sets);

/// c0 > 0 and integer c_t >= 0 (c_t = 0 pins N_t to zero).
struct PrecisionParams {
  double c0 = 1.0;
  std::vector<int> c;

  PrecisionParams() = default;
  PrecisionParams(double c0_, std::vector<int> c_);

  static PrecisionParams constant(double c0, int c, int T) { return {c0, std::vector<int>(T, c)}; }

  int series() const { return static_cast<int>(c.size()); }
  /// sum of c_j over j in `set`
  int mass(const NeighborStructure::IndexSet& set) const;
  int total() const;
};

/// Corr{F_t(B), F_t'(B)} for t != t'.
double corr_same_set(int t, int t2, const PrecisionParams& params, const NeighborStructure& s);

/// Corr{F_t(B_i), F_t'(B_k)} for disjoint B_i, B_k with masses F0(B_i), F0(B_k).
double corr_cross_sets(int t, int t2, double mass_i, double mass_k, const PrecisionParams& params,
                       const NeighborStructure& s);

/// Same-set correlation under constant c_t = c, written in terms of set sizes.
double corr_stationary(int t, int t2, int c, double c0, const NeighborStructure& s);

}  // namespace ddp
