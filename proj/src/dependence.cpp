#include "ddp/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <string>

#include "ddp/error.hpp"

namespace ddp {

using detail::require;

NeighborStructure::NeighborStructure(std::vector<IndexSet> forward) : forward_(std::move(forward)) {
  const int T = size();
  require(T >= 1, "neighbour structure needs at least one index");
  reversed_.assign(T, {});
  for (int t = 0; t < T; ++t) {
    auto& set = forward_[t];
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    for (int j : set) require(j >= 0 && j < T, "neighbour index out of range in set " + std::to_string(t + 1));
    require(std::binary_search(set.begin(), set.end(), t),
            "index " + std::to_string(t + 1) + " must belong to its own neighbour set");
    for (int j : set) reversed_[j].push_back(t);
  }
}

NeighborStructure::IndexSet NeighborStructure::shared(int t, int t2) const {
  IndexSet out;
  const auto& a = forward(t);
  const auto& b = forward(t2);
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

NeighborStructure moving_average(int T, int q) {
  require(T >= 1, "moving average needs T >= 1");
  require(q >= 0, "moving average order must be nonnegative");
  std::vector<NeighborStructure::IndexSet> sets(T);
  for (int t = 0; t < T; ++t)
    for (int j = std::max(0, t - q); j <= t; ++j) sets[t].push_back(j);
  return NeighborStructure(std::move(sets));
}

NeighborStructure spatial(int T, const std::vector<std::pair<int, int>>& edges) {
  require(T >= 1, "spatial structure needs T >= 1");
  std::vector<NeighborStructure::IndexSet> sets(T);
  for (int t = 0; t < T; ++t) sets[t].push_back(t);
  for (auto [a, b] : edges) {
    require(a >= 0 && a < T && b >= 0 && b < T, "spatial edge references an index out of range");
    sets[a].push_back(b);
    sets[b].push_back(a);
  }
  return NeighborStructure(std::move(sets));
}

NeighborStructure circular(int T, int q) {
  require(T >= 1, "circular structure needs T >= 1");
  require(q >= 0, "circular order must be nonnegative");
  std::vector<NeighborStructure::IndexSet> sets(T);
  for (int t = 0; t < T; ++t)
    for (int lag = 0; lag <= std::min(q, T - 1); ++lag) sets[t].push_back(((t - lag) % T + T) % T);
  return NeighborStructure(std::move(sets));
}

NeighborStructure custom(std::vector<NeighborStructure::IndexSet> sets) { return NeighborStructure(std::move(sets)); }

PrecisionParams::PrecisionParams(double c0_, std::vector<int> c_) : c0(c0_), c(std::move(c_)) {
  require(c0 > 0 && std::isfinite(c0), "c0 must be positive and finite");
  for (int ct : c) require(ct >= 0, "c_t must be nonnegative integers");
}

int PrecisionParams::mass(const NeighborStructure::IndexSet& set) const {
  int sum = 0;
  for (int j : set) sum += c.at(j);
  return sum;
}

int PrecisionParams::total() const { return std::accumulate(c.begin(), c.end(), 0); }

namespace {

void check_pair(int t, int t2, const PrecisionParams& params, const NeighborStructure& s) {
  require(params.series() == s.size(), "precision vector length must match the structure size");
  require(t >= 0 && t < s.size() && t2 >= 0 && t2 < s.size(), "index out of range");
  require(t != t2, "correlation of an index with itself is 1 and is not computed here");
}

}  // namespace

double corr_same_set(int t, int t2, const PrecisionParams& params, const NeighborStructure& s) {
  check_pair(t, t2, params, s);
  const double c0 = params.c0;
  const double shared = params.mass(s.shared(t, t2));
  const double a = params.mass(s.forward(t));
  const double b = params.mass(s.forward(t2));
  return (c0 * shared + a * b) / ((c0 + a) * (c0 + b));
}

double corr_cross_sets(int t, int t2, double mass_i, double mass_k, const PrecisionParams& params,
                       const NeighborStructure& s) {
  require(mass_i > 0 && mass_i < 1 && mass_k > 0 && mass_k < 1, "bin masses must lie in (0, 1)");
  require(mass_i + mass_k <= 1 + 1e-12, "disjoint bins cannot carry more than total mass");
  const double factor = std::sqrt(mass_i * mass_k / ((1 - mass_i) * (1 - mass_k)));
  return -factor * corr_same_set(t, t2, params, s);
}

double corr_stationary(int t, int t2, int c, double c0, const NeighborStructure& s) {
  require(t >= 0 && t < s.size() && t2 >= 0 && t2 < s.size() && t != t2, "invalid index pair");
  const double r_shared = static_cast<double>(s.shared(t, t2).size());
  const double r = static_cast<double>(s.forward(t).size());
  const double r2 = static_cast<double>(s.forward(t2).size());
  const double cc = c;
  return (r_shared * c0 * cc + r * r2 * cc * cc) / ((c0 + r * cc) * (c0 + r2 * cc));
}

}  // namespace ddp
