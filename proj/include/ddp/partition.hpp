#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "ddp/error.hpp"

namespace ddp {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Equal-or-unequal width partition of the real line into K bins.
///
/// Bins are B_k = (b_{k-1}, b_k] for k = 0..K-1 (zero-based), with the first
/// bin extended to (-inf, b_1] and the last to (b_{K-1}, +inf) so that every
/// real number has exactly one bin.
template <typename Scalar = double>
class Partition {
 public:
  explicit Partition(Vector<Scalar> edges) : edges_(std::move(edges)) {
    detail::require(edges_.size() >= 3, "partition needs at least 2 bins");
    for (Eigen::Index i = 0; i < edges_.size(); ++i) {
      detail::require(std::isfinite(static_cast<double>(edges_[i])), "partition edges must be finite");
      if (i > 0) detail::require(edges_[i - 1] < edges_[i], "partition edges must be strictly increasing");
    }
  }

  Eigen::Index bins() const { return edges_.size() - 1; }
  const Vector<Scalar>& edges() const { return edges_; }
  Scalar left(Eigen::Index k) const { return edges_[k]; }
  Scalar right(Eigen::Index k) const { return edges_[k + 1]; }
  Scalar width(Eigen::Index k) const { return edges_[k + 1] - edges_[k]; }
  Scalar lower() const { return edges_[0]; }
  Scalar upper() const { return edges_[edges_.size() - 1]; }

  /// Zero-based bin index of x; tails are absorbed by the extreme bins.
  Eigen::Index locate(Scalar x) const {
    detail::require(std::isfinite(static_cast<double>(x)), "cannot locate a non-finite value");
    const auto* first = edges_.data() + 1;
    const auto* last = edges_.data() + edges_.size() - 1;
    // first interior edge >= x
    const auto* it = std::lower_bound(first, last, x);
    return static_cast<Eigen::Index>(it - first);
  }

 private:
  Vector<Scalar> edges_;
};

/// K equal-width bins spanning [x_min, x_max].
template <typename Scalar>
Partition<Scalar> build_partition(Scalar x_min, Scalar x_max, Eigen::Index bins) {
  detail::require(std::isfinite(static_cast<double>(x_min)) && std::isfinite(static_cast<double>(x_max)),
                  "partition bounds must be finite");
  detail::require(x_min < x_max, "partition needs x_min < x_max");
  detail::require(bins >= 2, "partition needs K >= 2");
  Vector<Scalar> edges(bins + 1);
  const Scalar step = (x_max - x_min) / static_cast<Scalar>(bins);
  for (Eigen::Index k = 0; k < bins; ++k) edges[k] = x_min + step * static_cast<Scalar>(k);
  edges[bins] = x_max;
  return Partition<Scalar>(std::move(edges));
}

template <typename Scalar>
Eigen::Index locate_bin(Scalar x, const Partition<Scalar>& p) {
  return p.locate(x);
}

/// Location and scale of a normal centring measure.
template <typename Scalar = double>
struct NormalBase {
  Scalar mu0 = 0;
  Scalar sigma0 = 1;
};

/// Midrange location and range/7 scale from the sample extremes.
template <typename Derived>
NormalBase<typename Derived::Scalar> default_base_params(const Eigen::DenseBase<Derived>& data) {
  using Scalar = typename Derived::Scalar;
  detail::require(data.size() >= 1, "cannot derive base parameters from empty data");
  const Scalar lo = data.minCoeff();
  const Scalar hi = data.maxCoeff();
  if (!(hi > lo)) throw DegenerateScale("data have zero range; sigma0 would be zero");
  return {(lo + hi) / 2, (hi - lo) / 7};
}

template <typename Scalar>
Scalar normal_cdf(Scalar z) {
  return Scalar(0.5) * std::erfc(-z / std::numbers::sqrt2_v<Scalar>);
}

/// F0(B_k) for F0 = N(mu0, sigma0^2); tail mass outside [b_0, b_K] is folded
/// into the first and last bins. Entries are renormalized to sum to one.
template <typename Scalar>
Vector<Scalar> base_masses(const NormalBase<Scalar>& base, const Partition<Scalar>& p) {
  detail::require(base.sigma0 > 0 && std::isfinite(static_cast<double>(base.sigma0)), "sigma0 must be positive");
  detail::require(std::isfinite(static_cast<double>(base.mu0)), "mu0 must be finite");
  const Eigen::Index K = p.bins();
  Vector<Scalar> masses(K);
  auto z = [&](Eigen::Index i) { return (p.edges()[i] - base.mu0) / base.sigma0; };
  for (Eigen::Index k = 0; k < K; ++k) {
    if (k == 0) {
      masses[k] = normal_cdf(z(1));
    } else if (k == K - 1) {
      masses[k] = normal_cdf(-z(K - 1));
    } else if (z(k) > 0) {
      // upper tail: difference of survival functions keeps precision
      masses[k] = normal_cdf(-z(k)) - normal_cdf(-z(k + 1));
    } else {
      masses[k] = normal_cdf(z(k + 1)) - normal_cdf(z(k));
    }
    if (!(masses[k] > 0)) {
      throw InvalidArgument("base measure assigns zero mass to bin " + std::to_string(k + 1));
    }
  }
  masses /= masses.sum();
  return masses;
}

}  // namespace ddp
