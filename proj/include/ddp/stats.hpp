#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ddp/error.hpp"

namespace ddp {

/// Point estimate with its Monte Carlo standard error.
struct Estimate {
  double value = 0;
  double se = 0;

  /// |value - target| <= sigmas * se
  bool agrees_with(double target, double sigmas = 3.0) const { return std::abs(value - target) <= sigmas * se; }
};

/// Two estimates agree when their difference is within `sigmas` combined SEs.
inline bool agree(const Estimate& a, const Estimate& b, double sigmas = 3.0) {
  return std::abs(a.value - b.value) <= sigmas * std::sqrt(a.se * a.se + b.se * b.se);
}

inline double sample_mean(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Mean of iid draws.
inline Estimate mean_estimate(std::span<const double> x) {
  detail::require(x.size() >= 2, "need at least two draws");
  const double n = static_cast<double>(x.size());
  const double m = sample_mean(x);
  double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / (n - 1) / n)};
}

/// Unbiased variance of iid draws; SE from the fourth central moment.
inline Estimate variance_estimate(std::span<const double> x) {
  detail::require(x.size() >= 4, "need at least four draws");
  const double n = static_cast<double>(x.size());
  const double m = sample_mean(x);
  double m2 = 0, m4 = 0;
  for (double v : x) {
    const double d = (v - m) * (v - m);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  return {m2 * n / (n - 1), std::sqrt(std::max(0.0, m4 - m2 * m2) / n)};
}

/// Mean of a correlated sequence (MCMC output) with a batch-means SE.
inline Estimate batch_means_estimate(std::span<const double> x, std::size_t batches = 50) {
  detail::require(x.size() >= 2 * batches && batches >= 2, "sequence too short for batch means");
  const std::size_t len = x.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) means[b] = sample_mean(x.subspan(b * len, len));
  const Estimate of_means = mean_estimate(means);
  return {sample_mean(x.first(len * batches)), of_means.se};
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double mx = sample_mean(x), my = sample_mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

/// Pearson correlation with a delete-a-group jackknife SE.
inline Estimate jackknife_correlation(std::span<const double> x, std::span<const double> y, std::size_t groups = 50) {
  detail::require(x.size() == y.size(), "correlation needs paired samples");
  detail::require(x.size() >= 2 * groups && groups >= 2, "too few pairs for the jackknife");
  const std::size_t n = x.size();
  const std::size_t len = n / groups;
  const std::size_t used = len * groups;

  // accumulated sums let each leave-one-group-out estimate cost O(1)
  struct Sums {
    double x = 0, y = 0, xx = 0, yy = 0, xy = 0, n = 0;
  };
  auto corr_of = [](const Sums& s) {
    const double cxx = s.xx - s.x * s.x / s.n;
    const double cyy = s.yy - s.y * s.y / s.n;
    const double cxy = s.xy - s.x * s.y / s.n;
    if (cxx <= 0 || cyy <= 0) return 0.0;
    return cxy / std::sqrt(cxx * cyy);
  };
  // centre first for numerical stability
  const double mx = sample_mean(x.first(used)), my = sample_mean(y.first(used));
  std::vector<Sums> parts(groups);
  Sums all;
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t i = g * len; i < (g + 1) * len; ++i) {
      const double a = x[i] - mx, b = y[i] - my;
      parts[g].x += a;
      parts[g].y += b;
      parts[g].xx += a * a;
      parts[g].yy += b * b;
      parts[g].xy += a * b;
      parts[g].n += 1;
    }
    all.x += parts[g].x;
    all.y += parts[g].y;
    all.xx += parts[g].xx;
    all.yy += parts[g].yy;
    all.xy += parts[g].xy;
    all.n += parts[g].n;
  }
  const double full = corr_of(all);
  std::vector<double> loo(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    Sums s = all;
    s.x -= parts[g].x;
    s.y -= parts[g].y;
    s.xx -= parts[g].xx;
    s.yy -= parts[g].yy;
    s.xy -= parts[g].xy;
    s.n -= parts[g].n;
    loo[g] = corr_of(s);
  }
  const double loo_mean = sample_mean(loo);
  double ss = 0;
  for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
  const double G = static_cast<double>(groups);
  return {full, std::sqrt((G - 1) / G * ss)};
}

}  // namespace ddp
