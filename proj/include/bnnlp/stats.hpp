#ifndef BNNLP_STATS_HPP
#define BNNLP_STATS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "bnnlp/errors.hpp"

namespace bnnlp {

/// Quantile by linear interpolation between order statistics:
/// position p (n - 1) in the sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw InvalidInput("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("quantile: probability outside [0, 1]");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> sample, double p) {
  std::sort(sample.begin(), sample.end());
  return quantile_sorted(sample, p);
}

template <typename Derived>
double quantile(const Eigen::DenseBase<Derived>& x, double p) {
  std::vector<double> v(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) v[static_cast<std::size_t>(i)] = x.derived().coeff(i);
  return quantile(std::move(v), p);
}

/// Standard error of the mean of a correlated series by non-overlapping
/// batch means.
inline double batch_means_se(const Eigen::Ref<const Eigen::VectorXd>& x, int n_batches = 50) {
  const Eigen::Index n = x.size();
  const Eigen::Index b = n / n_batches;
  if (b < 1) throw InvalidInput("batch_means_se: too few samples");
  Eigen::VectorXd means(n_batches);
  for (int i = 0; i < n_batches; ++i) means[i] = x.segment(i * b, b).mean();
  const double m = means.mean();
  const double var = (means.array() - m).square().sum() / (n_batches - 1);
  return std::sqrt(var / n_batches);
}

}  // namespace bnnlp

#endif  // BNNLP_STATS_HPP
