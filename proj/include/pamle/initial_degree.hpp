#pragma once

#include <map>
#include <vector>

#include "pamle/rng.hpp"

namespace pamle {

/// Distribution of the number of edges a new vertex brings with it.
/// Support is a finite subset of {1, 2, ...}; probabilities are validated
/// to sum to one within 1e-12. Mean and second moment are precomputed.
class InitialDegreeModel {
 public:
  static InitialDegreeModel degenerate(int m);
  static InitialDegreeModel uniform_range(int lo, int hi);
  static InitialDegreeModel uniform_on(const std::vector<int>& support);
  /// P(k) proportional to success*(1-success)^(k-1) on {1..k_max}, renormalized.
  static InitialDegreeModel truncated_geometric(double success, int k_max);
  static InitialDegreeModel from_pmf(const std::map<int, double>& pmf);

  /// r_k; zero outside the support.
  double pmf(int k) const {
    return (k >= 0 && k <= support_max_) ? pmf_[static_cast<std::size_t>(k)] : 0.0;
  }
  /// r_{>k} = P(m > k); equals 1 for k < support_min and 0 for k >= support_max.
  double tail(int k) const {
    if (k < 0) return 1.0;
    if (k >= support_max_) return 0.0;
    return tail_[static_cast<std::size_t>(k)];
  }

  double mean() const { return mu_; }
  double second_moment() const { return mu2_; }
  double variance() const { return mu2_ - mu_ * mu_; }
  int support_min() const { return support_min_; }
  int support_max() const { return support_max_; }
  bool is_degenerate() const { return support_min_ == support_max_; }
  int degenerate_value() const;

  /// Dense pmf indexed by k (index 0 unused, always 0).
  const std::vector<double>& dense_pmf() const { return pmf_; }

  int sample(RngStream& rng) const;

  bool operator==(const InitialDegreeModel& other) const {
    return pmf_ == other.pmf_;
  }

 private:
  InitialDegreeModel() = default;
  void finalize();  // validates and fills tails, cdf, moments

  std::vector<double> pmf_;   // pmf_[k], k = 0..support_max
  std::vector<double> tail_;  // tail_[k] = r_{>k}, k = 0..support_max-1
  std::vector<double> cdf_;   // cumulative over the support, for sampling
  std::vector<int> support_;  // degrees with positive mass, ascending
  double mu_ = 0.0;
  double mu2_ = 0.0;
  int support_min_ = 0;
  int support_max_ = 0;
};

}  // namespace pamle
