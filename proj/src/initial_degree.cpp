#include "pamle/initial_degree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pamle {

InitialDegreeModel InitialDegreeModel::degenerate(int m) {
  if (m < 1) throw std::invalid_argument("degenerate initial degree must be >= 1");
  InitialDegreeModel r;
  r.pmf_.assign(static_cast<std::size_t>(m) + 1, 0.0);
  r.pmf_[static_cast<std::size_t>(m)] = 1.0;
  r.finalize();
  return r;
}

InitialDegreeModel InitialDegreeModel::uniform_range(int lo, int hi) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("uniform_range: need 1 <= lo <= hi");
  InitialDegreeModel r;
  r.pmf_.assign(static_cast<std::size_t>(hi) + 1, 0.0);
  const double w = 1.0 / static_cast<double>(hi - lo + 1);
  for (int k = lo; k <= hi; ++k) r.pmf_[static_cast<std::size_t>(k)] = w;
  r.finalize();
  return r;
}

InitialDegreeModel InitialDegreeModel::uniform_on(const std::vector<int>& support) {
  if (support.empty()) throw std::invalid_argument("uniform_on: empty support");
  std::map<int, double> pmf;
  const double w = 1.0 / static_cast<double>(support.size());
  for (int k : support) {
    if (pmf.count(k)) throw std::invalid_argument("uniform_on: duplicate support point");
    pmf[k] = w;
  }
  return from_pmf(pmf);
}

InitialDegreeModel InitialDegreeModel::truncated_geometric(double success, int k_max) {
  if (!(success > 0.0 && success < 1.0)) throw std::invalid_argument("truncated_geometric: success must be in (0,1)");
  if (k_max < 1) throw std::invalid_argument("truncated_geometric: k_max must be >= 1");
  std::map<int, double> pmf;
  double mass = 0.0;
  double term = success;
  for (int k = 1; k <= k_max; ++k) {
    pmf[k] = term;
    mass += term;
    term *= (1.0 - success);
  }
  for (auto& [k, p] : pmf) p /= mass;
  return from_pmf(pmf);
}

InitialDegreeModel InitialDegreeModel::from_pmf(const std::map<int, double>& pmf) {
  if (pmf.empty()) throw std::invalid_argument("initial degree pmf is empty");
  const int k_max = pmf.rbegin()->first;
  InitialDegreeModel r;
  r.pmf_.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (const auto& [k, p] : pmf) {
    if (k < 1) throw std::invalid_argument("initial degree support must be contained in {1,2,...}");
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("initial degree pmf entries must be nonnegative");
    r.pmf_[static_cast<std::size_t>(k)] = p;
  }
  r.finalize();
  return r;
}

void InitialDegreeModel::finalize() {
  const int k_max = static_cast<int>(pmf_.size()) - 1;
  long double total = 0.0L, mu = 0.0L, mu2 = 0.0L;
  support_.clear();
  for (int k = 1; k <= k_max; ++k) {
    const double p = pmf_[static_cast<std::size_t>(k)];
    if (p > 0.0) support_.push_back(k);
    total += p;
    mu += static_cast<long double>(k) * p;
    mu2 += static_cast<long double>(k) * k * p;
  }
  if (support_.empty()) throw std::invalid_argument("initial degree pmf has no mass");
  if (std::fabs(static_cast<double>(total) - 1.0) > 1e-12)
    throw std::invalid_argument("initial degree pmf does not sum to one");
  support_min_ = support_.front();
  support_max_ = support_.back();
  mu_ = static_cast<double>(mu);
  mu2_ = static_cast<double>(mu2);

  tail_.assign(static_cast<std::size_t>(support_max_), 0.0);
  long double acc = 0.0L;
  for (int k = support_max_ - 1; k >= 0; --k) {
    acc += pmf_[static_cast<std::size_t>(k) + 1];
    tail_[static_cast<std::size_t>(k)] = static_cast<double>(acc);
  }

  cdf_.clear();
  cdf_.reserve(support_.size());
  long double c = 0.0L;
  for (int k : support_) {
    c += pmf_[static_cast<std::size_t>(k)];
    cdf_.push_back(static_cast<double>(c));
  }
  cdf_.back() = 1.0;
}

int InitialDegreeModel::degenerate_value() const {
  if (!is_degenerate()) throw std::logic_error("degenerate_value on a non-degenerate model");
  return support_min_;
}

int InitialDegreeModel::sample(RngStream& rng) const {
  if (is_degenerate()) return support_min_;
  const double u = rng.next_double();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t idx = std::min(static_cast<std::size_t>(it - cdf_.begin()), support_.size() - 1);
  return support_[idx];
}

}  // namespace pamle
