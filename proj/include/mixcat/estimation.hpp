#pragma once

// Parameter estimation: add-one-half (expected likelihood) smoothing for
// cluster histograms, maximum likelihood for within-cluster word
// distributions, and the exponentiated-gradient EM iteration for the mixture
// weights of a single category.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixcat/clustering.hpp"

namespace mixcat {

/// A point on the probability simplex.
class SimplexVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  SimplexVector() = default;
  explicit SimplexVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error("simplex vector must have at least one component");
    double sum = 0.0;
    for (double v : values_) {
      if (!(v >= -kSumTolerance && v <= 1.0 + kSumTolerance))
        throw Error("simplex component out of [0, 1]: " + std::to_string(v));
      sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
      throw Error("simplex components sum to " + std::to_string(sum));
  }

  static SimplexVector uniform(std::size_t m) {
    if (m == 0) throw Error("simplex vector must have at least one component");
    return SimplexVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
  }

  static SimplexVector indicator(std::size_t m, std::size_t hot) {
    std::vector<double> v(m, 0.0);
    v.at(hot) = 1.0;
    return SimplexVector(std::move(v));
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }
  const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const SimplexVector&, const SimplexVector&) = default;

 private:
  std::vector<double> values_;
};

/// P(w|k_j) for every cluster. A row is either empty (empty cluster) or a
/// normalized distribution over the cluster's words.
class ClusterWordDistribution {
 public:
  ClusterWordDistribution() = default;
  explicit ClusterWordDistribution(std::vector<std::map<std::string, double>> rows)
      : rows_(std::move(rows)) {
    for (std::size_t j = 0; j < rows_.size(); ++j) {
      if (rows_[j].empty()) continue;
      double sum = 0.0;
      for (const auto& [w, p] : rows_[j]) {
        if (!(p >= 0.0)) throw Error("negative word probability in cluster " + std::to_string(j));
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw Error("word distribution of cluster " + std::to_string(j) + " sums to " +
                    std::to_string(sum));
    }
  }

  std::size_t cluster_count() const noexcept { return rows_.size(); }
  const std::map<std::string, double>& row(std::size_t j) const { return rows_.at(j); }
  const std::vector<std::map<std::string, double>>& rows() const noexcept { return rows_; }

  double probability(std::size_t j, const std::string& w) const {
    const auto& r = rows_.at(j);
    auto it = r.find(w);
    return it == r.end() ? 0.0 : it->second;
  }

  friend bool operator==(const ClusterWordDistribution&, const ClusterWordDistribution&) = default;

 private:
  std::vector<std::map<std::string, double>> rows_;
};

struct EmConfig {
  double eta = 1.0;
  int max_iterations = 100;
  double tolerance = 1e-8;
  /// Uniform when unset.
  std::optional<SimplexVector> initial;

  void validate() const {
    if (!(eta > 0.0 && eta <= 1.0)) throw Error("eta must lie in (0, 1]");
    if (max_iterations < 1) throw Error("iteration count must be at least 1");
    if (!(tolerance > 0.0)) throw Error("tolerance must be positive");
  }
};

/// P(k_j|c) = (f(k_j|c) + 0.5) / (f(c) + 0.5 m), m = counts.size().
inline SimplexVector ele_distribution(std::span<const Count> counts) {
  if (counts.empty()) throw Error("ELE needs at least one cell");
  const double m = static_cast<double>(counts.size());
  double total = 0.0;
  for (auto c : counts) {
    if (c < 0) throw Error("negative frequency");
    total += static_cast<double>(c);
  }
  std::vector<double> p;
  p.reserve(counts.size());
  for (auto c : counts) p.push_back((static_cast<double>(c) + 0.5) / (total + 0.5 * m));
  return SimplexVector(std::move(p));
}

/// P(w|k_j) = f(w|k_j) / f(k_j).
inline std::map<std::string, double> mle_word_distribution(const DistributedFrequencies& freqs,
                                                           std::size_t cluster) {
  const auto& total = freqs.totals.at(cluster);
  if (total <= Rational(0)) throw Error("cluster " + std::to_string(cluster) + " is empty");
  std::map<std::string, double> out;
  for (const auto& [w, f] : freqs.per_cluster.at(cluster))
    out.emplace(w, boost::rational_cast<double>(f / total));
  return out;
}

/// MLE rows for every cluster; empty clusters yield empty rows.
inline ClusterWordDistribution mle_word_distributions(const DistributedFrequencies& freqs) {
  std::vector<std::map<std::string, double>> rows(freqs.totals.size());
  for (std::size_t j = 0; j < rows.size(); ++j)
    if (freqs.totals[j] > Rational(0)) rows[j] = mle_word_distribution(freqs, j);
  return ClusterWordDistribution(std::move(rows));
}

/// A token sequence aggregated by word type: each entry carries its
/// multiplicity and the column of component probabilities P_j(w).
class TokenProfile {
 public:
  struct Entry {
    std::string word;
    double count;
    std::vector<double> component;
  };

  TokenProfile(const ClusterWordDistribution& dists, std::span<const std::string> tokens) {
    if (tokens.empty()) throw Error("empty token sequence");
    std::map<std::string, double> bag;
    for (const auto& t : tokens) bag[t] += 1.0;
    size_ = static_cast<double>(tokens.size());
    components_ = dists.cluster_count();
    entries_.reserve(bag.size());
    for (auto& [w, n] : bag) {
      Entry e{w, n, std::vector<double>(components_)};
      for (std::size_t j = 0; j < components_; ++j) e.component[j] = dists.probability(j, w);
      entries_.push_back(std::move(e));
    }
  }

  double size() const noexcept { return size_; }
  std::size_t component_count() const noexcept { return components_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  double mixture(const SimplexVector& theta, const Entry& e) const {
    double p = 0.0;
    for (std::size_t j = 0; j < components_; ++j) p += theta[j] * e.component[j];
    if (!(p > 0.0)) throw Error("token '" + e.word + "' has zero probability under the mixture");
    return p;
  }

  /// (1/N) sum_t log sum_j theta_j P_j(w_t), natural log.
  double log_likelihood(const SimplexVector& theta) const {
    check(theta);
    double acc = 0.0;
    for (const auto& e : entries_) acc += e.count * std::log(mixture(theta, e));
    return acc / size_;
  }

  /// dL/dtheta_j = (1/N) sum_t P_j(w_t) / sum_k theta_k P_k(w_t).
  std::vector<double> gradient(const SimplexVector& theta) const {
    check(theta);
    std::vector<double> g(components_, 0.0);
    for (const auto& e : entries_) {
      const double scale = e.count / mixture(theta, e);
      for (std::size_t j = 0; j < components_; ++j) g[j] += scale * e.component[j];
    }
    for (auto& v : g) v /= size_;
    return g;
  }

 private:
  void check(const SimplexVector& theta) const {
    if (theta.size() != components_) throw Error("theta size does not match the cluster count");
  }

  double size_ = 0.0;
  std::size_t components_ = 0;
  std::vector<Entry> entries_;
};

inline double log_likelihood(const SimplexVector& theta, const ClusterWordDistribution& dists,
                             std::span<const std::string> tokens) {
  return TokenProfile(dists, tokens).log_likelihood(theta);
}

inline std::vector<double> gradient(const SimplexVector& theta, const ClusterWordDistribution& dists,
                                    std::span<const std::string> tokens) {
  return TokenProfile(dists, tokens).gradient(theta);
}

/// theta_j <- theta_j (eta (g_j - 1) + 1).
inline SimplexVector em_step(const SimplexVector& theta, std::span<const double> grad, double eta) {
  if (grad.size() != theta.size()) throw Error("gradient size does not match theta");
  if (!(eta > 0.0 && eta <= 1.0)) throw Error("eta must lie in (0, 1]");
  std::vector<double> next(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j)
    next[j] = theta[j] * (eta * (grad[j] - 1.0) + 1.0);
  return SimplexVector(std::move(next));
}

struct EmTracePoint {
  int iteration;
  double log_likelihood;
};

struct EmResult {
  SimplexVector theta;
  int iterations = 0;
  double log_likelihood = 0.0;
  /// Iteration 0 is the initial point.
  std::vector<EmTracePoint> trace;
};

/// Iterates em_step until the iteration budget is spent or the change in the
/// normalized log likelihood drops below the tolerance. With eta = 1 the
/// likelihood never decreases.
inline EmResult em_fit(const ClusterWordDistribution& dists, std::span<const std::string> tokens,
                       const EmConfig& config = {}) {
  config.validate();
  const TokenProfile profile(dists, tokens);
  EmResult r;
  r.theta = config.initial ? *config.initial : SimplexVector::uniform(dists.cluster_count());
  r.log_likelihood = profile.log_likelihood(r.theta);
  r.trace.push_back({0, r.log_likelihood});
  for (int l = 1; l <= config.max_iterations; ++l) {
    const auto g = profile.gradient(r.theta);
    auto next = em_step(r.theta, g, config.eta);
    const double ll = profile.log_likelihood(next);
    if (config.eta == 1.0 && ll < r.log_likelihood - 1e-12)
      throw std::logic_error("EM decreased the log likelihood");
    const double delta = std::abs(ll - r.log_likelihood);
    r.theta = std::move(next);
    r.log_likelihood = ll;
    r.iterations = l;
    r.trace.push_back({l, ll});
    if (delta < config.tolerance) break;
  }
  return r;
}

}  // namespace mixcat
