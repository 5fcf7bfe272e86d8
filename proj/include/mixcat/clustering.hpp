#pragma once

// Word clusters: the relative-frequency threshold scheme (soft, one cluster
// per category) and the pairwise top-L/top-M scheme (hard, three clusters).

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "mixcat/counts.hpp"

namespace mixcat {

using Rational = boost::rational<Count>;

enum class ClusterScheme { gamma, guthrie, custom };

class Clustering {
 public:
  Clustering() = default;

  /// Builds a clustering over `vocabulary`. Words in no cluster are discarded.
  static Clustering from_clusters(std::vector<std::string> vocabulary,
                                  std::vector<std::vector<std::string>> clusters,
                                  ClusterScheme scheme = ClusterScheme::custom) {
    Clustering c;
    c.scheme_ = scheme;
    std::sort(vocabulary.begin(), vocabulary.end());
    vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()), vocabulary.end());
    c.vocabulary_ = std::move(vocabulary);
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      auto& k = clusters[j];
      std::sort(k.begin(), k.end());
      k.erase(std::unique(k.begin(), k.end()), k.end());
      for (const auto& w : k) {
        if (!std::binary_search(c.vocabulary_.begin(), c.vocabulary_.end(), w))
          throw Error("cluster word '" + w + "' is not in the vocabulary");
        c.assignment_[w].push_back(j);
      }
    }
    c.clusters_ = std::move(clusters);
    for (const auto& w : c.vocabulary_)
      if (!c.assignment_.count(w)) c.discarded_.push_back(w);
    return c;
  }

  ClusterScheme scheme() const noexcept { return scheme_; }
  std::size_t cluster_count() const noexcept { return clusters_.size(); }
  const std::vector<std::string>& cluster(std::size_t j) const { return clusters_.at(j); }
  const std::vector<std::vector<std::string>>& clusters() const noexcept { return clusters_; }
  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }
  const std::vector<std::string>& discarded() const noexcept { return discarded_; }

  bool in_vocabulary(const std::string& w) const {
    return std::binary_search(vocabulary_.begin(), vocabulary_.end(), w);
  }
  bool is_discarded(const std::string& w) const {
    return std::binary_search(discarded_.begin(), discarded_.end(), w);
  }
  bool contains(std::size_t j, const std::string& w) const {
    const auto& k = clusters_.at(j);
    return std::binary_search(k.begin(), k.end(), w);
  }

  /// Cluster ids holding `w`; empty for discarded or unknown words.
  std::span<const std::size_t> clusters_of(const std::string& w) const {
    auto it = assignment_.find(w);
    if (it == assignment_.end()) return {};
    return it->second;
  }

  /// True when every assigned word belongs to exactly one cluster.
  bool is_hard() const {
    return std::all_of(assignment_.begin(), assignment_.end(),
                       [](const auto& kv) { return kv.second.size() == 1; });
  }

  friend bool operator==(const Clustering&, const Clustering&) = default;

 private:
  ClusterScheme scheme_ = ClusterScheme::custom;
  std::vector<std::string> vocabulary_;
  std::vector<std::vector<std::string>> clusters_;
  std::map<std::string, std::vector<std::size_t>> assignment_;
  std::vector<std::string> discarded_;
};

/// f(k_j|c_i) = sum of f(w|c_i) over w in k_j, indexed [category][cluster].
inline std::vector<std::vector<Count>> cluster_frequencies(const FrequencyTable& table,
                                                           const Clustering& clustering) {
  std::vector<std::vector<Count>> out(table.category_count(),
                                      std::vector<Count>(clustering.cluster_count(), 0));
  for (std::size_t j = 0; j < clustering.cluster_count(); ++j)
    for (const auto& w : clustering.cluster(j))
      for (std::size_t i = 0; i < table.category_count(); ++i) out[i][j] += table.count(i, w);
  return out;
}

/// One cluster per category: w joins k_i iff f(w|c_i)/f(w) > gamma and
/// f(w|c_i) > 0. Words joining no cluster are discarded.
inline Clustering soft_clusters(const FrequencyTable& table, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error("gamma must lie in [0, 1)");
  std::vector<std::vector<std::string>> clusters(table.category_count());
  for (const auto& [w, row] : table.rows()) {
    Count total = 0;
    for (auto v : row) total += v;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] > 0 && static_cast<double>(row[i]) / static_cast<double>(total) > gamma)
        clusters[i].push_back(w);
    }
  }
  return Clustering::from_clusters(table.vocabulary(), std::move(clusters), ClusterScheme::gamma);
}

namespace detail {

/// The `limit` most frequent words of a category; zero-frequency words are
/// never listed and ties break lexicographically.
inline std::set<std::string> top_words(const FrequencyTable& table, std::size_t category,
                                       std::size_t limit) {
  std::vector<std::pair<Count, std::string>> ranked;
  for (const auto& [w, row] : table.rows())
    if (row[category] > 0) ranked.emplace_back(row[category], w);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  if (ranked.size() > limit) ranked.resize(limit);
  std::set<std::string> out;
  for (auto& [n, w] : ranked) out.insert(std::move(w));
  return out;
}

}  // namespace detail

/// Pairwise hard clustering: k1 = topL(c1) \ topM(c2), k2 = topL(c2) \ topM(c1),
/// k3 = every other vocabulary word.
inline Clustering guthrie_clusters(const FrequencyTable& table, std::size_t top_l,
                                   std::size_t top_m) {
  if (table.category_count() != 2) throw Error("top-L/top-M clustering needs exactly two categories");
  if (top_l < 1 || top_m < 1) throw Error("L and M must be at least 1");
  const auto l1 = detail::top_words(table, 0, top_l);
  const auto l2 = detail::top_words(table, 1, top_l);
  const auto m1 = detail::top_words(table, 0, top_m);
  const auto m2 = detail::top_words(table, 1, top_m);
  std::vector<std::vector<std::string>> clusters(3);
  for (const auto& w : table.vocabulary()) {
    if (l1.count(w) && !m2.count(w))
      clusters[0].push_back(w);
    else if (l2.count(w) && !m1.count(w))
      clusters[1].push_back(w);
    else
      clusters[2].push_back(w);
  }
  return Clustering::from_clusters(table.vocabulary(), std::move(clusters), ClusterScheme::guthrie);
}

/// Word frequencies spread over the clusters holding each word.
struct DistributedFrequencies {
  /// f(w|k_j), only for w in k_j.
  std::vector<std::map<std::string, Rational>> per_cluster;
  /// f(k_j).
  std::vector<Rational> totals;

  Rational frequency(std::size_t j, const std::string& w) const {
    const auto& row = per_cluster.at(j);
    auto it = row.find(w);
    return it == row.end() ? Rational(0) : it->second;
  }
};

/// Requires cluster k_i to be related to category c_i. A word in one cluster
/// keeps its whole frequency there; a word in several clusters has f(w) split
/// in proportion to f(w|c_i) of the related categories.
inline DistributedFrequencies distribute_frequencies(const FrequencyTable& table,
                                                     const Clustering& clustering) {
  if (clustering.cluster_count() > table.category_count())
    throw Error("frequency distribution needs one cluster per category");
  DistributedFrequencies out;
  out.per_cluster.resize(clustering.cluster_count());
  out.totals.assign(clustering.cluster_count(), Rational(0));
  for (const auto& [w, row] : table.rows()) {
    const auto ids = clustering.clusters_of(w);
    if (ids.empty()) continue;
    Count total = 0;
    for (auto v : row) total += v;
    Count related = 0;
    for (auto j : ids) related += row[j];
    if (related <= 0) throw Error("word '" + w + "' assigned to clusters of categories where it never occurs");
    for (auto j : ids) {
      const Rational share = ids.size() == 1 ? Rational(total) : Rational(total * row[j], related);
      out.per_cluster[j][w] = share;
      out.totals[j] += share;
    }
  }
  return out;
}

}  // namespace mixcat
