#pragma once

// The four classifiers. Each model carries one parameter set per "side"
// (category hypothesis); the product surface trains two sides, a category c
// and its complement, but every likelihood routine handles any number.

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mixcat/clustering.hpp"
#include "mixcat/corpus.hpp"
#include "mixcat/counts.hpp"
#include "mixcat/estimation.hpp"

namespace mixcat {

/// Lower bound applied to per-token probabilities before taking the log.
inline constexpr double kProbabilityFloor = 1e-12;

/// Word-based histogram per side, ELE-smoothed over the training vocabulary.
struct WordModel {
  std::vector<std::string> sides;
  std::vector<std::string> vocabulary;
  std::vector<std::map<std::string, double>> word_probability;

  friend bool operator==(const WordModel&, const WordModel&) = default;
};

/// Hard clusters and an ELE-smoothed cluster histogram per side.
struct HardClusterModel {
  std::vector<std::string> sides;
  Clustering clustering;
  std::vector<SimplexVector> cluster_probability;

  friend bool operator==(const HardClusterModel&, const HardClusterModel&) = default;
};

/// P(w|c) = sum_j theta_j(c) P(w|k_j).
struct MixtureModel {
  std::vector<std::string> sides;
  Clustering clustering;
  ClusterWordDistribution word_distribution;
  std::vector<SimplexVector> theta;

  friend bool operator==(const MixtureModel&, const MixtureModel&) = default;
};

/// Raw word-frequency vector per side.
struct CosineModel {
  std::vector<std::string> sides;
  std::vector<std::map<std::string, Count>> frequency;

  friend bool operator==(const CosineModel&, const CosineModel&) = default;
};

struct HcmGamma {
  double gamma = 0.5;
};
struct HcmTopRanks {
  std::size_t top_l = 0;
  std::size_t top_m = 0;
};
using HcmScheme = std::variant<HcmGamma, HcmTopRanks>;

namespace detail {

inline void require_nonempty_sides(const FrequencyTable& table) {
  for (std::size_t i = 0; i < table.category_count(); ++i)
    if (table.category_total(i) == 0)
      throw Error("no training tokens for side '" + table.categories()[i] + "'");
}

}  // namespace detail

inline WordModel train_wbm(const FrequencyTable& table) {
  detail::require_nonempty_sides(table);
  WordModel m;
  m.sides = table.categories();
  m.vocabulary = table.vocabulary();
  const double v = static_cast<double>(m.vocabulary.size());
  for (std::size_t i = 0; i < table.category_count(); ++i) {
    const double denom = static_cast<double>(table.category_total(i)) + 0.5 * v;
    auto& row = m.word_probability.emplace_back();
    for (const auto& [w, counts] : table.rows())
      row.emplace(w, (static_cast<double>(counts[i]) + 0.5) / denom);
  }
  return m;
}

inline CosineModel train_cos(const FrequencyTable& table) {
  detail::require_nonempty_sides(table);
  CosineModel m;
  m.sides = table.categories();
  m.frequency.resize(table.category_count());
  for (const auto& [w, counts] : table.rows())
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (counts[i] > 0) m.frequency[i].emplace(w, counts[i]);
  return m;
}

inline Clustering hcm_clustering(const FrequencyTable& table, const HcmScheme& scheme) {
  if (const auto* g = std::get_if<HcmGamma>(&scheme)) {
    if (!(g->gamma >= 0.5)) throw Error("hard clustering needs gamma >= 0.5");
    return soft_clusters(table, g->gamma);
  }
  const auto& r = std::get<HcmTopRanks>(scheme);
  return guthrie_clusters(table, r.top_l, r.top_m);
}

inline HardClusterModel train_hcm(const FrequencyTable& table, const HcmScheme& scheme) {
  auto clustering = hcm_clustering(table, scheme);
  detail::require_nonempty_sides(table);
  HardClusterModel m;
  m.sides = table.categories();
  const auto freq = cluster_frequencies(table, clustering);
  for (const auto& row : freq) m.cluster_probability.push_back(ele_distribution(row));
  m.clustering = std::move(clustering);
  return m;
}

/// Soft clusters, distributed frequencies, MLE word distributions, then one
/// EM fit per side on that side's pool with discarded words removed.
/// `fits`, when given, receives the per-side EM results.
inline MixtureModel train_fmm(const FrequencyTable& table,
                              std::span<const std::vector<std::string>> pools, double gamma,
                              const EmConfig& em = {}, std::vector<EmResult>* fits = nullptr) {
  if (pools.size() != table.category_count()) throw Error("one token pool per side is required");
  em.validate();
  MixtureModel m;
  m.sides = table.categories();
  m.clustering = soft_clusters(table, gamma);
  m.word_distribution = mle_word_distributions(distribute_frequencies(table, m.clustering));
  if (fits) fits->clear();
  for (std::size_t i = 0; i < pools.size(); ++i) {
    std::vector<std::string> usable;
    for (const auto& t : pools[i])
      if (!m.clustering.clusters_of(t).empty()) usable.push_back(t);
    if (usable.empty()) throw Error("no usable training tokens for side '" + m.sides[i] + "'");
    auto fit = em_fit(m.word_distribution, usable, em);
    m.theta.push_back(fit.theta);
    if (fits) fits->push_back(std::move(fit));
  }
  return m;
}

/// Mixture with P(w|k_j) uniform over each hard cluster and theta equal to
/// the hard model's cluster histograms. Differs from the hard model's
/// likelihood by a side-independent constant.
inline MixtureModel mixture_from_hard_clusters(const HardClusterModel& hcm) {
  if (!hcm.clustering.is_hard()) throw Error("clusters overlap");
  std::vector<std::map<std::string, double>> rows(hcm.clustering.cluster_count());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const auto& k = hcm.clustering.cluster(j);
    for (const auto& w : k) rows[j].emplace(w, 1.0 / static_cast<double>(k.size()));
  }
  return MixtureModel{hcm.sides, hcm.clustering, ClusterWordDistribution(std::move(rows)),
                      hcm.cluster_probability};
}

/// Mixture with one cluster per side spanning the whole vocabulary,
/// P(w|k_j) = P(w|c_j), and indicator weights. Identical to the word model.
inline MixtureModel mixture_from_word_model(const WordModel& wbm) {
  const auto n = wbm.sides.size();
  auto clustering = Clustering::from_clusters(
      wbm.vocabulary, std::vector<std::vector<std::string>>(n, wbm.vocabulary));
  std::vector<SimplexVector> theta;
  for (std::size_t i = 0; i < n; ++i) theta.push_back(SimplexVector::indicator(n, i));
  return MixtureModel{wbm.sides, std::move(clustering),
                      ClusterWordDistribution(wbm.word_probability), std::move(theta)};
}

/// Natural-log likelihood of a document under every side, together with the
/// number of tokens that contributed evidence.
struct SideLikelihoods {
  std::vector<double> log_likelihood;
  std::size_t evidence = 0;
};

namespace detail {

inline double floored_log(double p) { return std::log(std::max(p, kProbabilityFloor)); }

}  // namespace detail

/// Out-of-vocabulary tokens are skipped.
inline SideLikelihoods side_log_likelihoods(const WordModel& m, std::span<const std::string> tokens) {
  SideLikelihoods r{std::vector<double>(m.sides.size(), 0.0), 0};
  for (const auto& t : tokens) {
    if (!std::binary_search(m.vocabulary.begin(), m.vocabulary.end(), t)) continue;
    ++r.evidence;
    for (std::size_t i = 0; i < m.sides.size(); ++i)
      r.log_likelihood[i] += detail::floored_log(m.word_probability[i].at(t));
  }
  return r;
}

/// Discarded and out-of-vocabulary tokens are skipped.
inline SideLikelihoods side_log_likelihoods(const HardClusterModel& m,
                                            std::span<const std::string> tokens) {
  SideLikelihoods r{std::vector<double>(m.sides.size(), 0.0), 0};
  for (const auto& t : tokens) {
    const auto ids = m.clustering.clusters_of(t);
    if (ids.empty()) continue;
    ++r.evidence;
    for (std::size_t i = 0; i < m.sides.size(); ++i)
      r.log_likelihood[i] += detail::floored_log(m.cluster_probability[i][ids.front()]);
  }
  return r;
}

/// Discarded and out-of-vocabulary tokens are skipped.
inline SideLikelihoods side_log_likelihoods(const MixtureModel& m,
                                            std::span<const std::string> tokens) {
  SideLikelihoods r{std::vector<double>(m.sides.size(), 0.0), 0};
  for (const auto& t : tokens) {
    const auto ids = m.clustering.clusters_of(t);
    if (ids.empty()) continue;
    ++r.evidence;
    for (std::size_t i = 0; i < m.sides.size(); ++i) {
      double p = 0.0;
      for (auto j : ids) p += m.theta[i][j] * m.word_distribution.probability(j, t);
      r.log_likelihood[i] += detail::floored_log(p);
    }
  }
  return r;
}

/// Likelihoods of a binary (category, complement) model.
struct DocLikelihood {
  double positive = 0.0;
  double negative = 0.0;
  std::size_t evidence = 0;
};

template <typename Model>
DocLikelihood doc_log_likelihood(const Model& model, std::span<const std::string> tokens) {
  if (model.sides.size() != 2) throw Error("binary model expected");
  const auto r = side_log_likelihoods(model, tokens);
  return {r.log_likelihood[0], r.log_likelihood[1], r.evidence};
}

enum class Outcome { positive, negative, unclassified };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::positive: return "positive";
    case Outcome::negative: return "negative";
    case Outcome::unclassified: return "unclassified";
  }
  return "?";
}

struct Decision {
  Outcome outcome = Outcome::unclassified;
  /// Normalized score; absent when the document carried no evidence.
  std::optional<double> score;
};

/// Threshold rule on a signed score: positive if score > eps, negative if
/// -score >= eps, unclassified otherwise. Exact ties go to the negative side.
inline Outcome decide_score(double score, double epsilon) {
  if (score > epsilon) return Outcome::positive;
  if (-score >= epsilon) return Outcome::negative;
  return Outcome::unclassified;
}

inline Decision decide(double log_pos, double log_neg, std::size_t evidence, double epsilon) {
  if (epsilon < 0.0) throw Error("epsilon must be non-negative");
  if (evidence == 0) return {};
  const double n = static_cast<double>(evidence);
  const double score = (log_pos - log_neg) / n;
  Outcome o = Outcome::unclassified;
  if (score > epsilon)
    o = Outcome::positive;
  else if ((log_neg - log_pos) / n >= epsilon)
    o = Outcome::negative;
  return {o, score};
}

/// cos(d, c) - cos(d, not c), with the document vector taken over all tokens.
inline std::optional<double> cosine_score(const CosineModel& m, std::span<const std::string> tokens) {
  if (m.sides.size() != 2) throw Error("binary model expected");
  if (tokens.empty()) return std::nullopt;
  std::map<std::string, double> doc;
  for (const auto& t : tokens) doc[t] += 1.0;
  double doc_norm = 0.0;
  for (const auto& [w, n] : doc) doc_norm += n * n;
  doc_norm = std::sqrt(doc_norm);
  double sim[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < 2; ++i) {
    double dot = 0.0, norm = 0.0;
    for (const auto& [w, f] : m.frequency[i]) {
      const double fv = static_cast<double>(f);
      norm += fv * fv;
      auto it = doc.find(w);
      if (it != doc.end()) dot += it->second * fv;
    }
    sim[i] = norm > 0.0 ? dot / (doc_norm * std::sqrt(norm)) : 0.0;
  }
  return sim[0] - sim[1];
}

inline Decision cosine_decide(const CosineModel& m, std::span<const std::string> tokens,
                              double epsilon) {
  if (epsilon < 0.0) throw Error("epsilon must be non-negative");
  const auto s = cosine_score(m, tokens);
  if (!s) return {};
  return {decide_score(*s, epsilon), s};
}

// ---------------------------------------------------------------------------
// Binary category-vs-complement training on a labeled corpus.

enum class Method { wbm, hcm, fmm, cos };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::wbm: return "wbm";
    case Method::hcm: return "hcm";
    case Method::fmm: return "fmm";
    case Method::cos: return "cos";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  if (s == "wbm") return Method::wbm;
  if (s == "hcm") return Method::hcm;
  if (s == "fmm") return Method::fmm;
  if (s == "cos") return Method::cos;
  throw Error("unknown method '" + std::string(s) + "'");
}

struct TrainSettings {
  Method method = Method::fmm;
  double gamma = 0.5;
  /// Top-L/top-M clustering for HCM when set; gamma scheme otherwise.
  std::optional<HcmTopRanks> top_ranks;
  EmConfig em;
  MultiLabelPolicy policy = MultiLabelPolicy::positive_only;

  void validate() const {
    em.validate();
    if (top_ranks) {
      if (method != Method::hcm) throw Error("top-L/top-M clustering applies to hcm only");
      if (top_ranks->top_l < 1 || top_ranks->top_m < 1) throw Error("L and M must be at least 1");
    } else if (method == Method::hcm || method == Method::fmm) {
      if (!(gamma >= 0.0 && gamma < 1.0)) throw Error("gamma must lie in [0, 1)");
      if (method == Method::hcm && gamma < 0.5) throw Error("hcm needs gamma >= 0.5");
    }
  }
};

using AnyModel = std::variant<WordModel, HardClusterModel, MixtureModel, CosineModel>;

struct BinaryModel {
  std::string category;
  TrainSettings settings;
  AnyModel model;
};

inline std::string complement_name(std::string_view category) { return "~" + std::string(category); }

struct BinaryTrainingSet {
  FrequencyTable table;
  std::vector<std::vector<std::string>> pools;
};

inline BinaryTrainingSet binary_training_set(const LabeledCorpus& corpus, std::string_view category,
                                             MultiLabelPolicy policy) {
  auto p = complement_corpus(corpus, category, policy);
  BinaryTrainingSet s;
  s.pools = {std::move(p.positive), std::move(p.negative)};
  s.table = count_pools({std::string(category), complement_name(category)}, s.pools);
  return s;
}

inline BinaryModel train_binary(const LabeledCorpus& corpus, std::string_view category,
                                const TrainSettings& settings,
                                std::vector<EmResult>* fits = nullptr) {
  settings.validate();
  const auto set = binary_training_set(corpus, category, settings.policy);
  BinaryModel out{std::string(category), settings, WordModel{}};
  switch (settings.method) {
    case Method::wbm: out.model = train_wbm(set.table); break;
    case Method::cos: out.model = train_cos(set.table); break;
    case Method::hcm:
      out.model = settings.top_ranks ? train_hcm(set.table, *settings.top_ranks)
                                     : train_hcm(set.table, HcmGamma{settings.gamma});
      break;
    case Method::fmm:
      out.model = train_fmm(set.table, set.pools, settings.gamma, settings.em, fits);
      break;
  }
  return out;
}

/// The signed score a binary model assigns to a document: the
/// per-evidence-token log-likelihood ratio, or the cosine difference.
inline std::optional<double> binary_score(const BinaryModel& m, std::span<const std::string> tokens) {
  return std::visit(
      [&](const auto& model) -> std::optional<double> {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, CosineModel>) {
          return cosine_score(model, tokens);
        } else {
          const auto l = doc_log_likelihood(model, tokens);
          if (l.evidence == 0) return std::nullopt;
          return (l.positive - l.negative) / static_cast<double>(l.evidence);
        }
      },
      m.model);
}

inline Decision classify(const BinaryModel& m, std::span<const std::string> tokens, double epsilon) {
  return std::visit(
      [&](const auto& model) -> Decision {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, CosineModel>) {
          return cosine_decide(model, tokens, epsilon);
        } else {
          const auto l = doc_log_likelihood(model, tokens);
          return decide(l.positive, l.negative, l.evidence, epsilon);
        }
      },
      m.model);
}

}  // namespace mixcat
