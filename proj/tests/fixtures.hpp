#pragma once

// Shared fixtures and independent oracles for the test suites. Nothing here
// calls into the estimation or likelihood code it is used to check.

#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mixcat/mixcat.hpp"

namespace mixcat::testing {

/// Two categories whose pooled word frequencies are
///
///          racket stroke shot goal kick ball
///     c1     4      1     2    1    0    2
///     c2     0      0     0    3    2    2
inline const char* kTennisSoccer =
    "c1\tracket racket stroke shot\n"
    "c1\tracket shot ball goal racket ball\n"
    "c2\tgoal goal kick ball\n"
    "c2\tgoal kick ball\n";

inline LabeledCorpus tennis_soccer() { return parse_corpus(kTennisSoccer); }

inline const std::vector<std::string> kExampleDocument{"kick", "goal", "goal", "ball"};

/// Token pools of the two categories in sorted order.
inline const std::vector<std::string> kTennisPool{"racket", "racket", "racket", "racket", "stroke",
                                                  "shot",   "shot",   "goal",   "ball",   "ball"};
inline const std::vector<std::string> kSoccerPool{"goal", "goal", "goal", "kick",
                                                  "kick", "ball", "ball"};

/// Word distributions of the two soft clusters built at gamma = 0.4, written
/// out from the distributed frequencies (4,1,2,_,_,2) and (_,_,_,4,2,2).
inline std::map<std::string, double> tennis_cluster() {
  return {{"racket", 4.0 / 9}, {"stroke", 1.0 / 9}, {"shot", 2.0 / 9}, {"ball", 2.0 / 9}};
}
inline std::map<std::string, double> soccer_cluster() {
  return {{"goal", 0.5}, {"kick", 0.25}, {"ball", 0.25}};
}

/// Brute-force (1/N) sum_t log sum_j theta_j P_j(w_t), one token at a time.
inline double brute_log_likelihood(const std::vector<double>& theta,
                                   const std::vector<std::map<std::string, double>>& clusters,
                                   const std::vector<std::string>& tokens) {
  double acc = 0.0;
  for (const auto& t : tokens) {
    double p = 0.0;
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      auto it = clusters[j].find(t);
      if (it != clusters[j].end()) p += theta[j] * it->second;
    }
    acc += std::log(p);
  }
  return acc / static_cast<double>(tokens.size());
}

/// Maximizes the two-component likelihood over theta_1 in {0, 1/steps, ..., 1}.
inline double grid_search_theta1(const std::vector<std::map<std::string, double>>& clusters,
                                 const std::vector<std::string>& tokens, int steps = 1000) {
  double best = -INFINITY, arg = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    double v = brute_log_likelihood({t, 1.0 - t}, clusters, tokens);
    if (std::isnan(v)) v = -INFINITY;
    if (v > best) {
      best = v;
      arg = t;
    }
  }
  return arg;
}

/// Words "w0".."w{n-1}".
inline std::vector<std::string> word_list(std::size_t n, const std::string& prefix = "w") {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

/// A small random labeled corpus: up to `max_categories` categories, up to
/// `max_words` word types, every category carrying at least one token.
inline LabeledCorpus random_corpus(std::mt19937& rng, std::size_t max_categories = 4,
                                   std::size_t max_words = 30) {
  std::uniform_int_distribution<std::size_t> ncat(2, max_categories);
  std::uniform_int_distribution<std::size_t> nword(2, max_words);
  const auto n = ncat(rng);
  const auto vocab = word_list(nword(rng));
  std::uniform_int_distribution<std::size_t> pick_word(0, vocab.size() - 1);
  std::uniform_int_distribution<std::size_t> doc_len(1, 12);
  std::uniform_int_distribution<std::size_t> docs_per_cat(1, 4);
  LabeledCorpus corpus;
  for (std::size_t c = 0; c < n; ++c) {
    // category-specific skew so clusters are not trivially empty
    const auto favourite = pick_word(rng);
    const auto k = docs_per_cat(rng);
    for (std::size_t d = 0; d < k; ++d) {
      LabeledDocument doc{{"c" + std::to_string(c)}, {}};
      const auto len = doc_len(rng);
      for (std::size_t t = 0; t < len; ++t)
        doc.tokens.push_back(vocab[(rng() % 3 == 0) ? favourite : pick_word(rng)]);
      corpus.add(std::move(doc));
    }
  }
  return corpus;
}

/// Random token sequence over `vocab`.
inline std::vector<std::string> random_tokens(std::mt19937& rng, const std::vector<std::string>& vocab,
                                              std::size_t len) {
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(vocab[pick(rng)]);
  return out;
}

/// A random instance of the mixture-weight problem: m strictly positive
/// component distributions over a shared vocabulary and a token sequence.
struct MixtureInstance {
  ClusterWordDistribution dists;
  std::vector<std::string> tokens;
  SimplexVector theta;
};

inline MixtureInstance random_mixture_instance(std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> nm(2, 5), nv(2, 12), nt(1, 40);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const auto m = nm(rng);
  const auto vocab = word_list(nv(rng));
  std::vector<std::map<std::string, double>> rows(m);
  for (auto& row : rows) {
    double s = 0.0;
    for (const auto& w : vocab) s += row[w] = u(rng);
    for (auto& [w, p] : row) p /= s;
  }
  std::vector<double> theta(m);
  double s = 0.0;
  for (auto& t : theta) s += t = u(rng);
  for (auto& t : theta) t /= s;
  return {ClusterWordDistribution(std::move(rows)), random_tokens(rng, vocab, nt(rng)),
          SimplexVector(std::move(theta))};
}

/// Labeled documents drawn from planted topics. Each category owns a block
/// of topic words; documents mix their own topic words with shared filler.
struct TopicCorpusSpec {
  std::size_t categories = 4;
  std::size_t topic_words = 15;
  std::size_t shared_words = 60;
  std::size_t documents = 200;
  std::size_t doc_length = 30;
  double topic_share = 0.12;
  double multi_label_rate = 0.1;
  unsigned seed = 20240611;
};

inline LabeledCorpus planted_topic_corpus(const TopicCorpusSpec& spec) {
  std::mt19937 rng(spec.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_cat(0, spec.categories - 1);
  std::uniform_int_distribution<std::size_t> pick_topic(0, spec.topic_words - 1);
  std::uniform_int_distribution<std::size_t> pick_shared(0, spec.shared_words - 1);
  LabeledCorpus corpus;
  for (std::size_t d = 0; d < spec.documents; ++d) {
    std::vector<std::size_t> cats{pick_cat(rng)};
    if (u(rng) < spec.multi_label_rate) {
      const auto extra = pick_cat(rng);
      if (extra != cats[0]) cats.push_back(extra);
    }
    LabeledDocument doc;
    for (auto c : cats) doc.labels.push_back("topic" + std::to_string(c));
    for (std::size_t t = 0; t < spec.doc_length; ++t) {
      if (u(rng) < spec.topic_share) {
        const auto c = cats[t % cats.size()];
        doc.tokens.push_back("t" + std::to_string(c) + "_" + std::to_string(pick_topic(rng)));
      } else {
        doc.tokens.push_back("s" + std::to_string(pick_shared(rng)));
      }
    }
    corpus.add(std::move(doc));
  }
  return corpus;
}

}  // namespace mixcat::testing
