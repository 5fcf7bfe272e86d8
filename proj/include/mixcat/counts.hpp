#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mixcat/corpus.hpp"

namespace mixcat {

using Count = std::int64_t;

/// Word frequencies per category, f(w|c_i), with marginals.
///
/// Words are kept in lexicographic order so every iteration over the
/// vocabulary is deterministic.
class FrequencyTable {
 public:
  FrequencyTable() = default;
  explicit FrequencyTable(std::vector<std::string> categories)
      : categories_(std::move(categories)), totals_(categories_.size(), 0) {}

  const std::vector<std::string>& categories() const noexcept { return categories_; }
  std::size_t category_count() const noexcept { return categories_.size(); }

  std::size_t category_index(std::string_view c) const {
    for (std::size_t i = 0; i < categories_.size(); ++i)
      if (categories_[i] == c) return i;
    throw Error("unknown category '" + std::string(c) + "'");
  }

  void add(std::size_t category, const std::string& word, Count n = 1) {
    auto& row = counts_[word];
    if (row.empty()) row.assign(categories_.size(), 0);
    row.at(category) += n;
    totals_.at(category) += n;
  }

  /// f(w|c_i); zero for unseen words.
  Count count(std::size_t category, const std::string& word) const {
    auto it = counts_.find(word);
    return it == counts_.end() ? 0 : it->second.at(category);
  }

  /// f(w) = sum over categories of f(w|c_i).
  Count total(const std::string& word) const {
    auto it = counts_.find(word);
    if (it == counts_.end()) return 0;
    Count s = 0;
    for (auto v : it->second) s += v;
    return s;
  }

  /// f(c_i).
  Count category_total(std::size_t category) const { return totals_.at(category); }

  bool contains(const std::string& word) const { return counts_.count(word) != 0; }

  /// Vocabulary words (nonzero total frequency) in lexicographic order.
  std::vector<std::string> vocabulary() const {
    std::vector<std::string> out;
    out.reserve(counts_.size());
    for (const auto& [w, row] : counts_) out.push_back(w);
    return out;
  }

  std::size_t vocabulary_size() const noexcept { return counts_.size(); }

  /// Per-word rows: word -> counts indexed by category.
  const std::map<std::string, std::vector<Count>>& rows() const noexcept { return counts_; }

  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;

 private:
  std::vector<std::string> categories_;
  std::map<std::string, std::vector<Count>> counts_;
  std::vector<Count> totals_;
};

/// Counts every token once for each category its document carries.
inline FrequencyTable count_frequencies(const LabeledCorpus& corpus) {
  FrequencyTable table(corpus.categories);
  for (const auto& doc : corpus.documents) {
    for (const auto& label : doc.labels) {
      const auto c = table.category_index(label);
      for (const auto& tok : doc.tokens) table.add(c, tok);
    }
  }
  return table;
}

/// Builds a table from explicit per-category token pools (e.g. a category and
/// its complement).
inline FrequencyTable count_pools(std::vector<std::string> names,
                                  std::span<const std::vector<std::string>> pools) {
  if (names.size() != pools.size()) throw Error("pool/category count mismatch");
  FrequencyTable table(std::move(names));
  for (std::size_t i = 0; i < pools.size(); ++i)
    for (const auto& tok : pools[i]) table.add(i, tok);
  return table;
}

}  // namespace mixcat
