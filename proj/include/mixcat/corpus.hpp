#pragma once

// Labeled document collections.
//
// File format, one document per line (UTF-8, LF):
//
//     label[,label...] <TAB> token token ...
//
// Tokens are split on runs of whitespace. No case folding, stemming or
// stop-word removal is applied.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mixcat {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct LabeledDocument {
  std::vector<std::string> labels;
  std::vector<std::string> tokens;

  bool has_label(std::string_view c) const {
    return std::find(labels.begin(), labels.end(), c) != labels.end();
  }

  friend bool operator==(const LabeledDocument&, const LabeledDocument&) = default;
};

struct LabeledCorpus {
  std::vector<LabeledDocument> documents;
  /// Distinct labels in first-appearance order.
  std::vector<std::string> categories;

  bool has_category(std::string_view c) const {
    return std::find(categories.begin(), categories.end(), c) != categories.end();
  }

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& d : documents) n += d.tokens.size();
    return n;
  }

  /// Appends a document, registering new labels in first-appearance order.
  void add(LabeledDocument doc) {
    for (const auto& l : doc.labels)
      if (!has_category(l)) categories.push_back(l);
    documents.push_back(std::move(doc));
  }

  friend bool operator==(const LabeledCorpus&, const LabeledCorpus&) = default;
};

enum class LabelRequirement { required, optional };

namespace detail {

inline std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

/// Parses a corpus stream. Training corpora must carry at least one label per
/// line; test corpora may leave the label field empty.
inline LabeledCorpus parse_corpus(std::istream& in,
                                  LabelRequirement labels = LabelRequirement::required) {
  LabeledCorpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(lineno, "missing TAB between labels and tokens");

    LabeledDocument doc;
    std::string_view label_field(line.data(), tab);
    std::size_t start = 0;
    while (start <= label_field.size()) {
      auto comma = label_field.find(',', start);
      if (comma == std::string_view::npos) comma = label_field.size();
      auto label = label_field.substr(start, comma - start);
      while (!label.empty() && label.front() == ' ') label.remove_prefix(1);
      while (!label.empty() && label.back() == ' ') label.remove_suffix(1);
      if (!label.empty() && std::find(doc.labels.begin(), doc.labels.end(), label) == doc.labels.end())
        doc.labels.emplace_back(label);
      start = comma + 1;
    }
    if (doc.labels.empty() && labels == LabelRequirement::required)
      throw ParseError(lineno, "empty label list");

    doc.tokens = detail::split_whitespace(std::string_view(line).substr(tab + 1));
    corpus.add(std::move(doc));
  }
  return corpus;
}

inline LabeledCorpus parse_corpus(std::string_view text,
                                  LabelRequirement labels = LabelRequirement::required) {
  std::istringstream in{std::string(text)};
  return parse_corpus(in, labels);
}

inline void serialize_corpus(const LabeledCorpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus.documents) {
    for (std::size_t i = 0; i < doc.labels.size(); ++i) out << (i ? "," : "") << doc.labels[i];
    out << '\t';
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) out << (i ? " " : "") << doc.tokens[i];
    out << '\n';
  }
}

/// How a document carrying the tested category and other categories feeds
/// the complement pool.
enum class MultiLabelPolicy {
  positive_only,  ///< contributes to the category pool only
  both,           ///< contributes to both pools
};

struct TokenPools {
  std::vector<std::string> positive;
  std::vector<std::string> negative;
};

/// Splits the corpus tokens into the pool of category `c` and the pool of its
/// complement.
inline TokenPools complement_corpus(const LabeledCorpus& corpus, std::string_view c,
                                    MultiLabelPolicy policy = MultiLabelPolicy::positive_only) {
  if (!corpus.has_category(c)) throw Error("unknown category '" + std::string(c) + "'");
  TokenPools pools;
  for (const auto& doc : corpus.documents) {
    const bool pos = doc.has_label(c);
    const bool other = std::any_of(doc.labels.begin(), doc.labels.end(),
                                   [&](const std::string& l) { return l != c; });
    if (pos) pools.positive.insert(pools.positive.end(), doc.tokens.begin(), doc.tokens.end());
    if (!pos || (other && policy == MultiLabelPolicy::both))
      pools.negative.insert(pools.negative.end(), doc.tokens.begin(), doc.tokens.end());
  }
  return pools;
}

}  // namespace mixcat
