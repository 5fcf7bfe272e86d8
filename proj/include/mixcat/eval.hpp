#pragma once

// Micro-averaged precision and recall over (document, category) decisions,
// epsilon sweeps and break-even extraction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixcat/corpus.hpp"
#include "mixcat/models.hpp"

namespace mixcat {

struct PairDecision {
  std::size_t document;
  std::string category;
  Outcome outcome;
};

struct ContingencyCounts {
  Count tp = 0;
  Count fp = 0;
  Count fn = 0;
  Count tn = 0;

  friend bool operator==(const ContingencyCounts&, const ContingencyCounts&) = default;
};

struct PrecisionRecall {
  /// 1.0 when nothing was claimed positive; see `precision_defined`.
  double precision = 1.0;
  /// 1.0 when there is no gold-positive pair; see `recall_defined`.
  double recall = 1.0;
  bool precision_defined = false;
  bool recall_defined = false;
  ContingencyCounts counts;
};

/// Pools every (document, category) pair of `categories` over `gold`. Only
/// positive outcomes claim membership; unclassified pairs count as misses when
/// the document is gold-positive.
inline PrecisionRecall micro_pr(std::span<const PairDecision> decisions, const LabeledCorpus& gold,
                                std::span<const std::string> categories) {
  std::set<std::pair<std::size_t, std::string>> seen;
  const std::set<std::string> tested(categories.begin(), categories.end());
  PrecisionRecall r;
  auto& c = r.counts;
  for (const auto& d : decisions) {
    if (d.document >= gold.documents.size())
      throw Error("decision for unknown document " + std::to_string(d.document));
    if (!tested.count(d.category)) throw Error("decision for untested category '" + d.category + "'");
    if (!seen.emplace(d.document, d.category).second)
      throw Error("duplicate decision for document " + std::to_string(d.document));
    const bool truth = gold.documents[d.document].has_label(d.category);
    const bool claim = d.outcome == Outcome::positive;
    if (claim && truth) ++c.tp;
    else if (claim) ++c.fp;
    else if (truth) ++c.fn;
    else ++c.tn;
  }
  if (seen.size() != gold.documents.size() * tested.size())
    throw Error("decisions do not cover every (document, category) pair");
  if (c.tp + c.fp > 0) {
    r.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    r.precision_defined = true;
  }
  if (c.tp + c.fn > 0) {
    r.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    r.recall_defined = true;
  }
  return r;
}

struct PrPoint {
  double epsilon = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  bool precision_defined = true;
};

struct PrCurve {
  std::vector<PrPoint> points;
};

/// 0, 0.005, ..., 0.5.
inline std::vector<double> default_epsilon_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 100; ++i) g.push_back(i * 0.005);
  return g;
}

inline void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error("empty epsilon grid");
  if (grid.front() < 0.0) throw Error("epsilon grid must be non-negative");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw Error("epsilon grid must be strictly increasing");
}

/// Per-pair scores of a set of binary models on a test corpus, computed once
/// and re-thresholded for every epsilon.
struct ScoredPair {
  std::size_t document;
  std::string category;
  std::optional<double> score;
};

inline std::vector<ScoredPair> score_pairs(std::span<const BinaryModel> models,
                                           const LabeledCorpus& test) {
  std::vector<ScoredPair> out;
  out.reserve(models.size() * test.documents.size());
  for (const auto& m : models)
    for (std::size_t d = 0; d < test.documents.size(); ++d)
      out.push_back({d, m.category, binary_score(m, test.documents[d].tokens)});
  return out;
}

inline std::vector<PairDecision> threshold_pairs(std::span<const ScoredPair> scored, double epsilon) {
  std::vector<PairDecision> out;
  out.reserve(scored.size());
  for (const auto& s : scored)
    out.push_back({s.document, s.category,
                   s.score ? decide_score(*s.score, epsilon) : Outcome::unclassified});
  return out;
}

inline PrCurve sweep(std::span<const BinaryModel> models, const LabeledCorpus& test,
                     std::span<const double> grid) {
  validate_grid(grid);
  std::vector<std::string> categories;
  for (const auto& m : models) categories.push_back(m.category);
  const auto scored = score_pairs(models, test);
  PrCurve curve;
  for (double eps : grid) {
    const auto pr = micro_pr(threshold_pairs(scored, eps), test, categories);
    curve.points.push_back({eps, pr.precision, pr.recall, pr.precision_defined});
  }
  return curve;
}

struct BreakEven {
  double value = 0.0;
  /// No point or crossing had precision equal to recall; `value` is the
  /// midpoint of the closest point.
  bool extrapolated = false;
};

/// Where precision meets recall: an exact point, else a linear interpolation
/// across the first sign change of (precision - recall), else the midpoint of
/// the point with the smallest gap.
inline BreakEven break_even(const PrCurve& curve) {
  const auto& p = curve.points;
  if (p.empty()) throw Error("empty precision-recall curve");
  for (const auto& pt : p)
    if (pt.precision == pt.recall) return {pt.precision, false};
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double d0 = p[i].precision - p[i].recall;
    const double d1 = p[i + 1].precision - p[i + 1].recall;
    if ((d0 > 0.0) != (d1 > 0.0)) {
      const double t = d0 / (d0 - d1);
      return {p[i].precision + t * (p[i + 1].precision - p[i].precision), false};
    }
  }
  const auto best = std::min_element(p.begin(), p.end(), [](const PrPoint& a, const PrPoint& b) {
    return std::abs(a.precision - a.recall) < std::abs(b.precision - b.recall);
  });
  return {(best->precision + best->recall) / 2.0, true};
}

}  // namespace mixcat
