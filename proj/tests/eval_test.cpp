#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "mixcat/eval.hpp"

namespace mixcat {
namespace {

using Words = std::vector<std::string>;

LabeledCorpus gold_corpus() { return parse_corpus("a\tx\nb\ty\na,b\tz\n"); }

TEST(MicroPr, AllCorrect) {
  const auto gold = gold_corpus();
  const Words cats{"a", "b"};
  std::vector<PairDecision> d{{0, "a", Outcome::positive}, {0, "b", Outcome::negative},
                              {1, "a", Outcome::negative}, {1, "b", Outcome::positive},
                              {2, "a", Outcome::positive}, {2, "b", Outcome::positive}};
  const auto r = micro_pr(d, gold, cats);
  EXPECT_DOUBLE_EQ(r.precision, 1.0);
  EXPECT_DOUBLE_EQ(r.recall, 1.0);
  EXPECT_TRUE(r.precision_defined);
}

TEST(MicroPr, AllUnclassified) {
  const auto gold = gold_corpus();
  const Words cats{"a", "b"};
  std::vector<PairDecision> d;
  for (std::size_t i = 0; i < 3; ++i)
    for (const auto& c : cats) d.push_back({i, c, Outcome::unclassified});
  const auto r = micro_pr(d, gold, cats);
  EXPECT_DOUBLE_EQ(r.recall, 0.0);
  EXPECT_FALSE(r.precision_defined);
  EXPECT_EQ(r.counts.fn, 4);
}

TEST(MicroPr, HandContingencyTable) {
  // 3 hits, 1 false alarm, 1 miss, 1 correct rejection
  const auto gold = gold_corpus();
  const Words cats{"a", "b"};
  std::vector<PairDecision> d{{0, "a", Outcome::positive}, {0, "b", Outcome::positive},
                              {1, "a", Outcome::negative}, {1, "b", Outcome::positive},
                              {2, "a", Outcome::positive}, {2, "b", Outcome::unclassified}};
  const auto r = micro_pr(d, gold, cats);
  EXPECT_EQ(r.counts, (ContingencyCounts{3, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(r.precision, 0.75);
  EXPECT_DOUBLE_EQ(r.recall, 0.75);
  std::shuffle(d.begin(), d.end(), std::mt19937(1));
  EXPECT_EQ(micro_pr(d, gold, cats).counts, r.counts);
}

TEST(MicroPr, Errors) {
  const auto gold = gold_corpus();
  const Words cats{"a"};
  std::vector<PairDecision> unknown_doc{{7, "a", Outcome::positive}};
  EXPECT_THROW(micro_pr(unknown_doc, gold, cats), Error);
  std::vector<PairDecision> unknown_cat{{0, "q", Outcome::positive}};
  EXPECT_THROW(micro_pr(unknown_cat, gold, cats), Error);
  std::vector<PairDecision> partial{{0, "a", Outcome::positive}};
  EXPECT_THROW(micro_pr(partial, gold, cats), Error);
}

TEST(BreakEven, ExactPoint) {
  PrCurve c{{{0.0, 0.5, 0.9}, {0.1, 0.62, 0.62}, {0.2, 0.8, 0.3}}};
  const auto be = break_even(c);
  EXPECT_DOUBLE_EQ(be.value, 0.62);
  EXPECT_FALSE(be.extrapolated);
}

TEST(BreakEven, SymmetricCrossingIsMidpoint) {
  PrCurve c{{{0.0, 0.6, 0.5}, {0.1, 0.5, 0.6}}};
  const auto be = break_even(c);
  EXPECT_NEAR(be.value, 0.55, 1e-15);
  EXPECT_FALSE(be.extrapolated);
}

TEST(BreakEven, NoCrossingIsExtrapolated) {
  PrCurve c{{{0.0, 0.4, 0.8}, {0.1, 0.4, 0.8}, {0.2, 0.4, 0.8}}};
  const auto be = break_even(c);
  EXPECT_NEAR(be.value, 0.6, 1e-15);
  EXPECT_TRUE(be.extrapolated);
  EXPECT_THROW(break_even(PrCurve{}), Error);
}

TEST(BreakEven, LiesBetweenBracketingValues) {
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    PrCurve c;
    for (int k = 0; k < 6; ++k) c.points.push_back({k * 0.1, u(rng), u(rng)});
    const auto be = break_even(c);
    if (be.extrapolated) continue;
    double lo = 1.0, hi = 0.0;
    for (std::size_t k = 0; k + 1 < c.points.size(); ++k) {
      const auto& p = c.points[k];
      const auto& q = c.points[k + 1];
      if ((p.precision - p.recall > 0) != (q.precision - q.recall > 0)) {
        lo = std::min({p.precision, p.recall, q.precision, q.recall});
        hi = std::max({p.precision, p.recall, q.precision, q.recall});
        break;
      }
    }
    EXPECT_GE(be.value, lo - 1e-12);
    EXPECT_LE(be.value, hi + 1e-12);
  }
}

std::vector<BinaryModel> train_all(const LabeledCorpus& train, Method method, double gamma) {
  TrainSettings s;
  s.method = method;
  s.gamma = gamma;
  std::vector<BinaryModel> out;
  for (const auto& c : train.categories) out.push_back(train_binary(train, c, s));
  return out;
}

TEST(Sweep, SinglePointGrid) {
  const auto corpus = testing::tennis_soccer();
  const auto models = train_all(corpus, Method::fmm, 0.4);
  const std::vector<double> grid{0.0};
  const auto curve = sweep(models, corpus, grid);
  ASSERT_EQ(curve.points.size(), 1u);
  EXPECT_EQ(curve.points[0].epsilon, 0.0);
}

TEST(Sweep, GridValidation) {
  const auto corpus = testing::tennis_soccer();
  const auto models = train_all(corpus, Method::wbm, 0.0);
  EXPECT_THROW(sweep(models, corpus, std::vector<double>{}), Error);
  EXPECT_THROW(sweep(models, corpus, std::vector<double>{0.0, 0.0}), Error);
}

TEST(Sweep, SeparableCorpusIsPerfect) {
  const auto corpus = parse_corpus("a\tx x y\na\ty x\nb\tz w w\nb\tw z\n");
  const auto models = train_all(corpus, Method::fmm, 0.5);
  const auto curve = sweep(models, corpus, std::vector<double>{0.0, 0.01, 0.05});
  for (const auto& p : curve.points) {
    EXPECT_DOUBLE_EQ(p.precision, 1.0);
    EXPECT_DOUBLE_EQ(p.recall, 1.0);
  }
  EXPECT_DOUBLE_EQ(break_even(curve).value, 1.0);
}

TEST(Sweep, RecallNonIncreasingAndGoldPositivesFixed) {
  testing::TopicCorpusSpec spec;
  spec.documents = 60;
  spec.topic_share = 0.15;
  const auto corpus = testing::planted_topic_corpus(spec);
  for (auto method : {Method::wbm, Method::fmm, Method::cos}) {
    const auto models = train_all(corpus, method, 0.4);
    const auto grid = default_epsilon_grid();
    const auto scored = score_pairs(models, corpus);
    std::vector<std::string> cats;
    for (const auto& m : models) cats.push_back(m.category);
    Count gold_pos = -1;
    double prev_recall = 2.0;
    for (double eps : grid) {
      const auto r = micro_pr(threshold_pairs(scored, eps), corpus, cats);
      if (gold_pos < 0) gold_pos = r.counts.tp + r.counts.fn;
      EXPECT_EQ(r.counts.tp + r.counts.fn, gold_pos);
      EXPECT_LE(r.recall, prev_recall);
      prev_recall = r.recall;
    }
  }
}

}  // namespace
}  // namespace mixcat
