#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "mixcat/eval.hpp"
#include "mixcat/persist.hpp"

namespace mixcat {
namespace {

TEST(Persist, RoundTripReproducesDecisionsBitForBit) {
  testing::TopicCorpusSpec spec;
  spec.documents = 80;
  const auto corpus = testing::planted_topic_corpus(spec);
  std::vector<TrainSettings> variants(5);
  variants[0].method = Method::wbm;
  variants[1].method = Method::cos;
  variants[2].method = Method::hcm;
  variants[2].gamma = 0.7;
  variants[3].method = Method::fmm;
  variants[3].gamma = 0.0;
  variants[4].method = Method::hcm;
  variants[4].top_ranks = HcmTopRanks{20, 20};
  for (const auto& s : variants) {
    std::vector<BinaryModel> models;
    for (const auto& c : corpus.categories) models.push_back(train_binary(corpus, c, s));
    std::stringstream buf;
    save_models(buf, models, Json{{"note", "test"}});
    const auto loaded = load_models(buf);
    ASSERT_EQ(loaded.size(), models.size());
    for (std::size_t i = 0; i < models.size(); ++i) {
      EXPECT_EQ(loaded[i].model, models[i].model) << to_string(s.method);
      for (const auto& doc : corpus.documents) {
        const auto a = binary_score(models[i], doc.tokens);
        const auto b = binary_score(loaded[i], doc.tokens);
        ASSERT_EQ(a.has_value(), b.has_value());
        if (a) {
          EXPECT_EQ(*a, *b);
        }
      }
    }
    std::stringstream again;
    save_models(again, loaded, Json{{"note", "test"}});
    std::stringstream first;
    save_models(first, models, Json{{"note", "test"}});
    EXPECT_EQ(again.str(), first.str());
  }
}

TEST(Persist, HeaderCarriesSchemaAndConfig) {
  std::stringstream buf;
  TrainSettings s;
  s.method = Method::wbm;
  save_models(buf, {train_binary(testing::tennis_soccer(), "c1", s)}, Json{{"command", "train"}});
  const auto doc = Json::parse(buf.str());
  EXPECT_EQ(doc.begin().key(), "schema_version");
  EXPECT_EQ(doc.at("config").at("command"), "train");
  EXPECT_EQ(doc.at("models")[0].at("settings").at("method"), "wbm");
}

TEST(Persist, RejectsForeignFiles) {
  std::stringstream bad("{\"format\": \"other\", \"schema_version\": 1}");
  EXPECT_THROW(load_models(bad), Error);
  std::stringstream version("{\"format\": \"mixcat-model\", \"schema_version\": 99, \"models\": []}");
  EXPECT_THROW(load_models(version), Error);
  std::stringstream junk("not json");
  EXPECT_THROW(load_models(junk), Error);
}

}  // namespace
}  // namespace mixcat
