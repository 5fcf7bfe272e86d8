#pragma once

// JSON model files. Doubles are written in shortest round-trip form, so a
// reloaded model scores documents bit-identically.

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixcat/models.hpp"

namespace mixcat {

using Json = nlohmann::ordered_json;

inline constexpr int kModelSchemaVersion = 1;

namespace detail {

inline const char* to_string(ClusterScheme s) {
  switch (s) {
    case ClusterScheme::gamma: return "gamma";
    case ClusterScheme::guthrie: return "top-ranks";
    case ClusterScheme::custom: return "custom";
  }
  return "?";
}

inline ClusterScheme parse_scheme(const std::string& s) {
  if (s == "gamma") return ClusterScheme::gamma;
  if (s == "top-ranks") return ClusterScheme::guthrie;
  if (s == "custom") return ClusterScheme::custom;
  throw Error("unknown cluster scheme '" + s + "'");
}

inline const char* to_string(MultiLabelPolicy p) {
  return p == MultiLabelPolicy::both ? "both" : "positive-only";
}

}  // namespace detail

inline MultiLabelPolicy parse_policy(const std::string& s) {
  if (s == "positive-only") return MultiLabelPolicy::positive_only;
  if (s == "both") return MultiLabelPolicy::both;
  throw Error("unknown multi-label policy '" + s + "'");
}

inline std::string policy_name(MultiLabelPolicy p) { return detail::to_string(p); }

namespace detail {

inline Json to_json(const Clustering& c) {
  return Json{{"scheme", to_string(c.scheme())}, {"vocabulary", c.vocabulary()}, {"clusters", c.clusters()}};
}

inline Clustering clustering_from_json(const Json& j) {
  return Clustering::from_clusters(j.at("vocabulary").get<std::vector<std::string>>(),
                                   j.at("clusters").get<std::vector<std::vector<std::string>>>(),
                                   parse_scheme(j.at("scheme").get<std::string>()));
}

template <typename Map>
Json map_to_json(const Map& m) {
  Json out = Json::object();
  for (const auto& [k, v] : m) out[k] = v;
  return out;
}

template <typename V>
std::map<std::string, V> map_from_json(const Json& j) {
  std::map<std::string, V> out;
  for (const auto& [k, v] : j.items()) out.emplace(k, v.template get<V>());
  return out;
}

inline Json simplex_list(const std::vector<SimplexVector>& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(s.values());
  return out;
}

inline std::vector<SimplexVector> simplex_list_from_json(const Json& j) {
  std::vector<SimplexVector> out;
  for (const auto& row : j) out.emplace_back(row.get<std::vector<double>>());
  return out;
}

inline Json settings_to_json(const TrainSettings& s) {
  Json j{{"method", to_string(s.method)}};
  if (s.top_ranks) {
    j["top_l"] = s.top_ranks->top_l;
    j["top_m"] = s.top_ranks->top_m;
  } else {
    j["gamma"] = s.gamma;
  }
  j["eta"] = s.em.eta;
  j["iterations"] = s.em.max_iterations;
  j["tolerance"] = s.em.tolerance;
  j["multi_label"] = to_string(s.policy);
  return j;
}

inline TrainSettings settings_from_json(const Json& j) {
  TrainSettings s;
  s.method = parse_method(j.at("method").get<std::string>());
  if (j.contains("top_l"))
    s.top_ranks = HcmTopRanks{j.at("top_l").get<std::size_t>(), j.at("top_m").get<std::size_t>()};
  else
    s.gamma = j.at("gamma").get<double>();
  s.em.eta = j.at("eta").get<double>();
  s.em.max_iterations = j.at("iterations").get<int>();
  s.em.tolerance = j.at("tolerance").get<double>();
  s.policy = parse_policy(j.at("multi_label").get<std::string>());
  return s;
}

}  // namespace detail

inline Json to_json(const BinaryModel& m) {
  Json j{{"category", m.category}, {"settings", detail::settings_to_json(m.settings)}};
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        j["sides"] = model.sides;
        if constexpr (std::is_same_v<T, WordModel>) {
          j["vocabulary"] = model.vocabulary;
          Json rows = Json::array();
          for (const auto& r : model.word_probability) rows.push_back(detail::map_to_json(r));
          j["word_probability"] = std::move(rows);
        } else if constexpr (std::is_same_v<T, HardClusterModel>) {
          j["clustering"] = detail::to_json(model.clustering);
          j["cluster_probability"] = detail::simplex_list(model.cluster_probability);
        } else if constexpr (std::is_same_v<T, MixtureModel>) {
          j["clustering"] = detail::to_json(model.clustering);
          Json rows = Json::array();
          for (const auto& r : model.word_distribution.rows()) rows.push_back(detail::map_to_json(r));
          j["word_distribution"] = std::move(rows);
          j["theta"] = detail::simplex_list(model.theta);
        } else {
          Json rows = Json::array();
          for (const auto& r : model.frequency) rows.push_back(detail::map_to_json(r));
          j["frequency"] = std::move(rows);
        }
      },
      m.model);
  return j;
}

inline BinaryModel binary_model_from_json(const Json& j) {
  BinaryModel m{j.at("category").get<std::string>(), detail::settings_from_json(j.at("settings")),
                WordModel{}};
  const auto sides = j.at("sides").get<std::vector<std::string>>();
  switch (m.settings.method) {
    case Method::wbm: {
      WordModel w{sides, j.at("vocabulary").get<std::vector<std::string>>(), {}};
      for (const auto& r : j.at("word_probability"))
        w.word_probability.push_back(detail::map_from_json<double>(r));
      m.model = std::move(w);
      break;
    }
    case Method::hcm:
      m.model = HardClusterModel{sides, detail::clustering_from_json(j.at("clustering")),
                                 detail::simplex_list_from_json(j.at("cluster_probability"))};
      break;
    case Method::fmm: {
      std::vector<std::map<std::string, double>> rows;
      for (const auto& r : j.at("word_distribution")) rows.push_back(detail::map_from_json<double>(r));
      m.model = MixtureModel{sides, detail::clustering_from_json(j.at("clustering")),
                             ClusterWordDistribution(std::move(rows)),
                             detail::simplex_list_from_json(j.at("theta"))};
      break;
    }
    case Method::cos: {
      CosineModel c{sides, {}};
      for (const auto& r : j.at("frequency")) c.frequency.push_back(detail::map_from_json<Count>(r));
      m.model = std::move(c);
      break;
    }
  }
  return m;
}

/// Writes a model file holding one binary model per category. `config` is
/// echoed verbatim as the file header.
inline void save_models(std::ostream& out, const std::vector<BinaryModel>& models,
                        const Json& config = Json::object()) {
  Json doc{{"schema_version", kModelSchemaVersion}, {"format", "mixcat-model"}, {"config", config}};
  Json list = Json::array();
  for (const auto& m : models) list.push_back(to_json(m));
  doc["models"] = std::move(list);
  out << doc.dump(1) << '\n';
}

inline std::vector<BinaryModel> load_models(std::istream& in) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
  try {
    if (doc.at("format") != "mixcat-model") throw Error("not a mixcat model file");
    if (doc.at("schema_version").get<int>() != kModelSchemaVersion)
      throw Error("unsupported model schema version " + doc.at("schema_version").dump());
    std::vector<BinaryModel> out;
    for (const auto& m : doc.at("models")) out.push_back(binary_model_from_json(m));
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace mixcat
