#pragma once

// Command implementations behind the mixcat tool. Each command reads and
// writes through the paths in RunConfig; every text artifact starts with a
// header line carrying the effective configuration.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mixcat/clustering.hpp"
#include "mixcat/corpus.hpp"
#include "mixcat/counts.hpp"
#include "mixcat/eval.hpp"
#include "mixcat/models.hpp"
#include "mixcat/persist.hpp"

namespace mixcat::cli {

struct RunConfig {
  std::string command;
  Method method = Method::fmm;
  std::optional<std::string> category;
  double gamma = 0.5;
  std::optional<std::size_t> top_l;
  std::optional<std::size_t> top_m;
  double eta = 1.0;
  int iterations = 100;
  double tolerance = 1e-8;
  double epsilon = 0.0;
  /// start:stop:step
  std::string grid = "0:0.5:0.005";
  MultiLabelPolicy policy = MultiLabelPolicy::positive_only;
  std::string train_path;
  std::string test_path;
  std::string model_path;
  std::string input_path;
  std::string output_path;
  std::string trace_path;

  TrainSettings train_settings() const {
    TrainSettings s;
    s.method = method;
    s.gamma = gamma;
    if (top_l || top_m) {
      if (!top_l || !top_m) throw Error("--top-l and --top-m must be given together");
      s.top_ranks = HcmTopRanks{*top_l, *top_m};
    }
    s.em.eta = eta;
    s.em.max_iterations = iterations;
    s.em.tolerance = tolerance;
    s.policy = policy;
    return s;
  }
};

inline Json to_json(const RunConfig& c) {
  Json j{{"command", c.command}};
  if (c.command == "train" || c.command == "clusters") {
    if (c.command == "train") j["method"] = to_string(c.method);
    j["category"] = c.category ? Json(*c.category) : Json(nullptr);
    if (c.top_l || c.top_m) {
      j["top_l"] = c.top_l ? Json(*c.top_l) : Json(nullptr);
      j["top_m"] = c.top_m ? Json(*c.top_m) : Json(nullptr);
    } else {
      j["gamma"] = c.gamma;
    }
  }
  if (c.command == "train") {
    j["eta"] = c.eta;
    j["iterations"] = c.iterations;
    j["tolerance"] = c.tolerance;
    j["multi_label"] = policy_name(c.policy);
    j["trace"] = c.trace_path;
  }
  if (c.command == "classify") j["epsilon"] = c.epsilon;
  if (c.command == "eval") j["grid"] = c.grid;
  if (!c.train_path.empty()) j["train"] = c.train_path;
  if (!c.test_path.empty()) j["test"] = c.test_path;
  if (!c.model_path.empty()) j["model"] = c.model_path;
  if (!c.input_path.empty()) j["input"] = c.input_path;
  if (!c.output_path.empty()) j["output"] = c.output_path;
  return j;
}

inline std::string header_line(const RunConfig& c) { return "# mixcat " + to_json(c).dump(); }

/// Parses "start:stop:step" into an inclusive grid.
inline std::vector<double> parse_grid(const std::string& spec) {
  double start = 0, stop = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof())
    throw Error("grid must be start:stop:step, got '" + spec + "'");
  if (!(step > 0.0) || stop < start) throw Error("grid needs step > 0 and stop >= start");
  std::vector<double> g;
  for (long i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + step * 1e-9) break;
    g.push_back(v);
  }
  validate_grid(g);
  return g;
}

/// Rejects inconsistent flag combinations before any file is touched.
inline void validate(const RunConfig& c) {
  if (c.command == "train") {
    if (c.train_path.empty()) throw Error("train needs --train");
    if (c.model_path.empty()) throw Error("train needs --model");
    c.train_settings().validate();
  } else if (c.command == "classify") {
    if (c.model_path.empty() || c.input_path.empty()) throw Error("classify needs --model and --input");
    if (c.epsilon < 0.0) throw Error("epsilon must be non-negative");
  } else if (c.command == "eval") {
    if (c.model_path.empty() || c.test_path.empty()) throw Error("eval needs --model and --test");
    parse_grid(c.grid);
  } else if (c.command == "clusters") {
    if (c.train_path.empty()) throw Error("clusters needs --train");
    if (c.top_l || c.top_m) {
      if (!c.top_l || !c.top_m) throw Error("--top-l and --top-m must be given together");
    } else if (!(c.gamma >= 0.0 && c.gamma < 1.0)) {
      throw Error("gamma must lie in [0, 1)");
    }
  } else if (c.command == "counts") {
    if (c.train_path.empty()) throw Error("counts needs --train");
  } else {
    throw Error("unknown command '" + c.command + "'");
  }
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void cmd_counts(const RunConfig& c, const LabeledCorpus& train, std::ostream& out) {
  const auto table = count_frequencies(train);
  out << header_line(c) << "\ncategory,word,count\n";
  for (std::size_t i = 0; i < table.category_count(); ++i)
    for (const auto& [w, row] : table.rows())
      if (row[i] > 0) out << table.categories()[i] << ',' << w << ',' << row[i] << '\n';
}

inline void cmd_clusters(const RunConfig& c, const LabeledCorpus& train, std::ostream& out) {
  FrequencyTable table;
  if (c.category) {
    const auto set = binary_training_set(train, *c.category, c.policy);
    table = set.table;
  } else {
    table = count_frequencies(train);
  }
  const auto clustering = (c.top_l && c.top_m) ? guthrie_clusters(table, *c.top_l, *c.top_m)
                                               : soft_clusters(table, c.gamma);
  out << header_line(c) << '\n';
  auto list = [&](const std::vector<std::string>& words) {
    for (std::size_t i = 0; i < words.size(); ++i) out << (i ? ", " : " ") << words[i];
    out << '\n';
  };
  for (std::size_t j = 0; j < clustering.cluster_count(); ++j) {
    out << 'k' << (j + 1) << ':';
    list(clustering.cluster(j));
  }
  out << "discarded:";
  list(clustering.discarded());
}

inline std::vector<BinaryModel> cmd_train(const RunConfig& c, const LabeledCorpus& train,
                                          std::ostream& model_out, std::ostream* trace_out) {
  const auto settings = c.train_settings();
  const auto categories = c.category ? std::vector<std::string>{*c.category} : train.categories;
  std::vector<BinaryModel> models;
  if (trace_out) *trace_out << header_line(c) << "\ncategory,side,iteration,log_likelihood\n";
  for (const auto& cat : categories) {
    std::vector<EmResult> fits;
    models.push_back(train_binary(train, cat, settings, &fits));
    if (trace_out) {
      const auto& sides = std::get_if<MixtureModel>(&models.back().model);
      for (std::size_t s = 0; s < fits.size(); ++s)
        for (const auto& p : fits[s].trace)
          *trace_out << cat << ',' << sides->sides[s] << ',' << p.iteration << ','
                     << format_double(p.log_likelihood) << '\n';
    }
  }
  save_models(model_out, models, to_json(c));
  return models;
}

inline void cmd_classify(const RunConfig& c, const std::vector<BinaryModel>& models,
                         const LabeledCorpus& input, std::ostream& out) {
  out << header_line(c) << "\ndoc_id\tcategory\toutcome\tscore\n";
  for (std::size_t d = 0; d < input.documents.size(); ++d) {
    for (const auto& m : models) {
      const auto dec = classify(m, input.documents[d].tokens, c.epsilon);
      out << (d + 1) << '\t' << m.category << '\t' << to_string(dec.outcome) << '\t'
          << (dec.score ? format_double(*dec.score) : "NA") << '\n';
    }
  }
}

inline BreakEven cmd_eval(const RunConfig& c, const std::vector<BinaryModel>& models,
                          const LabeledCorpus& test, std::ostream& out) {
  const auto grid = parse_grid(c.grid);
  const auto curve = sweep(models, test, grid);
  const auto be = break_even(curve);
  out << header_line(c) << "\nepsilon,precision,recall\n";
  for (const auto& p : curve.points)
    out << format_double(p.epsilon) << ',' << format_double(p.precision) << ','
        << format_double(p.recall) << '\n';
  out << "break_even=" << format_double(be.value) << '\n';
  if (be.extrapolated) out << "# break_even extrapolated: precision and recall never cross\n";
  return be;
}

namespace detail {

inline LabeledCorpus read_corpus(const std::string& path, LabelRequirement labels) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_corpus(in, labels);
}

inline std::vector<BinaryModel> read_models(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_models(in);
}

/// Runs `fn` and prefixes any failure with the stage name.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw Error(std::string(name) + ": " + e.what());
  }
}

/// Writes to `path`, or to `fallback` when the path is empty. The file is
/// only replaced once the whole output has been produced.
inline void emit(const std::string& path, std::ostream& fallback, const std::string& text) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Error("cannot write '" + path + "'");
}

}  // namespace detail

/// Executes one command. Returns the process exit code; diagnostics name
/// the failing stage.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    detail::stage("configuration", [&] { validate(c); });
    if (c.command == "counts" || c.command == "clusters") {
      const auto train = detail::stage("read training corpus", [&] {
        return detail::read_corpus(c.train_path, LabelRequirement::required);
      });
      std::ostringstream text;
      detail::stage(c.command == "counts" ? "counts" : "clustering", [&] {
        if (c.command == "counts")
          cmd_counts(c, train, text);
        else
          cmd_clusters(c, train, text);
      });
      detail::stage("write output", [&] { detail::emit(c.output_path, out, text.str()); });
    } else if (c.command == "train") {
      const auto train = detail::stage("read training corpus", [&] {
        return detail::read_corpus(c.train_path, LabelRequirement::required);
      });
      std::ostringstream model, trace;
      detail::stage("training", [&] {
        cmd_train(c, train, model, c.trace_path.empty() ? nullptr : &trace);
      });
      detail::stage("write model", [&] {
        std::ostringstream unused;
        detail::emit(c.model_path, unused, model.str());
        if (!c.trace_path.empty()) detail::emit(c.trace_path, unused, trace.str());
      });
    } else if (c.command == "classify") {
      const auto models = detail::stage("read model", [&] { return detail::read_models(c.model_path); });
      const auto input = detail::stage("read input corpus", [&] {
        return detail::read_corpus(c.input_path, LabelRequirement::optional);
      });
      std::ostringstream text;
      detail::stage("classification", [&] { cmd_classify(c, models, input, text); });
      detail::stage("write output", [&] { detail::emit(c.output_path, out, text.str()); });
    } else if (c.command == "eval") {
      const auto models = detail::stage("read model", [&] { return detail::read_models(c.model_path); });
      const auto test = detail::stage("read test corpus", [&] {
        return detail::read_corpus(c.test_path, LabelRequirement::optional);
      });
      std::ostringstream text;
      detail::stage("evaluation", [&] { cmd_eval(c, models, test, text); });
      detail::stage("write output", [&] { detail::emit(c.output_path, out, text.str()); });
    }
  } catch (const std::exception& e) {
    err << "mixcat: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace mixcat::cli
