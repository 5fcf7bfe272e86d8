#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mixcat/cli.hpp"

namespace {

using mixcat::cli::RunConfig;

void add_training_flags(CLI::App& cmd, RunConfig& c, std::string& method, std::string& policy) {
  cmd.add_option("--method", method, "wbm, hcm, fmm or cos")
      ->check(CLI::IsMember({"wbm", "hcm", "fmm", "cos"}));
  cmd.add_option("--category", c.category, "category to train against its complement (default: all)");
  cmd.add_option("--gamma", c.gamma, "relative-frequency threshold for word clusters")
      ->capture_default_str();
  cmd.add_option("--top-l", c.top_l, "hcm top-ranks clustering: L most frequent words");
  cmd.add_option("--top-m", c.top_m, "hcm top-ranks clustering: M most frequent words");
  cmd.add_option("--eta", c.eta, "EM step size in (0, 1]")->capture_default_str();
  cmd.add_option("--iters", c.iterations, "maximum EM iterations")->capture_default_str();
  cmd.add_option("--tol", c.tolerance, "EM stopping tolerance on the log-likelihood change")
      ->capture_default_str();
  cmd.add_option("--multi-label", policy, "complement pool rule: positive-only or both")
      ->check(CLI::IsMember({"positive-only", "both"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixcat: text categorization with finite mixture models"};
  app.require_subcommand(1);
  app.set_config("--config", "", "configuration file (TOML/INI)")->envname("MIXCAT_CONFIG");

  RunConfig c;
  std::string method = "fmm";
  std::string policy = "positive-only";

  auto* counts = app.add_subcommand("counts", "dump per-category word frequencies as CSV");
  counts->add_option("--train", c.train_path, "training corpus")->required();
  counts->add_option("--output", c.output_path, "output file (default: stdout)");

  auto* clusters = app.add_subcommand("clusters", "dump word clusters");
  clusters->add_option("--train", c.train_path, "training corpus")->required();
  clusters->add_option("--category", c.category, "cluster a category against its complement");
  clusters->add_option("--gamma", c.gamma, "relative-frequency threshold")->capture_default_str();
  clusters->add_option("--top-l", c.top_l, "top-ranks clustering: L");
  clusters->add_option("--top-m", c.top_m, "top-ranks clustering: M");
  clusters->add_option("--multi-label", policy, "complement pool rule: positive-only or both")
      ->check(CLI::IsMember({"positive-only", "both"}));
  clusters->add_option("--output", c.output_path, "output file (default: stdout)");

  auto* train = app.add_subcommand("train", "train binary category-vs-complement models");
  train->add_option("--train", c.train_path, "training corpus")->required();
  train->add_option("--model", c.model_path, "model file to write")->required();
  train->add_option("--trace", c.trace_path, "write the EM trace as CSV");
  add_training_flags(*train, c, method, policy);

  auto* classify = app.add_subcommand("classify", "classify documents with a trained model");
  classify->add_option("--model", c.model_path, "model file")->required();
  classify->add_option("--input", c.input_path, "documents to classify")->required();
  classify->add_option("--epsilon", c.epsilon, "rejection threshold")->capture_default_str();
  classify->add_option("--output", c.output_path, "output file (default: stdout)");

  auto* eval = app.add_subcommand("eval", "precision-recall sweep and break-even point");
  eval->add_option("--model", c.model_path, "model file")->required();
  eval->add_option("--test", c.test_path, "labeled test corpus")->required();
  eval->add_option("--grid", c.grid, "epsilon grid start:stop:step")->capture_default_str();
  eval->add_option("--output", c.output_path, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  c.command = app.get_subcommands().front()->get_name();
  try {
    c.method = mixcat::parse_method(method);
    c.policy = mixcat::parse_policy(policy);
  } catch (const std::exception& e) {
    std::cerr << "mixcat: configuration: " << e.what() << '\n';
    return 2;
  }
  return mixcat::cli::run(c, std::cout, std::cerr);
}
