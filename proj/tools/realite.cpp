// Copyright 2026 The realite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// realite command-line entry point: preprocess, train, evaluate, classify.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "realite/config.hpp"
#include "realite/pipeline.hpp"

namespace {

using realite::RunConfig;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Overrides {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> output_dir;
  std::optional<std::string> artifact_dir;
  std::optional<std::string> checkpoint_dir;

  std::optional<std::string> train, valid, test, literals;

  std::optional<std::string> model, fusion, aggregation;
  std::optional<std::size_t> entity_dim, relation_dim;
  std::optional<int> transe_norm;
  std::optional<bool> separate_complex_fusion, all_rows, multiset_rows;

  std::optional<std::size_t> epochs, batch_size, eval_every, patience;
  std::optional<double> learning_rate, l2;
  std::optional<std::string> optimizer;

  std::optional<std::string> split, group_by, threshold, tie_policy;
  std::optional<std::size_t> min_samples;

  std::optional<std::string> labels, classifier;
  std::optional<std::size_t> k, svm_epochs;
  std::optional<double> svm_lr, svm_reg;
};

void add_model_options(CLI::App* cmd, Overrides* o) {
  cmd->add_option("--model", o->model, "transe | distmult | complex | rotate | tucker");
  cmd->add_option("--fusion", o->fusion, "linear | gated | none");
  cmd->add_option("--aggregation", o->aggregation,
                  "mean | median | mode | min | max | sum | count | variance | std | iqr | "
                  "range | learnable");
  cmd->add_option("--entity-dim", o->entity_dim);
  cmd->add_option("--relation-dim", o->relation_dim);
  cmd->add_option("--transe-norm", o->transe_norm, "1 or 2");
  cmd->add_option("--separate-complex-fusion", o->separate_complex_fusion);
  cmd->add_option("--aggregate-over-all-rows", o->all_rows);
  cmd->add_option("--multiset-rows", o->multiset_rows);
}

RunConfig effective_config(const Overrides& o) {
  RunConfig c = o.config_file.empty() ? RunConfig{} : realite::load_run_config(o.config_file);
  auto set = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  set(c.seed, o.seed);
  set(c.threads, o.threads);
  set(c.output_dir, o.output_dir);
  set(c.artifact_dir, o.artifact_dir);
  set(c.checkpoint_dir, o.checkpoint_dir);
  set(c.data.train, o.train);
  set(c.data.valid, o.valid);
  set(c.data.test, o.test);
  set(c.data.literals, o.literals);

  if (o.model || o.fusion || o.aggregation || o.entity_dim || o.relation_dim || o.transe_norm ||
      o.separate_complex_fusion || o.all_rows || o.multiset_rows) {
    c.model_specified = true;
  }
  if (o.model) c.model.model = realite::parse_model(*o.model);
  if (o.fusion) {
    c.model.fusion = *o.fusion == "none" ? std::nullopt
                                         : std::optional(realite::parse_fusion(*o.fusion));
  }
  if (o.aggregation) c.model.aggregation = realite::parse_aggregation(*o.aggregation);
  set(c.model.entity_dim, o.entity_dim);
  set(c.model.relation_dim, o.relation_dim);
  set(c.model.transe_norm, o.transe_norm);
  set(c.model.separate_complex_fusion, o.separate_complex_fusion);
  set(c.model.profile.aggregate_over_all_rows, o.all_rows);
  set(c.model.profile.multiset_rows, o.multiset_rows);

  set(c.train.epochs, o.epochs);
  set(c.train.batch_size, o.batch_size);
  set(c.train.eval_every, o.eval_every);
  set(c.train.patience, o.patience);
  set(c.train.learning_rate, o.learning_rate);
  set(c.train.l2, o.l2);
  if (o.optimizer) c.train.optimizer = realite::parse_optimizer(*o.optimizer);

  set(c.evaluate.split, o.split);
  set(c.evaluate.group_by, o.group_by);
  set(c.evaluate.threshold, o.threshold);
  set(c.evaluate.min_samples, o.min_samples);
  if (o.tie_policy) c.evaluate.tie_policy = realite::parse_tie_policy(*o.tie_policy);

  set(c.classify.labels, o.labels);
  set(c.classify.classifier, o.classifier);
  set(c.classify.k, o.k);
  set(c.classify.svm.epochs, o.svm_epochs);
  set(c.classify.svm.learning_rate, o.svm_lr);
  set(c.classify.svm.regularization, o.svm_reg);
  if (c.threads == 0) throw realite::ValidationError("--threads must be at least 1");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-graph embeddings with literal-enriched relations"};
  app.require_subcommand(1);
  Overrides o;
  bool verbose = false;
  app.add_option("--config", o.config_file, "JSON run configuration");
  app.add_option("--seed", o.seed);
  app.add_option("--threads", o.threads, "worker cap for evaluation");
  app.add_option("--output-dir", o.output_dir, "directory this command writes");
  app.add_flag("-v,--verbose", verbose);

  auto* pre = app.add_subcommand("preprocess", "ingest triples and literals into an artifact");
  pre->add_option("--train", o.train);
  pre->add_option("--valid", o.valid);
  pre->add_option("--test", o.test);
  pre->add_option("--literals", o.literals);
  add_model_options(pre, &o);

  auto* tr = app.add_subcommand("train", "train a model on a preprocessed artifact");
  tr->add_option("--artifact", o.artifact_dir);
  add_model_options(tr, &o);
  tr->add_option("--epochs", o.epochs);
  tr->add_option("--batch-size", o.batch_size);
  tr->add_option("--learning-rate", o.learning_rate);
  tr->add_option("--optimizer", o.optimizer, "adam | sgd");
  tr->add_option("--l2", o.l2);
  tr->add_option("--eval-every", o.eval_every);
  tr->add_option("--patience", o.patience);

  auto* ev = app.add_subcommand("evaluate", "filtered link-prediction metrics");
  ev->add_option("--artifact", o.artifact_dir);
  ev->add_option("--checkpoint", o.checkpoint_dir);
  add_model_options(ev, &o);
  ev->add_option("--split", o.split, "test | valid | train");
  ev->add_option("--group-by", o.group_by, "none | frequency | correlation");
  ev->add_option("--threshold", o.threshold, "count, percentage (2.55%) or coefficient");
  ev->add_option("--min-samples", o.min_samples);
  ev->add_option("--tie-policy", o.tie_policy, "realistic | optimistic | pessimistic");

  auto* cl = app.add_subcommand("classify", "node classification on entity embeddings");
  cl->add_option("--artifact", o.artifact_dir);
  cl->add_option("--checkpoint", o.checkpoint_dir);
  cl->add_option("--labels", o.labels, "node<TAB>label<TAB>split file");
  add_model_options(cl, &o);
  cl->add_option("--classifier", o.classifier, "knn | svm");
  cl->add_option("--k", o.k);
  cl->add_option("--svm-epochs", o.svm_epochs);
  cl->add_option("--svm-learning-rate", o.svm_lr);
  cl->add_option("--svm-regularization", o.svm_reg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  spdlog::set_default_logger(spdlog::stderr_color_mt("realite"));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    const RunConfig config = effective_config(o);
    if (pre->parsed()) {
      const auto s = realite::run_preprocess(config);
      std::cout << s.to_json().dump(2) << "\n";
    } else if (tr->parsed()) {
      const auto r = realite::run_train(config);
      std::cout << "epochs " << r.epochs_run << "  initial loss " << r.epoch_losses.front()
                << "  final loss " << r.epoch_losses.back() << "\n";
    } else if (ev->parsed()) {
      std::cout << realite::run_evaluate(config).to_table();
    } else if (cl->parsed()) {
      const auto r = realite::run_classify(config);
      std::cout << config.classify.classifier << " micro-F1 " << r.micro_f1 << " (" << r.num_test
                << " test nodes)\n";
    }
  } catch (const realite::ValidationError& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitRuntime;
  }
  return 0;
}
