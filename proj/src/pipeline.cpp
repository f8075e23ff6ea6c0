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

#include "realite/pipeline.hpp"

#include <filesystem>

#include <spdlog/spdlog.h>

#include "io_util.hpp"
#include "realite/aggregation.hpp"
#include "realite/checkpoint.hpp"
#include "realite/downstream.hpp"

namespace realite {

namespace fs = std::filesystem;

namespace {

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ValidationError(std::string(what) + " path is not set");
  if (!fs::is_regular_file(path)) {
    throw ValidationError(std::string(what) + " file not found: " + path);
  }
}

void require_dir(const std::string& path, const char* what) {
  if (path.empty()) throw ValidationError(std::string(what) + " directory is not set");
  if (!fs::is_directory(path)) {
    throw ValidationError(std::string(what) + " directory not found: " + path);
  }
}

fs::path output_dir(const RunConfig& c) {
  if (c.output_dir.empty()) throw ValidationError("output directory is not set");
  return c.output_dir;
}

void write_json(const fs::path& file, const nlohmann::json& j) {
  io::write_file(file, j.dump(2) + "\n");
}

nlohmann::json profile_options_json(const ProfileOptions& o) {
  return {{"aggregate_over_all_rows", o.aggregate_over_all_rows},
          {"multiset_rows", o.multiset_rows}};
}

std::vector<RelationLiteralProfile> artifact_profiles(const fs::path& artifact,
                                                      const KnowledgeGraph& graph,
                                                      const ProfileOptions& options) {
  const fs::path meta = artifact / "summary.json";
  if (fs::exists(meta) && fs::exists(artifact / "profiles.tsv")) {
    auto j = nlohmann::json::parse(io::read_file(meta));
    if (j.contains("profile_options") && j["profile_options"] == profile_options_json(options)) {
      return load_profiles(artifact / "profiles.tsv", graph.num_relations(),
                           graph.num_attributes());
    }
  }
  spdlog::info("profile options differ from the artifact; rebuilding literal profiles");
  return build_profiles(graph, options);
}

void check_model_matches(const RunConfig& config, const Model& model) {
  if (!config.model_specified) return;
  const auto want = to_json(config.model);
  const auto have = to_json(model.config());
  if (want != have) {
    throw ValidationError("model configuration does not match the checkpoint: requested " +
                          want.dump() + ", checkpoint has " + have.dump());
  }
}

std::span<const Triple> split_of(const KnowledgeGraph& g, const std::string& name) {
  if (name == "test") return g.test;
  if (name == "valid") return g.valid;
  if (name == "train") return g.train;
  throw ValidationError("unknown split: " + name);
}

}  // namespace

nlohmann::json DatasetSummary::to_json() const {
  return {{"entities", entities}, {"relations", relations}, {"triples", triples},
          {"train", train},       {"valid", valid},         {"test", test},
          {"attributes", attributes}, {"literals", literals}};
}

DatasetSummary summarize(const KnowledgeGraph& g) {
  DatasetSummary s;
  s.entities = g.num_entities();
  s.relations = g.num_relations();
  s.train = g.train.size();
  s.valid = g.valid.size();
  s.test = g.test.size();
  s.triples = s.train + s.valid + s.test;
  s.attributes = g.num_attributes();
  s.literals = g.literals.num_present();
  return s;
}

DatasetSummary run_preprocess(const RunConfig& config) {
  require_file(config.data.train, "train");
  if (!config.data.valid.empty()) require_file(config.data.valid, "valid");
  require_file(config.data.test, "test");
  if (config.model.fusion && config.data.literals.empty()) {
    throw ValidationError("fusion '" + std::string(to_string(*config.model.fusion)) +
                          "' needs a literal file (data.literals)");
  }
  if (!config.data.literals.empty()) require_file(config.data.literals, "literals");
  const fs::path out = output_dir(config);

  const auto train = load_triples(config.data.train);
  const auto valid = config.data.valid.empty() ? std::vector<LabeledTriple>{}
                                               : load_triples(config.data.valid);
  const auto test = load_triples(config.data.test);
  const auto literals = config.data.literals.empty() ? std::vector<LabeledLiteral>{}
                                                     : load_literals(config.data.literals);
  const KnowledgeGraph graph = build_graph(train, valid, test, literals);
  const auto profiles = build_profiles(graph, config.model.profile);
  const DatasetSummary summary = summarize(graph);

  const fs::path tmp = staging_path(out);
  fs::remove_all(tmp);
  save_graph(graph, tmp);
  save_profiles(profiles, graph.num_attributes(), tmp / "profiles.tsv");
  auto sj = summary.to_json();
  sj["profile_options"] = profile_options_json(config.model.profile);
  write_json(tmp / "summary.json", sj);
  write_json(tmp / "config.json", to_json(config));
  commit_directory(tmp, out);

  spdlog::info("entities {}  relations {}  triples {}  attributes {}  literals {}",
               summary.entities, summary.relations, summary.triples, summary.attributes,
               summary.literals);
  return summary;
}

TrainResult run_train(const RunConfig& config) {
  require_dir(config.artifact_dir, "artifact");
  const fs::path out = output_dir(config);
  config.model.validate();
  TrainConfig tc = config.train;
  tc.seed = config.seed;
  tc.validate();

  const KnowledgeGraph graph = load_graph(config.artifact_dir);
  if (config.model.fusion && graph.num_attributes() == 0) {
    throw ValidationError("fusion needs numeric literals but the artifact has none");
  }
  auto profiles = config.model.fusion
                      ? artifact_profiles(config.artifact_dir, graph, config.model.profile)
                      : std::vector<RelationLiteralProfile>{};
  Model model(config.model, graph.num_entities(), graph.num_relations(),
              graph.num_attributes(), std::move(profiles), config.seed);
  Optimizer optimizer(tc.optimizer, tc.learning_rate, model.params());
  spdlog::info("{} parameters (base {})", model.param_count(), model.base_param_count());

  TrainResult result = train(&model, &optimizer, graph, tc, [](std::size_t epoch, double loss) {
    spdlog::debug("epoch {} loss {}", epoch, loss);
  });
  save_checkpoint(out, model, optimizer, tc, result, to_json(config));
  return result;
}

EvaluationReport run_evaluate(const RunConfig& config) {
  require_dir(config.artifact_dir, "artifact");
  require_dir(config.checkpoint_dir, "checkpoint");
  const fs::path out = output_dir(config);
  const KnowledgeGraph graph = load_graph(config.artifact_dir);
  LoadedCheckpoint ckpt = load_checkpoint(config.checkpoint_dir);
  check_model_matches(config, *ckpt.model);
  if (ckpt.model->num_entities() != graph.num_entities() ||
      ckpt.model->num_relations() != graph.num_relations()) {
    throw ValidationError("checkpoint vocabulary sizes do not match the artifact");
  }

  std::optional<RelationGrouping> grouping;
  const auto& ev = config.evaluate;
  if (ev.group_by == "frequency") {
    if (ev.threshold.empty()) throw ValidationError("--group-by frequency needs --threshold");
    grouping = group_by_frequency(graph, FrequencyThreshold::parse(ev.threshold));
  } else if (ev.group_by == "correlation") {
    if (ev.threshold.empty()) throw ValidationError("--group-by correlation needs --threshold");
    bool ok = false;
    const double t = io::parse_double(ev.threshold, &ok);
    if (!ok) throw ValidationError("invalid correlation threshold: " + ev.threshold);
    grouping = group_by_correlation(graph, t, ev.min_samples);
  } else if (ev.group_by != "none") {
    throw ValidationError("unknown grouping: " + ev.group_by);
  }

  RankOptions opts;
  opts.tie_policy = ev.tie_policy;
  opts.threads = config.threads;
  const auto triples = split_of(graph, ev.split);
  if (triples.empty()) throw ValidationError("split '" + ev.split + "' has no triples");
  EvaluationReport report =
      evaluate(*ckpt.model, graph, triples, grouping ? &*grouping : nullptr, opts, ev.split);

  const fs::path tmp = staging_path(out);
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  write_json(tmp / "report.json", report.to_json());
  io::write_file(tmp / "report.txt", report.to_table());
  write_json(tmp / "config.json", to_json(config));
  commit_directory(tmp, out);
  return report;
}

ClassificationResult run_classify(const RunConfig& config) {
  require_dir(config.artifact_dir, "artifact");
  require_dir(config.checkpoint_dir, "checkpoint");
  require_file(config.classify.labels, "labeled-node");
  const fs::path out = output_dir(config);
  const Vocabulary entities = load_vocabulary(fs::path(config.artifact_dir) / "entities.txt");
  LoadedCheckpoint ckpt = load_checkpoint(config.checkpoint_dir);
  check_model_matches(config, *ckpt.model);
  if (ckpt.model->num_entities() != entities.size()) {
    throw ValidationError("checkpoint vocabulary size does not match the artifact");
  }

  const LabeledNodeSet nodes = load_labeled_nodes(config.classify.labels, entities);
  const auto train_nodes = nodes.select(NodeSplit::kTrain);
  const auto test_nodes = nodes.select(NodeSplit::kTest);
  if (train_nodes.empty() || test_nodes.empty()) {
    throw ValidationError("labeled-node file needs both train and test nodes");
  }
  auto ids = [](const std::vector<LabeledNode>& v) {
    std::vector<EntityId> out;
    for (const auto& n : v) out.push_back(n.node);
    return out;
  };
  auto labels = [](const std::vector<LabeledNode>& v) {
    std::vector<int> out;
    for (const auto& n : v) out.push_back(n.label);
    return out;
  };
  const Tensor x_train = export_embeddings(*ckpt.model, ids(train_nodes));
  const Tensor x_test = export_embeddings(*ckpt.model, ids(test_nodes));
  const auto y_train = labels(train_nodes);
  const auto y_test = labels(test_nodes);

  std::vector<int> predicted;
  if (config.classify.classifier == "knn") {
    predicted = knn_classify(x_train, y_train, x_test, config.classify.k);
  } else if (config.classify.classifier == "svm") {
    SvmConfig svm = config.classify.svm;
    svm.seed = config.seed;
    predicted = svm_train(x_train, y_train, svm).predict(x_test);
  } else {
    throw ValidationError("unknown classifier: " + config.classify.classifier);
  }

  ClassificationResult result;
  result.micro_f1 = micro_f1(predicted, y_test);
  result.num_train = train_nodes.size();
  result.num_test = test_nodes.size();
  result.confusion = confusion_counts(predicted, y_test, nodes.class_names.size());

  const fs::path tmp = staging_path(out);
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  std::string pred;
  for (std::size_t i = 0; i < test_nodes.size(); ++i) {
    pred += entities.label(test_nodes[i].node) + '\t' + nodes.class_names[predicted[i]] + '\n';
  }
  io::write_file(tmp / "predictions.tsv", pred);
  write_json(tmp / "classification.json",
             {{"classifier", config.classify.classifier},
              {"micro_f1", result.micro_f1},
              {"num_train", result.num_train},
              {"num_test", result.num_test},
              {"classes", nodes.class_names},
              {"confusion", result.confusion}});
  write_json(tmp / "config.json", to_json(config));
  commit_directory(tmp, out);
  return result;
}

}  // namespace realite
