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

#include "realite/config.hpp"

#include <initializer_list>
#include <set>

#include "io_util.hpp"

namespace realite {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const char* section, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ValidationError(std::string(section) + ": expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) {
      throw ValidationError(std::string(section) + ": unknown key '" + k + "'");
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T* out) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  try {
    *out = it->get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config key '") + key + "': " + e.what());
  }
}

std::string read_string(const json& j, const char* key, const std::string& fallback) {
  std::string s = fallback;
  read(j, key, &s);
  return s;
}

}  // namespace

json to_json(const ModelConfig& c) {
  return {{"model", std::string(to_string(c.model))},
          {"fusion", c.fusion ? std::string(to_string(*c.fusion)) : std::string("none")},
          {"aggregation", std::string(to_string(c.aggregation))},
          {"entity_dim", c.entity_dim},
          {"relation_dim", c.relation_dim},
          {"transe_norm", c.transe_norm},
          {"separate_complex_fusion", c.separate_complex_fusion},
          {"aggregate_over_all_rows", c.profile.aggregate_over_all_rows},
          {"multiset_rows", c.profile.multiset_rows}};
}

ModelConfig model_config_from_json(const json& j) {
  reject_unknown(j, "model",
                 {"model", "fusion", "aggregation", "entity_dim", "relation_dim", "transe_norm",
                  "separate_complex_fusion", "aggregate_over_all_rows", "multiset_rows"});
  ModelConfig c;
  c.model = parse_model(read_string(j, "model", std::string(to_string(c.model))));
  const std::string fusion = read_string(j, "fusion", "linear");
  c.fusion = fusion == "none" ? std::nullopt : std::optional(parse_fusion(fusion));
  c.aggregation = parse_aggregation(read_string(j, "aggregation", "mean"));
  read(j, "entity_dim", &c.entity_dim);
  read(j, "relation_dim", &c.relation_dim);
  read(j, "transe_norm", &c.transe_norm);
  read(j, "separate_complex_fusion", &c.separate_complex_fusion);
  read(j, "aggregate_over_all_rows", &c.profile.aggregate_over_all_rows);
  read(j, "multiset_rows", &c.profile.multiset_rows);
  return c;
}

json to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"learning_rate", c.learning_rate},
          {"optimizer", std::string(to_string(c.optimizer))},
          {"l2", c.l2},
          {"eval_every", c.eval_every},
          {"patience", c.patience}};
}

TrainConfig train_config_from_json(const json& j) {
  reject_unknown(j, "train",
                 {"epochs", "batch_size", "learning_rate", "optimizer", "l2", "eval_every",
                  "patience"});
  TrainConfig c;
  read(j, "epochs", &c.epochs);
  read(j, "batch_size", &c.batch_size);
  read(j, "learning_rate", &c.learning_rate);
  c.optimizer = parse_optimizer(read_string(j, "optimizer", "adam"));
  read(j, "l2", &c.l2);
  read(j, "eval_every", &c.eval_every);
  read(j, "patience", &c.patience);
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["data"] = {{"train", c.data.train},
               {"valid", c.data.valid},
               {"test", c.data.test},
               {"literals", c.data.literals}};
  j["artifact_dir"] = c.artifact_dir;
  j["checkpoint_dir"] = c.checkpoint_dir;
  j["output_dir"] = c.output_dir;
  j["model"] = to_json(c.model);
  j["train"] = to_json(c.train);
  j["evaluate"] = {{"split", c.evaluate.split},
                   {"group_by", c.evaluate.group_by},
                   {"threshold", c.evaluate.threshold},
                   {"min_samples", c.evaluate.min_samples},
                   {"tie_policy", std::string(to_string(c.evaluate.tie_policy))}};
  j["classify"] = {{"labels", c.classify.labels},
                   {"classifier", c.classify.classifier},
                   {"k", c.classify.k},
                   {"svm_epochs", c.classify.svm.epochs},
                   {"svm_learning_rate", c.classify.svm.learning_rate},
                   {"svm_regularization", c.classify.svm.regularization},
                   {"svm_batch_size", c.classify.svm.batch_size}};
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  reject_unknown(j, "config",
                 {"data", "artifact_dir", "checkpoint_dir", "output_dir", "model", "train",
                  "evaluate", "classify", "seed", "threads"});
  RunConfig c;
  if (j.contains("data")) {
    const json& d = j["data"];
    reject_unknown(d, "data", {"train", "valid", "test", "literals"});
    read(d, "train", &c.data.train);
    read(d, "valid", &c.data.valid);
    read(d, "test", &c.data.test);
    read(d, "literals", &c.data.literals);
  }
  read(j, "artifact_dir", &c.artifact_dir);
  read(j, "checkpoint_dir", &c.checkpoint_dir);
  read(j, "output_dir", &c.output_dir);
  if (j.contains("model")) {
    c.model = model_config_from_json(j["model"]);
    c.model_specified = true;
  }
  if (j.contains("train")) c.train = train_config_from_json(j["train"]);
  if (j.contains("evaluate")) {
    const json& e = j["evaluate"];
    reject_unknown(e, "evaluate", {"split", "group_by", "threshold", "min_samples", "tie_policy"});
    read(e, "split", &c.evaluate.split);
    read(e, "group_by", &c.evaluate.group_by);
    // Thresholds may be written as numbers or strings ("2.55%").
    if (e.contains("threshold") && e["threshold"].is_number()) {
      c.evaluate.threshold = io::format_double(e["threshold"].get<double>());
    } else {
      read(e, "threshold", &c.evaluate.threshold);
    }
    read(e, "min_samples", &c.evaluate.min_samples);
    c.evaluate.tie_policy = parse_tie_policy(read_string(e, "tie_policy", "realistic"));
  }
  if (j.contains("classify")) {
    const json& k = j["classify"];
    reject_unknown(k, "classify",
                   {"labels", "classifier", "k", "svm_epochs", "svm_learning_rate",
                    "svm_regularization", "svm_batch_size"});
    read(k, "labels", &c.classify.labels);
    read(k, "classifier", &c.classify.classifier);
    read(k, "k", &c.classify.k);
    read(k, "svm_epochs", &c.classify.svm.epochs);
    read(k, "svm_learning_rate", &c.classify.svm.learning_rate);
    read(k, "svm_regularization", &c.classify.svm.regularization);
    read(k, "svm_batch_size", &c.classify.svm.batch_size);
  }
  read(j, "seed", &c.seed);
  read(j, "threads", &c.threads);
  return c;
}

RunConfig load_run_config(const std::filesystem::path& file) {
  json j;
  try {
    j = json::parse(io::read_file(file));
  } catch (const json::parse_error& e) {
    throw ValidationError(file.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace realite
