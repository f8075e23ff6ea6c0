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

#ifndef REALITE_CONFIG_HPP_
#define REALITE_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "realite/downstream.hpp"
#include "realite/evaluation.hpp"
#include "realite/model.hpp"
#include "realite/training.hpp"

namespace realite {

struct DataPaths {
  std::string train;
  std::string valid;
  std::string test;
  std::string literals;
};

struct EvaluateSettings {
  std::string split = "test";
  // "none", "frequency" or "correlation".
  std::string group_by = "none";
  // Count ("2817"), percentage ("2.55%") or coefficient ("0.2").
  std::string threshold;
  std::size_t min_samples = 3;
  TiePolicy tie_policy = TiePolicy::kRealistic;
};

struct ClassifySettings {
  std::string labels;
  std::string classifier = "knn";
  std::size_t k = 5;
  SvmConfig svm;
};

// Everything a command needs. Serialized as JSON; the effective config is
// written to every output directory.
struct RunConfig {
  DataPaths data;
  std::string artifact_dir;
  std::string checkpoint_dir;
  std::string output_dir;
  ModelConfig model;
  TrainConfig train;
  EvaluateSettings evaluate;
  ClassifySettings classify;
  std::uint64_t seed = 42;
  std::size_t threads = 1;

  // Set when the model section came from the user rather than defaults;
  // evaluate/classify then insist that it matches the checkpoint. Not
  // serialized.
  bool model_specified = false;
};

nlohmann::json to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunConfig& c);
// Unknown keys are rejected so that typos surface as validation errors.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& file);

}  // namespace realite

#endif  // REALITE_CONFIG_HPP_
