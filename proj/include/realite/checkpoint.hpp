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

#ifndef REALITE_CHECKPOINT_HPP_
#define REALITE_CHECKPOINT_HPP_

#include <filesystem>
#include <memory>

#include <json.hpp>

#include "realite/model.hpp"
#include "realite/training.hpp"

namespace realite {

inline constexpr int kCheckpointVersion = 1;

// Checkpoint directory layout:
//   meta.json           format tag, version, sizes, parameter counts
//   config.json         effective run configuration
//   model.json          model configuration
//   train.json          training configuration
//   params/<name>.txt   one file per trainable tensor
//   optimizer/          step count plus Adam moments in the same layout
//   profiles.tsv        literal profiles the model was trained with
//   loss_trace.tsv      epoch <TAB> mean training loss
//   validation.tsv      epoch <TAB> validation MRR
struct LoadedCheckpoint {
  std::unique_ptr<Model> model;
  std::unique_ptr<Optimizer> optimizer;
  TrainConfig train_config;
  TrainResult trace;
  nlohmann::json run_config;
};

// Writes into a sibling temporary directory and renames it into place, so an
// interrupted write never leaves a partial checkpoint at `dir`.
void save_checkpoint(const std::filesystem::path& dir, const Model& model,
                     const Optimizer& optimizer, const TrainConfig& train_config,
                     const TrainResult& trace, const nlohmann::json& run_config);

LoadedCheckpoint load_checkpoint(const std::filesystem::path& dir);

void save_tensor(const Tensor& t, const std::filesystem::path& file);
Tensor load_tensor(const std::filesystem::path& file);

// Replaces `dir` with the contents of `staging` via rename.
void commit_directory(const std::filesystem::path& staging, const std::filesystem::path& dir);
std::filesystem::path staging_path(const std::filesystem::path& dir);

}  // namespace realite

#endif  // REALITE_CHECKPOINT_HPP_
