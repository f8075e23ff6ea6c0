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

#ifndef REALITE_PIPELINE_HPP_
#define REALITE_PIPELINE_HPP_

#include <cstddef>
#include <string>

#include <json.hpp>

#include "realite/config.hpp"
#include "realite/evaluation.hpp"
#include "realite/training.hpp"

namespace realite {

// Counts in the layout of a dataset statistics table.
struct DatasetSummary {
  std::size_t entities = 0;
  std::size_t relations = 0;
  std::size_t triples = 0;
  std::size_t train = 0;
  std::size_t valid = 0;
  std::size_t test = 0;
  std::size_t attributes = 0;
  std::size_t literals = 0;

  nlohmann::json to_json() const;
};

DatasetSummary summarize(const KnowledgeGraph& graph);

// preprocess: raw TSV inputs -> artifact directory at config.output_dir
// (graph files, profiles.tsv, summary.json, config.json).
DatasetSummary run_preprocess(const RunConfig& config);

// train: artifact directory -> checkpoint at config.output_dir.
TrainResult run_train(const RunConfig& config);

// evaluate: artifact + checkpoint -> report.json / report.txt at config.output_dir.
EvaluationReport run_evaluate(const RunConfig& config);

struct ClassificationResult {
  double micro_f1 = 0.0;
  std::size_t num_train = 0;
  std::size_t num_test = 0;
  std::vector<std::vector<std::size_t>> confusion;
};

// classify: checkpoint + labeled-node file -> predictions.tsv and
// classification.json at config.output_dir.
ClassificationResult run_classify(const RunConfig& config);

}  // namespace realite

#endif  // REALITE_PIPELINE_HPP_
