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

#ifndef REALITE_DOWNSTREAM_HPP_
#define REALITE_DOWNSTREAM_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "realite/common.hpp"
#include "realite/kg_data.hpp"
#include "realite/model.hpp"

namespace realite {

enum class NodeSplit { kTrain, kTest };

struct LabeledNode {
  EntityId node = 0;
  int label = 0;
  NodeSplit split = NodeSplit::kTrain;
};

struct LabeledNodeSet {
  std::vector<LabeledNode> nodes;
  // Class index -> original label string, sorted.
  std::vector<std::string> class_names;

  std::vector<LabeledNode> select(NodeSplit split) const;
};

// Reads `node<TAB>label<TAB>split` lines (split is "train" or "test"). Labels
// are mapped to 0..C-1 in sorted order. Unknown nodes are collected and
// reported together in one ValidationError.
LabeledNodeSet load_labeled_nodes(const std::filesystem::path& path,
                                  const Vocabulary& entities);

// Row i is the entity embedding of nodes[i].
Tensor export_embeddings(const Model& model, std::span<const EntityId> nodes);

// Euclidean k-nearest-neighbour vote. Ties between labels with the same vote
// count go to the smaller mean neighbour distance, then the smaller label.
std::vector<int> knn_classify(const Tensor& train_features, std::span<const int> train_labels,
                              const Tensor& test_features, std::size_t k);

struct SvmConfig {
  std::size_t epochs = 200;
  double learning_rate = 0.1;
  double regularization = 1e-3;
  // 0 means full-batch subgradient descent.
  std::size_t batch_size = 0;
  std::uint64_t seed = 42;
};

// One-vs-rest linear SVM.
struct LinearSvm {
  Tensor weights;             // [C, D]
  std::vector<double> bias;   // [C]
  std::vector<double> objective_trace;  // objective after each epoch

  std::vector<double> class_scores(std::span<const double> x) const;
  std::vector<int> predict(const Tensor& features) const;
};

// Sum over classes of reg/2 * |w_c|^2 + mean_i max(0, 1 - y_ic (w_c . x_i + b_c)).
double svm_objective(const LinearSvm& svm, const Tensor& features, std::span<const int> labels,
                     double regularization);

LinearSvm svm_train(const Tensor& features, std::span<const int> labels,
                    const SvmConfig& config);

double micro_f1(std::span<const int> predictions, std::span<const int> gold);

// counts[gold][predicted]
std::vector<std::vector<std::size_t>> confusion_counts(std::span<const int> predictions,
                                                       std::span<const int> gold,
                                                       std::size_t num_classes);

}  // namespace realite

#endif  // REALITE_DOWNSTREAM_HPP_
