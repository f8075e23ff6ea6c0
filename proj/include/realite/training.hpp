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

#ifndef REALITE_TRAINING_HPP_
#define REALITE_TRAINING_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "realite/kg_data.hpp"
#include "realite/model.hpp"

namespace realite {

enum class OptimizerKind { kAdam, kSgd };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 256;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  // Optional L2 penalty on entity and relation tables, added to the loss.
  double l2 = 0.0;
  std::uint64_t seed = 42;
  // Validation MRR every `eval_every` epochs (0 disables).
  std::size_t eval_every = 0;
  // Stop after this many validations without improvement (0 disables).
  std::size_t patience = 0;

  void validate() const;
};

struct LossAndGradient {
  double loss = 0.0;
  ModelParams grad;
};

// Mean over the batch of tail-side plus head-side softmax cross-entropy
// against all entities, with the true entity as the one-hot target.
LossAndGradient symmetric_lcwa_loss(const Model& model, std::span<const Triple> batch,
                                    double l2 = 0.0);

// Loss only, without gradients.
double symmetric_lcwa_loss_value(const Model& model, std::span<const Triple> batch,
                                 double l2 = 0.0);

// Per-triple (tail CE + head CE), no reduction.
std::vector<double> per_triple_losses(const Model& model, std::span<const Triple> batch);

class Optimizer {
 public:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  Optimizer(OptimizerKind kind, double learning_rate, const ModelParams& like);

  void step(ModelParams* params, const ModelParams& grad);

  OptimizerKind kind() const { return kind_; }
  double learning_rate() const { return lr_; }
  std::uint64_t steps() const { return steps_; }
  const ModelParams& first_moment() const { return m_; }
  const ModelParams& second_moment() const { return v_; }
  void restore(std::uint64_t steps, ModelParams m, ModelParams v);

 private:
  OptimizerKind kind_;
  double lr_;
  std::uint64_t steps_ = 0;
  ModelParams m_;
  ModelParams v_;
};

struct ValidationPoint {
  std::size_t epoch = 0;
  double mrr = 0.0;
};

struct TrainResult {
  std::vector<double> epoch_losses;
  std::vector<ValidationPoint> validation;
  std::size_t epochs_run = 0;
};

using EpochCallback = std::function<void(std::size_t epoch, double loss)>;

// Shuffled mini-batch training over graph.train. Deterministic for a given
// seed. Throws NumericalError when the loss becomes non-finite.
TrainResult train(Model* model, Optimizer* optimizer, const KnowledgeGraph& graph,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace realite

#endif  // REALITE_TRAINING_HPP_
