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

#ifndef REALITE_MODEL_HPP_
#define REALITE_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "realite/aggregation.hpp"
#include "realite/fusion.hpp"
#include "realite/kg_data.hpp"
#include "realite/scoring.hpp"

namespace realite {

struct ModelConfig {
  ModelKind model = ModelKind::kDistMult;
  // Empty means the vanilla base model: r_lit = r.
  std::optional<FusionKind> fusion = FusionKind::kLinear;
  AggregationKind aggregation = AggregationKind::kMean;
  std::size_t entity_dim = 32;
  std::size_t relation_dim = 32;
  int transe_norm = 2;
  // ComplEx only: one fusion parameter set per part instead of a shared one.
  bool separate_complex_fusion = false;
  ProfileOptions profile;

  void validate() const;
};

// Width of the relation vector that fusion sees. ComplEx fuses its real and
// imaginary halves separately, so it is D_r / 2 there and D_r elsewhere.
std::size_t fusion_width(const ModelConfig& config);

// Every trainable tensor of a model. The same type doubles as the gradient
// and optimizer-moment container.
struct ModelParams {
  EmbeddingTables tables;
  std::vector<FusionParams> fusion;
  std::optional<LearnableAggregationParams> aggregation;

  // Visits (name, tensor) for every trainable tensor in a fixed order.
  template <typename Fn>
  void for_each(Fn&& fn) {
    fn(std::string("entity"), tables.entity);
    fn(std::string("relation"), tables.relation);
    if (!tables.core.empty()) fn(std::string("core"), tables.core);
    for (std::size_t i = 0; i < fusion.size(); ++i) {
      fusion[i].for_each([&](const char* name, Tensor& t) {
        fn("fusion" + std::to_string(i) + "." + name, t);
      });
    }
    if (aggregation) {
      fn(std::string("aggregation.w_a"), aggregation->weights);
      fn(std::string("aggregation.b_1"), aggregation->bias);
    }
  }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    const_cast<ModelParams*>(this)->for_each(
        [&fn](const std::string& name, Tensor& t) { fn(name, static_cast<const Tensor&>(t)); });
  }

  ModelParams zeros_like() const;
  std::size_t num_scalars() const;
};

class Model {
 public:
  // Allocates and initializes parameters. `profiles` must hold one entry per
  // relation whenever fusion is enabled.
  Model(const ModelConfig& config, std::size_t num_entities, std::size_t num_relations,
        std::size_t num_attributes, std::vector<RelationLiteralProfile> profiles,
        std::uint64_t seed);
  // Adopts existing parameters (checkpoint restore).
  Model(const ModelConfig& config, std::size_t num_attributes,
        std::vector<RelationLiteralProfile> profiles, ModelParams params);

  const ModelConfig& config() const { return config_; }
  const Scorer& scorer() const { return scorer_; }
  const ModelParams& params() const { return params_; }
  ModelParams& mutable_params() { return params_; }
  const std::vector<RelationLiteralProfile>& profiles() const { return profiles_; }
  std::size_t num_entities() const { return params_.tables.entity.rows(); }
  std::size_t num_relations() const { return params_.tables.relation.rows(); }
  std::size_t num_attributes() const { return num_attributes_; }

  // Literal-enriched relation vector r_lit; the raw row for vanilla models.
  std::vector<double> relation_embedding(RelationId r) const;
  // Back-propagates d(loss)/d(r_lit) into the relation row, fusion and
  // aggregation gradients.
  void relation_embedding_backward(RelationId r, std::span<const double> d_r_lit,
                                   ModelParams* grad) const;

  std::span<const double> entity(EntityId e) const {
    return {params_.tables.entity.row(e), params_.tables.entity.cols()};
  }

  // Trainable scalars of the base model alone (B).
  std::size_t base_param_count() const { return params_.tables.num_scalars(); }
  std::size_t param_count() const { return params_.num_scalars(); }

 private:
  void check_consistency() const;

  ModelConfig config_;
  Scorer scorer_;
  std::size_t num_attributes_;
  std::vector<RelationLiteralProfile> profiles_;
  ModelParams params_;
};

}  // namespace realite

#endif  // REALITE_MODEL_HPP_
