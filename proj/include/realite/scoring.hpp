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

#ifndef REALITE_SCORING_HPP_
#define REALITE_SCORING_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "realite/common.hpp"

namespace realite {

enum class ModelKind { kTransE, kDistMult, kComplEx, kRotatE, kTuckER };

std::string_view to_string(ModelKind kind);
ModelKind parse_model(std::string_view name);

// Embedding tables of the base model.
//
// ComplEx and RotatE pack an entity row as [real parts | imaginary parts], so
// D_e must be even. ComplEx relations are packed the same way (D_r = D_e).
// RotatE relations hold one phase per complex coordinate (D_r = D_e / 2).
// TransE and DistMult use D_r = D_e. TuckER allows any D_r and owns a core
// tensor of shape [D_e, D_r, D_e].
struct EmbeddingTables {
  Tensor entity;    // [|E|, D_e]
  Tensor relation;  // [|R|, D_r]
  Tensor core;      // [D_e, D_r, D_e], TuckER only

  std::size_t num_scalars() const { return entity.size() + relation.size() + core.size(); }
};

// Throws ShapeError when (D_e, D_r) is not a valid layout for `model`.
void validate_dims(ModelKind model, std::size_t entity_dim, std::size_t relation_dim);

// Scores (h, r, t) with r replaced by a literal-enriched r_lit. Higher is
// more plausible for every model; distance models return the negated norm.
//
// Every model is evaluated as a query context c built from the fixed side and
// r_lit, followed by a per-candidate score: <c, e> for the bilinear models and
// -||c - e||_p for TransE and RotatE.
class Scorer {
 public:
  Scorer(ModelKind model, std::size_t entity_dim, std::size_t relation_dim,
         int transe_norm = 2);

  ModelKind model() const { return model_; }
  std::size_t entity_dim() const { return entity_dim_; }
  std::size_t relation_dim() const { return relation_dim_; }

  double score(std::span<const double> head, std::span<const double> r_lit,
               std::span<const double> tail, const Tensor& core) const;

  // out[e] = score(head, r_lit, entity e).
  void score_all_tails(std::span<const double> head, std::span<const double> r_lit,
                       const Tensor& entities, const Tensor& core,
                       std::span<double> out) const;
  // out[e] = score(entity e, r_lit, tail).
  void score_all_heads(std::span<const double> tail, std::span<const double> r_lit,
                       const Tensor& entities, const Tensor& core,
                       std::span<double> out) const;

  // Accumulates gradients of sum_e d_scores[e] * out[e]. `d_core` is ignored
  // unless the model is TuckER.
  void backward_all_tails(std::span<const double> head, std::span<const double> r_lit,
                          const Tensor& entities, const Tensor& core,
                          std::span<const double> d_scores, std::span<double> d_head,
                          std::span<double> d_r_lit, Tensor* d_entities,
                          Tensor* d_core) const;
  void backward_all_heads(std::span<const double> tail, std::span<const double> r_lit,
                          const Tensor& entities, const Tensor& core,
                          std::span<const double> d_scores, std::span<double> d_tail,
                          std::span<double> d_r_lit, Tensor* d_entities,
                          Tensor* d_core) const;

  // Gradient of a single score(h, r_lit, t) scaled by d_score.
  void score_backward(std::span<const double> head, std::span<const double> r_lit,
                      std::span<const double> tail, const Tensor& core, double d_score,
                      std::span<double> d_head, std::span<double> d_r_lit,
                      std::span<double> d_tail, Tensor* d_core) const;

 private:
  enum class Direction { kTail, kHead };

  bool distance_based() const;
  std::vector<double> context(Direction dir, std::span<const double> anchor,
                              std::span<const double> r_lit, const Tensor& core) const;
  void context_backward(Direction dir, std::span<const double> anchor,
                        std::span<const double> r_lit, const Tensor& core,
                        std::span<const double> c, std::span<const double> d_c,
                        std::span<double> d_anchor, std::span<double> d_r_lit,
                        Tensor* d_core) const;
  double candidate(std::span<const double> c, const double* e) const;
  // Adds d(candidate)/dc * g to d_c and d(candidate)/de * g to d_e.
  void candidate_backward(std::span<const double> c, const double* e, double g,
                          std::span<double> d_c, double* d_e) const;
  void check(std::span<const double> anchor, std::span<const double> r_lit) const;

  ModelKind model_;
  std::size_t entity_dim_;
  std::size_t relation_dim_;
  int transe_norm_;
};

}  // namespace realite

#endif  // REALITE_SCORING_HPP_
