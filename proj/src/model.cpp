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

#include "realite/model.hpp"

#include <cmath>
#include <numbers>

namespace realite {

void ModelConfig::validate() const {
  validate_dims(model, entity_dim, relation_dim);
  if (transe_norm != 1 && transe_norm != 2) throw ValidationError("transe_norm must be 1 or 2");
}

std::size_t fusion_width(const ModelConfig& config) {
  return config.model == ModelKind::kComplEx ? config.relation_dim / 2 : config.relation_dim;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z;
  z.tables.entity = tables.entity.zeros_like();
  z.tables.relation = tables.relation.zeros_like();
  z.tables.core = tables.core.zeros_like();
  for (const auto& f : fusion) z.fusion.push_back(FusionParams::zeros(f.kind, f.num_attributes, f.dim));
  if (aggregation) z.aggregation.emplace();
  return z;
}

std::size_t ModelParams::num_scalars() const {
  std::size_t n = 0;
  for_each([&n](const std::string&, const Tensor& t) { n += t.size(); });
  return n;
}

namespace {

void glorot(Tensor* t, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(t->rows() + t->cols()));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& v : t->data) v = dist(rng);
}

}  // namespace

Model::Model(const ModelConfig& config, std::size_t num_entities, std::size_t num_relations,
             std::size_t num_attributes, std::vector<RelationLiteralProfile> profiles,
             std::uint64_t seed)
    : config_(config),
      scorer_(config.model, config.entity_dim, config.relation_dim, config.transe_norm),
      num_attributes_(num_attributes),
      profiles_(std::move(profiles)) {
  config_.validate();
  std::mt19937_64 rng(seed);
  auto& t = params_.tables;
  t.entity = Tensor({num_entities, config.entity_dim});
  t.relation = Tensor({num_relations, config.relation_dim});
  glorot(&t.entity, rng);
  if (config.model == ModelKind::kRotatE) {
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    for (double& v : t.relation.data) v = phase(rng);
  } else {
    glorot(&t.relation, rng);
  }
  if (config.model == ModelKind::kTuckER) {
    t.core = Tensor({config.entity_dim, config.relation_dim, config.entity_dim});
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (double& v : t.core.data) v = 0.1 * unit(rng);
  }
  if (config.fusion) {
    const std::size_t sets =
        config.model == ModelKind::kComplEx && config.separate_complex_fusion ? 2 : 1;
    for (std::size_t i = 0; i < sets; ++i) {
      params_.fusion.push_back(
          FusionParams::zeros(*config.fusion, num_attributes, fusion_width(config)));
      init_fusion(&params_.fusion.back(), rng);
    }
    if (config.aggregation == AggregationKind::kLearnable) {
      params_.aggregation.emplace();
      glorot(&params_.aggregation->weights, rng);
    }
  }
  check_consistency();
}

Model::Model(const ModelConfig& config, std::size_t num_attributes,
             std::vector<RelationLiteralProfile> profiles, ModelParams params)
    : config_(config),
      scorer_(config.model, config.entity_dim, config.relation_dim, config.transe_norm),
      num_attributes_(num_attributes),
      profiles_(std::move(profiles)),
      params_(std::move(params)) {
  config_.validate();
  check_consistency();
}

void Model::check_consistency() const {
  const auto& t = params_.tables;
  if (t.entity.cols() != config_.entity_dim || t.relation.cols() != config_.relation_dim) {
    throw ShapeError("embedding tables do not match configured dimensions");
  }
  if ((config_.model == ModelKind::kTuckER) !=
      (t.core.size() == config_.entity_dim * config_.relation_dim * config_.entity_dim &&
       !t.core.empty())) {
    throw ShapeError("core tensor presence/shape does not match model kind");
  }
  if (!config_.fusion) return;
  if (profiles_.size() != t.relation.rows()) {
    throw ValidationError("fusion needs one literal profile per relation (" +
                          std::to_string(t.relation.rows()) + " relations, " +
                          std::to_string(profiles_.size()) + " profiles)");
  }
  for (const auto& p : profiles_) {
    if (p.head.rows() != num_attributes_ || p.tail.rows() != num_attributes_) {
      throw ShapeError("literal profile attribute count mismatch");
    }
  }
  if ((config_.aggregation == AggregationKind::kLearnable) != params_.aggregation.has_value()) {
    throw ValidationError("learnable aggregation parameters present iff aggregation=learnable");
  }
  for (const auto& f : params_.fusion) {
    if (f.kind != *config_.fusion || f.dim != fusion_width(config_) ||
        f.num_attributes != num_attributes_) {
      throw ShapeError("fusion parameter shapes do not match configuration");
    }
  }
}

std::vector<double> Model::relation_embedding(RelationId r) const {
  const Tensor& rel = params_.tables.relation;
  std::span<const double> row(rel.row(r), rel.cols());
  if (!config_.fusion) return {row.begin(), row.end()};

  const auto lv = literal_vectors(profiles_[r], config_.aggregation,
                                  params_.aggregation ? &*params_.aggregation : nullptr);
  if (config_.model != ModelKind::kComplEx) return fuse(lv.head, row, lv.tail, params_.fusion[0]);

  const std::size_t half = rel.cols() / 2;
  std::vector<double> out(rel.cols());
  for (std::size_t part = 0; part < 2; ++part) {
    const auto& fp = params_.fusion[params_.fusion.size() == 2 ? part : 0];
    auto fused = fuse(lv.head, row.subspan(part * half, half), lv.tail, fp);
    std::copy(fused.begin(), fused.end(), out.begin() + part * half);
  }
  return out;
}

void Model::relation_embedding_backward(RelationId r, std::span<const double> d_r_lit,
                                        ModelParams* grad) const {
  const Tensor& rel = params_.tables.relation;
  std::span<const double> row(rel.row(r), rel.cols());
  std::span<double> d_row(grad->tables.relation.row(r), rel.cols());
  if (!config_.fusion) {
    for (std::size_t i = 0; i < d_row.size(); ++i) d_row[i] += d_r_lit[i];
    return;
  }

  const auto* agg = params_.aggregation ? &*params_.aggregation : nullptr;
  const auto lv = literal_vectors(profiles_[r], config_.aggregation, agg);
  std::vector<double> d_lh(num_attributes_, 0.0), d_lt(num_attributes_, 0.0);
  const bool learnable = config_.aggregation == AggregationKind::kLearnable;
  std::span<double> dh = learnable ? std::span<double>(d_lh) : std::span<double>();
  std::span<double> dt = learnable ? std::span<double>(d_lt) : std::span<double>();

  if (config_.model != ModelKind::kComplEx) {
    fuse_backward(lv.head, row, lv.tail, params_.fusion[0], d_r_lit, &grad->fusion[0], dh,
                  d_row, dt);
  } else {
    const std::size_t half = rel.cols() / 2;
    for (std::size_t part = 0; part < 2; ++part) {
      const std::size_t set = params_.fusion.size() == 2 ? part : 0;
      fuse_backward(lv.head, row.subspan(part * half, half), lv.tail, params_.fusion[set],
                    d_r_lit.subspan(part * half, half), &grad->fusion[set], dh,
                    d_row.subspan(part * half, half), dt);
    }
  }
  if (learnable) literal_vectors_backward(profiles_[r], lv, d_lh, d_lt, &*grad->aggregation);
}

}  // namespace realite
