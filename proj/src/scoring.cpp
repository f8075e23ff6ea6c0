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

#include "realite/scoring.hpp"

#include <array>
#include <cmath>

namespace realite {

namespace {

constexpr std::array<std::string_view, 5> kModelNames = {"transe", "distmult", "complex",
                                                         "rotate", "tucker"};

}  // namespace

std::string_view to_string(ModelKind kind) {
  return kModelNames[static_cast<std::size_t>(kind)];
}

ModelKind parse_model(std::string_view name) {
  for (std::size_t i = 0; i < kModelNames.size(); ++i) {
    if (kModelNames[i] == name) return static_cast<ModelKind>(i);
  }
  throw ValidationError("unknown model kind: " + std::string(name));
}

void validate_dims(ModelKind model, std::size_t de, std::size_t dr) {
  auto fail = [&](const std::string& why) {
    throw ShapeError(std::string(to_string(model)) + ": " + why + " (D_e=" +
                     std::to_string(de) + ", D_r=" + std::to_string(dr) + ")");
  };
  if (de == 0 || dr == 0) fail("dimensions must be positive");
  switch (model) {
    case ModelKind::kTransE:
    case ModelKind::kDistMult:
      if (dr != de) fail("requires D_r == D_e");
      break;
    case ModelKind::kComplEx:
      if (de % 2 != 0) fail("requires even D_e");
      if (dr != de) fail("requires D_r == D_e");
      break;
    case ModelKind::kRotatE:
      if (de % 2 != 0) fail("requires even D_e");
      if (dr != de / 2) fail("requires D_r == D_e / 2 (one phase per complex coordinate)");
      break;
    case ModelKind::kTuckER:
      break;
  }
}

Scorer::Scorer(ModelKind model, std::size_t entity_dim, std::size_t relation_dim,
               int transe_norm)
    : model_(model),
      entity_dim_(entity_dim),
      relation_dim_(relation_dim),
      transe_norm_(transe_norm) {
  validate_dims(model, entity_dim, relation_dim);
  if (transe_norm != 1 && transe_norm != 2) {
    throw ValidationError("TransE norm must be 1 or 2");
  }
}

bool Scorer::distance_based() const {
  return model_ == ModelKind::kTransE || model_ == ModelKind::kRotatE;
}

void Scorer::check(std::span<const double> anchor, std::span<const double> r_lit) const {
  if (anchor.size() != entity_dim_) {
    throw ShapeError("entity vector has " + std::to_string(anchor.size()) +
                     " entries, expected " + std::to_string(entity_dim_));
  }
  if (r_lit.size() != relation_dim_) {
    throw ShapeError("relation vector has " + std::to_string(r_lit.size()) +
                     " entries, expected " + std::to_string(relation_dim_));
  }
}

std::vector<double> Scorer::context(Direction dir, std::span<const double> x,
                                    std::span<const double> r, const Tensor& core) const {
  const std::size_t D = entity_dim_;
  const std::size_t K = D / 2;
  std::vector<double> c(D, 0.0);
  switch (model_) {
    case ModelKind::kTransE:
      for (std::size_t i = 0; i < D; ++i) c[i] = dir == Direction::kTail ? x[i] + r[i] : x[i] - r[i];
      break;
    case ModelKind::kDistMult:
      for (std::size_t i = 0; i < D; ++i) c[i] = x[i] * r[i];
      break;
    case ModelKind::kComplEx:
      for (std::size_t k = 0; k < K; ++k) {
        const double xr = x[k], xi = x[K + k], rr = r[k], ri = r[K + k];
        if (dir == Direction::kTail) {
          c[k] = xr * rr - xi * ri;
          c[K + k] = xr * ri + xi * rr;
        } else {
          c[k] = rr * xr + ri * xi;
          c[K + k] = rr * xi - ri * xr;
        }
      }
      break;
    case ModelKind::kRotatE:
      for (std::size_t k = 0; k < K; ++k) {
        const double cs = std::cos(r[k]);
        const double sn = dir == Direction::kTail ? std::sin(r[k]) : -std::sin(r[k]);
        c[k] = x[k] * cs - x[K + k] * sn;
        c[K + k] = x[k] * sn + x[K + k] * cs;
      }
      break;
    case ModelKind::kTuckER: {
      const std::size_t R = relation_dim_;
      for (std::size_t i = 0; i < D; ++i) {
        for (std::size_t j = 0; j < R; ++j) {
          const double* w = core.data.data() + (i * R + j) * D;
          if (dir == Direction::kTail) {
            const double s = x[i] * r[j];
            for (std::size_t k = 0; k < D; ++k) c[k] += w[k] * s;
          } else {
            double acc = 0.0;
            for (std::size_t k = 0; k < D; ++k) acc += w[k] * x[k];
            c[i] += acc * r[j];
          }
        }
      }
      break;
    }
  }
  return c;
}

void Scorer::context_backward(Direction dir, std::span<const double> x,
                              std::span<const double> r, const Tensor& core,
                              std::span<const double> c, std::span<const double> dc,
                              std::span<double> dx, std::span<double> dr,
                              Tensor* d_core) const {
  const std::size_t D = entity_dim_;
  const std::size_t K = D / 2;
  switch (model_) {
    case ModelKind::kTransE:
      for (std::size_t i = 0; i < D; ++i) {
        dx[i] += dc[i];
        dr[i] += dir == Direction::kTail ? dc[i] : -dc[i];
      }
      break;
    case ModelKind::kDistMult:
      for (std::size_t i = 0; i < D; ++i) {
        dx[i] += dc[i] * r[i];
        dr[i] += dc[i] * x[i];
      }
      break;
    case ModelKind::kComplEx:
      for (std::size_t k = 0; k < K; ++k) {
        const double xr = x[k], xi = x[K + k], rr = r[k], ri = r[K + k];
        const double gr = dc[k], gi = dc[K + k];
        if (dir == Direction::kTail) {
          dx[k] += gr * rr + gi * ri;
          dx[K + k] += -gr * ri + gi * rr;
          dr[k] += gr * xr + gi * xi;
          dr[K + k] += -gr * xi + gi * xr;
        } else {
          dx[k] += gr * rr - gi * ri;
          dx[K + k] += gr * ri + gi * rr;
          dr[k] += gr * xr + gi * xi;
          dr[K + k] += gr * xi - gi * xr;
        }
      }
      break;
    case ModelKind::kRotatE:
      for (std::size_t k = 0; k < K; ++k) {
        const double cs = std::cos(r[k]);
        const double sn = dir == Direction::kTail ? std::sin(r[k]) : -std::sin(r[k]);
        const double gr = dc[k], gi = dc[K + k];
        dx[k] += gr * cs + gi * sn;
        dx[K + k] += -gr * sn + gi * cs;
        // dc/dtheta rotates c by a quarter turn, sign flipped for heads.
        const double dtheta = -gr * c[K + k] + gi * c[k];
        dr[k] += dir == Direction::kTail ? dtheta : -dtheta;
      }
      break;
    case ModelKind::kTuckER: {
      const std::size_t R = relation_dim_;
      for (std::size_t i = 0; i < D; ++i) {
        for (std::size_t j = 0; j < R; ++j) {
          const double* w = core.data.data() + (i * R + j) * D;
          double* gw = d_core ? d_core->data.data() + (i * R + j) * D : nullptr;
          if (dir == Direction::kTail) {
            // c_k = sum_ij w_ijk x_i r_j
            double wdc = 0.0;
            for (std::size_t k = 0; k < D; ++k) wdc += w[k] * dc[k];
            dx[i] += wdc * r[j];
            dr[j] += wdc * x[i];
            if (gw) {
              const double s = x[i] * r[j];
              for (std::size_t k = 0; k < D; ++k) gw[k] += s * dc[k];
            }
          } else {
            // c_i = sum_jk w_ijk r_j x_k
            double wx = 0.0;
            for (std::size_t k = 0; k < D; ++k) wx += w[k] * x[k];
            dr[j] += dc[i] * wx;
            const double s = dc[i] * r[j];
            for (std::size_t k = 0; k < D; ++k) dx[k] += s * w[k];
            if (gw) {
              for (std::size_t k = 0; k < D; ++k) gw[k] += s * x[k];
            }
          }
        }
      }
      break;
    }
  }
}

double Scorer::candidate(std::span<const double> c, const double* e) const {
  const std::size_t D = entity_dim_;
  double acc = 0.0;
  if (!distance_based()) {
    for (std::size_t i = 0; i < D; ++i) acc += c[i] * e[i];
    return acc;
  }
  if (model_ == ModelKind::kTransE && transe_norm_ == 1) {
    for (std::size_t i = 0; i < D; ++i) acc += std::abs(c[i] - e[i]);
    return -acc;
  }
  for (std::size_t i = 0; i < D; ++i) {
    const double d = c[i] - e[i];
    acc += d * d;
  }
  return -std::sqrt(acc);
}

void Scorer::candidate_backward(std::span<const double> c, const double* e, double g,
                                std::span<double> d_c, double* d_e) const {
  const std::size_t D = entity_dim_;
  if (!distance_based()) {
    for (std::size_t i = 0; i < D; ++i) {
      d_c[i] += g * e[i];
      if (d_e) d_e[i] += g * c[i];
    }
    return;
  }
  if (model_ == ModelKind::kTransE && transe_norm_ == 1) {
    for (std::size_t i = 0; i < D; ++i) {
      const double d = c[i] - e[i];
      const double s = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
      d_c[i] -= g * s;
      if (d_e) d_e[i] += g * s;
    }
    return;
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < D; ++i) sq += (c[i] - e[i]) * (c[i] - e[i]);
  const double norm = std::sqrt(sq);
  // Zero subgradient at the kink.
  if (norm == 0.0) return;
  for (std::size_t i = 0; i < D; ++i) {
    const double u = g * (c[i] - e[i]) / norm;
    d_c[i] -= u;
    if (d_e) d_e[i] += u;
  }
}

double Scorer::score(std::span<const double> head, std::span<const double> r_lit,
                     std::span<const double> tail, const Tensor& core) const {
  check(head, r_lit);
  check(tail, r_lit);
  auto c = context(Direction::kTail, head, r_lit, core);
  return candidate(c, tail.data());
}

void Scorer::score_all_tails(std::span<const double> head, std::span<const double> r_lit,
                             const Tensor& entities, const Tensor& core,
                             std::span<double> out) const {
  check(head, r_lit);
  if (out.size() != entities.rows()) throw ShapeError("score_all_tails: output size");
  auto c = context(Direction::kTail, head, r_lit, core);
  for (std::size_t e = 0; e < entities.rows(); ++e) out[e] = candidate(c, entities.row(e));
}

void Scorer::score_all_heads(std::span<const double> tail, std::span<const double> r_lit,
                             const Tensor& entities, const Tensor& core,
                             std::span<double> out) const {
  check(tail, r_lit);
  if (out.size() != entities.rows()) throw ShapeError("score_all_heads: output size");
  auto c = context(Direction::kHead, tail, r_lit, core);
  for (std::size_t e = 0; e < entities.rows(); ++e) out[e] = candidate(c, entities.row(e));
}

void Scorer::backward_all_tails(std::span<const double> head, std::span<const double> r_lit,
                                const Tensor& entities, const Tensor& core,
                                std::span<const double> d_scores, std::span<double> d_head,
                                std::span<double> d_r_lit, Tensor* d_entities,
                                Tensor* d_core) const {
  check(head, r_lit);
  auto c = context(Direction::kTail, head, r_lit, core);
  std::vector<double> dc(entity_dim_, 0.0);
  for (std::size_t e = 0; e < entities.rows(); ++e) {
    if (d_scores[e] == 0.0) continue;
    candidate_backward(c, entities.row(e), d_scores[e], dc,
                       d_entities ? d_entities->row(e) : nullptr);
  }
  context_backward(Direction::kTail, head, r_lit, core, c, dc, d_head, d_r_lit, d_core);
}

void Scorer::backward_all_heads(std::span<const double> tail, std::span<const double> r_lit,
                                const Tensor& entities, const Tensor& core,
                                std::span<const double> d_scores, std::span<double> d_tail,
                                std::span<double> d_r_lit, Tensor* d_entities,
                                Tensor* d_core) const {
  check(tail, r_lit);
  auto c = context(Direction::kHead, tail, r_lit, core);
  std::vector<double> dc(entity_dim_, 0.0);
  for (std::size_t e = 0; e < entities.rows(); ++e) {
    if (d_scores[e] == 0.0) continue;
    candidate_backward(c, entities.row(e), d_scores[e], dc,
                       d_entities ? d_entities->row(e) : nullptr);
  }
  context_backward(Direction::kHead, tail, r_lit, core, c, dc, d_tail, d_r_lit, d_core);
}

void Scorer::score_backward(std::span<const double> head, std::span<const double> r_lit,
                            std::span<const double> tail, const Tensor& core, double d_score,
                            std::span<double> d_head, std::span<double> d_r_lit,
                            std::span<double> d_tail, Tensor* d_core) const {
  check(head, r_lit);
  check(tail, r_lit);
  auto c = context(Direction::kTail, head, r_lit, core);
  std::vector<double> dc(entity_dim_, 0.0);
  candidate_backward(c, tail.data(), d_score, dc, d_tail.data());
  context_backward(Direction::kTail, head, r_lit, core, c, dc, d_head, d_r_lit, d_core);
}

}  // namespace realite
