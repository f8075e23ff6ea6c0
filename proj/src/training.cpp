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

#include "realite/training.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "realite/evaluation.hpp"

namespace realite {

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "sgd";
}

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  throw ValidationError("unknown optimizer: " + std::string(name));
}

void TrainConfig::validate() const {
  if (epochs == 0) throw ValidationError("epochs must be positive");
  if (batch_size == 0) throw ValidationError("batch_size must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning_rate must be a positive finite number");
  }
  if (!(l2 >= 0.0)) throw ValidationError("l2 must be non-negative");
}

namespace {

// log-sum-exp(scores) - scores[target]; fills `probs` with the softmax.
double softmax_cross_entropy(std::span<const double> scores, std::size_t target,
                             std::vector<double>* probs) {
  const double mx = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  probs->resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    (*probs)[i] = std::exp(scores[i] - mx);
    z += (*probs)[i];
  }
  for (double& p : *probs) p /= z;
  return mx + std::log(z) - scores[target];
}

double table_sq_norm(const Tensor& t) {
  double s = 0.0;
  for (double v : t.data) s += v * v;
  return s;
}

[[noreturn]] void report_divergence(const Model& model, const Triple& t, double loss) {
  std::ostringstream msg;
  msg << "non-finite loss " << loss << " at triple (" << t.head << ", " << t.relation << ", "
      << t.tail << "); parameter norms:";
  model.params().for_each([&msg](const std::string& name, const Tensor& p) {
    msg << " " << name << "=" << std::sqrt(table_sq_norm(p));
  });
  throw NumericalError(msg.str());
}

// Shared forward (and optional backward) pass.
double run_batch(const Model& model, std::span<const Triple> batch, double l2,
                 ModelParams* grad, std::vector<double>* per_triple) {
  if (batch.empty()) throw ValidationError("symmetric_lcwa_loss: empty batch");
  const std::size_t num_ent = model.num_entities();
  const auto& tables = model.params().tables;
  const Scorer& scorer = model.scorer();

  std::map<RelationId, std::vector<double>> r_lit;
  std::map<RelationId, std::vector<double>> d_r_lit;
  for (const auto& t : batch) {
    if (t.head >= num_ent || t.tail >= num_ent || t.relation >= model.num_relations()) {
      throw ValidationError("triple index out of range");
    }
    if (!r_lit.count(t.relation)) {
      r_lit[t.relation] = model.relation_embedding(t.relation);
      if (grad) d_r_lit[t.relation].assign(scorer.relation_dim(), 0.0);
    }
  }

  const double scale = 1.0 / static_cast<double>(batch.size());
  std::vector<double> scores(num_ent), probs;
  double total = 0.0;
  for (const auto& t : batch) {
    const auto& rl = r_lit[t.relation];
    const auto head = model.entity(t.head);
    const auto tail = model.entity(t.tail);

    scorer.score_all_tails(head, rl, tables.entity, tables.core, scores);
    double loss = softmax_cross_entropy(scores, t.tail, &probs);
    if (grad) {
      probs[t.tail] -= 1.0;
      for (double& p : probs) p *= scale;
      scorer.backward_all_tails(head, rl, tables.entity, tables.core, probs,
                                {grad->tables.entity.row(t.head), tables.entity.cols()},
                                d_r_lit[t.relation], &grad->tables.entity,
                                &grad->tables.core);
    }

    scorer.score_all_heads(tail, rl, tables.entity, tables.core, scores);
    loss += softmax_cross_entropy(scores, t.head, &probs);
    if (grad) {
      probs[t.head] -= 1.0;
      for (double& p : probs) p *= scale;
      scorer.backward_all_heads(tail, rl, tables.entity, tables.core, probs,
                                {grad->tables.entity.row(t.tail), tables.entity.cols()},
                                d_r_lit[t.relation], &grad->tables.entity,
                                &grad->tables.core);
    }
    if (!std::isfinite(loss)) report_divergence(model, t, loss);
    if (per_triple) per_triple->push_back(loss);
    total += loss;
  }

  if (grad) {
    for (const auto& [rel, d] : d_r_lit) model.relation_embedding_backward(rel, d, grad);
  }

  double mean = total * scale;
  if (l2 > 0.0) {
    mean += l2 * (table_sq_norm(tables.entity) + table_sq_norm(tables.relation));
    if (grad) {
      auto add = [l2](const Tensor& p, Tensor* g) {
        for (std::size_t i = 0; i < p.size(); ++i) g->data[i] += 2.0 * l2 * p.data[i];
      };
      add(tables.entity, &grad->tables.entity);
      add(tables.relation, &grad->tables.relation);
    }
  }
  return mean;
}

}  // namespace

LossAndGradient symmetric_lcwa_loss(const Model& model, std::span<const Triple> batch,
                                    double l2) {
  LossAndGradient out;
  out.grad = model.params().zeros_like();
  out.loss = run_batch(model, batch, l2, &out.grad, nullptr);
  return out;
}

double symmetric_lcwa_loss_value(const Model& model, std::span<const Triple> batch, double l2) {
  return run_batch(model, batch, l2, nullptr, nullptr);
}

std::vector<double> per_triple_losses(const Model& model, std::span<const Triple> batch) {
  std::vector<double> out;
  run_batch(model, batch, 0.0, nullptr, &out);
  return out;
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate, const ModelParams& like)
    : kind_(kind), lr_(learning_rate) {
  if (kind_ == OptimizerKind::kAdam) {
    m_ = like.zeros_like();
    v_ = like.zeros_like();
  }
}

void Optimizer::restore(std::uint64_t steps, ModelParams m, ModelParams v) {
  steps_ = steps;
  m_ = std::move(m);
  v_ = std::move(v);
}

void Optimizer::step(ModelParams* params, const ModelParams& grad) {
  ++steps_;
  std::vector<Tensor*> p, g, m, v;
  params->for_each([&p](const std::string&, Tensor& t) { p.push_back(&t); });
  const_cast<ModelParams&>(grad).for_each([&g](const std::string&, Tensor& t) { g.push_back(&t); });
  if (p.size() != g.size()) throw ShapeError("optimizer: gradient layout differs from parameters");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]->shape != g[i]->shape) {
      throw ShapeError("optimizer: gradient shape " + shape_string(g[i]->shape) +
                       " vs parameter " + shape_string(p[i]->shape));
    }
  }

  if (kind_ == OptimizerKind::kSgd) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < p[i]->size(); ++j) p[i]->data[j] -= lr_ * g[i]->data[j];
    }
    return;
  }

  m_.for_each([&m](const std::string&, Tensor& t) { m.push_back(&t); });
  v_.for_each([&v](const std::string&, Tensor& t) { v.push_back(&t); });
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(kBeta1, t);
  const double c2 = 1.0 - std::pow(kBeta2, t);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p[i]->size(); ++j) {
      const double gj = g[i]->data[j];
      double& mj = m[i]->data[j];
      double& vj = v[i]->data[j];
      mj = kBeta1 * mj + (1.0 - kBeta1) * gj;
      vj = kBeta2 * vj + (1.0 - kBeta2) * gj * gj;
      p[i]->data[j] -= lr_ * (mj / c1) / (std::sqrt(vj / c2) + kEpsilon);
    }
  }
}

TrainResult train(Model* model, Optimizer* optimizer, const KnowledgeGraph& graph,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  TrainResult result;
  if (graph.train.empty()) throw ValidationError("training split is empty");

  std::vector<Triple> order(graph.train.begin(), graph.train.end());
  std::mt19937_64 shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  double best_mrr = -1.0;
  std::size_t stale = 0;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::span<const Triple> batch(order.data() + start, end - start);
      auto lg = symmetric_lcwa_loss(*model, batch, config.l2);
      epoch_loss += lg.loss * static_cast<double>(batch.size());
      optimizer->step(&model->mutable_params(), lg.grad);
    }
    epoch_loss /= static_cast<double>(order.size());
    result.epoch_losses.push_back(epoch_loss);
    result.epochs_run = epoch;
    if (on_epoch) on_epoch(epoch, epoch_loss);

    if (config.eval_every > 0 && !graph.valid.empty() && epoch % config.eval_every == 0) {
      auto records = rank_triples(*model, graph, graph.valid);
      const double mrr = compute_metrics(records).mrr;
      result.validation.push_back({epoch, mrr});
      if (mrr > best_mrr) {
        best_mrr = mrr;
        stale = 0;
      } else if (config.patience > 0 && ++stale >= config.patience) {
        break;
      }
    }
  }
  return result;
}

}  // namespace realite
