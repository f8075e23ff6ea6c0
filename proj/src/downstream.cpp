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

#include "realite/downstream.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "io_util.hpp"

namespace realite {

std::vector<LabeledNode> LabeledNodeSet::select(NodeSplit split) const {
  std::vector<LabeledNode> out;
  for (const auto& n : nodes) {
    if (n.split == split) out.push_back(n);
  }
  return out;
}

LabeledNodeSet load_labeled_nodes(const std::filesystem::path& path,
                                  const Vocabulary& entities) {
  struct Row {
    std::string node, label;
    NodeSplit split;
  };
  std::vector<Row> rows;
  io::for_each_line(path, [&](std::size_t n, std::string_view line) {
    if (line.find_first_not_of(" \t") == std::string_view::npos) return;
    auto f = io::split_tabs(line);
    if (f.size() != 3) {
      throw ParseError(path.string(), n,
                       "expected 3 tab-separated fields, got " + std::to_string(f.size()));
    }
    NodeSplit split;
    if (f[2] == "train") {
      split = NodeSplit::kTrain;
    } else if (f[2] == "test") {
      split = NodeSplit::kTest;
    } else {
      throw ParseError(path.string(), n, "split must be 'train' or 'test'");
    }
    rows.push_back({std::string(f[0]), std::string(f[1]), split});
  });

  std::vector<std::string> unknown;
  std::set<std::string> labels;
  for (const auto& r : rows) {
    if (!entities.contains(r.node)) unknown.push_back(r.node);
    labels.insert(r.label);
  }
  if (!unknown.empty()) {
    std::string msg = "labeled-node file references " + std::to_string(unknown.size()) +
                      " unknown node(s):";
    for (std::size_t i = 0; i < unknown.size() && i < 20; ++i) msg += " " + unknown[i];
    if (unknown.size() > 20) msg += " ...";
    throw ValidationError(msg);
  }

  LabeledNodeSet set;
  set.class_names.assign(labels.begin(), labels.end());
  std::map<std::string, int> label_index;
  for (std::size_t i = 0; i < set.class_names.size(); ++i) {
    label_index[set.class_names[i]] = static_cast<int>(i);
  }
  std::map<EntityId, NodeSplit> split_of;
  for (const auto& r : rows) {
    const EntityId e = entities.index(r.node);
    auto [it, inserted] = split_of.try_emplace(e, r.split);
    if (!inserted && it->second != r.split) {
      throw ValidationError("node " + r.node + " appears in both train and test splits");
    }
    set.nodes.push_back({e, label_index[r.label], r.split});
  }
  return set;
}

Tensor export_embeddings(const Model& model, std::span<const EntityId> nodes) {
  const Tensor& ent = model.params().tables.entity;
  Tensor out({nodes.size(), ent.cols()});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= ent.rows()) {
      throw ValidationError("export_embeddings: unknown entity index " +
                            std::to_string(nodes[i]));
    }
    std::copy(ent.row(nodes[i]), ent.row(nodes[i]) + ent.cols(), out.row(i));
  }
  return out;
}

std::vector<int> knn_classify(const Tensor& train, std::span<const int> labels,
                              const Tensor& test, std::size_t k) {
  if (train.rows() == 0) throw ValidationError("knn: empty training set");
  if (labels.size() != train.rows()) throw ValidationError("knn: label count mismatch");
  if (k == 0 || k > train.rows()) {
    throw ValidationError("knn: k must lie in [1, " + std::to_string(train.rows()) + "]");
  }
  if (test.rows() > 0 && test.cols() != train.cols()) {
    throw ShapeError("knn: feature dimensions differ");
  }
  const std::size_t D = train.cols();
  std::vector<int> out(test.rows());
  std::vector<std::pair<double, std::size_t>> dist(train.rows());
  for (std::size_t q = 0; q < test.rows(); ++q) {
    for (std::size_t i = 0; i < train.rows(); ++i) {
      double s = 0.0;
      for (std::size_t d = 0; d < D; ++d) {
        const double diff = test.at(q, d) - train.at(i, d);
        s += diff * diff;
      }
      dist[i] = {std::sqrt(s), i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::map<int, std::pair<std::size_t, double>> votes;  // label -> (count, distance sum)
    for (std::size_t j = 0; j < k; ++j) {
      auto& v = votes[labels[dist[j].second]];
      ++v.first;
      v.second += dist[j].first;
    }
    int best = -1;
    std::size_t best_count = 0;
    double best_mean = 0.0;
    for (const auto& [label, v] : votes) {  // ascending label order
      const double mean = v.second / static_cast<double>(v.first);
      if (v.first > best_count || (v.first == best_count && mean < best_mean)) {
        best = label;
        best_count = v.first;
        best_mean = mean;
      }
    }
    out[q] = best;
  }
  return out;
}

std::vector<double> LinearSvm::class_scores(std::span<const double> x) const {
  std::vector<double> s(bias);
  for (std::size_t c = 0; c < s.size(); ++c) {
    for (std::size_t d = 0; d < x.size(); ++d) s[c] += weights.at(c, d) * x[d];
  }
  return s;
}

std::vector<int> LinearSvm::predict(const Tensor& features) const {
  std::vector<int> out(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto s = class_scores({features.row(i), features.cols()});
    out[i] = static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
  }
  return out;
}

double svm_objective(const LinearSvm& svm, const Tensor& x, std::span<const int> labels,
                     double reg) {
  const std::size_t C = svm.bias.size();
  double obj = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    double sq = 0.0;
    for (std::size_t d = 0; d < x.cols(); ++d) sq += svm.weights.at(c, d) * svm.weights.at(c, d);
    obj += 0.5 * reg * sq;
  }
  double hinge = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto s = svm.class_scores({x.row(i), x.cols()});
    for (std::size_t c = 0; c < C; ++c) {
      const double y = labels[i] == static_cast<int>(c) ? 1.0 : -1.0;
      hinge += std::max(0.0, 1.0 - y * s[c]);
    }
  }
  return obj + hinge / static_cast<double>(x.rows());
}

LinearSvm svm_train(const Tensor& x, std::span<const int> labels, const SvmConfig& config) {
  if (labels.size() != x.rows() || x.rows() == 0) {
    throw ValidationError("svm: features and labels must be non-empty and aligned");
  }
  std::set<int> classes(labels.begin(), labels.end());
  if (classes.size() < 2) throw ValidationError("svm: at least two classes are required");
  if (*classes.begin() < 0) throw ValidationError("svm: labels must be non-negative");
  const std::size_t C = static_cast<std::size_t>(*classes.rbegin()) + 1;
  const std::size_t D = x.cols();
  const std::size_t N = x.rows();

  LinearSvm svm;
  svm.weights = Tensor({C, D});
  svm.bias.assign(C, 0.0);

  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  const std::size_t batch = config.batch_size == 0 ? N : std::min(config.batch_size, N);

  Tensor gw({C, D});
  std::vector<double> gb(C);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (batch < N) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < N; start += batch) {
      const std::size_t end = std::min(N, start + batch);
      const double inv = 1.0 / static_cast<double>(end - start);
      for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t d = 0; d < D; ++d) gw.at(c, d) = config.regularization * svm.weights.at(c, d);
        gb[c] = 0.0;
      }
      for (std::size_t j = start; j < end; ++j) {
        const std::size_t i = order[j];
        auto s = svm.class_scores({x.row(i), D});
        for (std::size_t c = 0; c < C; ++c) {
          const double y = labels[i] == static_cast<int>(c) ? 1.0 : -1.0;
          if (y * s[c] < 1.0) {
            for (std::size_t d = 0; d < D; ++d) gw.at(c, d) -= inv * y * x.at(i, d);
            gb[c] -= inv * y;
          }
        }
      }
      for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t d = 0; d < D; ++d) svm.weights.at(c, d) -= config.learning_rate * gw.at(c, d);
        svm.bias[c] -= config.learning_rate * gb[c];
      }
    }
    svm.objective_trace.push_back(svm_objective(svm, x, labels, config.regularization));
  }
  return svm;
}

double micro_f1(std::span<const int> predictions, std::span<const int> gold) {
  if (predictions.size() != gold.size()) {
    throw ValidationError("micro_f1: predictions and gold differ in length");
  }
  if (gold.empty()) throw ValidationError("micro_f1: empty input");
  // Pooled over classes: every wrong prediction is one FP and one FN.
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predictions[i] == gold[i]) {
      ++tp;
    } else {
      ++fp;
      ++fn;
    }
  }
  return static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn);
}

std::vector<std::vector<std::size_t>> confusion_counts(std::span<const int> predictions,
                                                       std::span<const int> gold,
                                                       std::size_t num_classes) {
  std::vector<std::vector<std::size_t>> m(num_classes, std::vector<std::size_t>(num_classes, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || predictions[i] < 0 || static_cast<std::size_t>(gold[i]) >= num_classes ||
        static_cast<std::size_t>(predictions[i]) >= num_classes) {
      throw ValidationError("confusion_counts: label out of range");
    }
    ++m[gold[i]][predictions[i]];
  }
  return m;
}

}  // namespace realite
