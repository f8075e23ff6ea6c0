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


#include <doctest.h>

#include <fstream>
#include <random>

#include "realite/downstream.hpp"
#include "test_support.hpp"

namespace realite {
namespace {

Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> data) {
  Tensor t({rows, cols});
  t.data = std::move(data);
  return t;
}

// Three Gaussian blobs in 4-D, well separated.
void blobs(std::size_t per_class, std::uint64_t seed, Tensor* x, std::vector<int>* y) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.4);
  const double centers[3][4] = {{3, 0, 0, 1}, {0, 3, 0, -1}, {0, 0, 3, 0}};
  *x = Tensor({3 * per_class, 4});
  y->clear();
  for (std::size_t i = 0; i < 3 * per_class; ++i) {
    const int c = static_cast<int>(i % 3);
    for (std::size_t d = 0; d < 4; ++d) x->at(i, d) = centers[c][d] + noise(rng);
    y->push_back(c);
  }
}

TEST_CASE("knn basics") {
  auto train = matrix(3, 2, {0, 0, 5, 5, 9, 9});
  std::vector<int> labels = {2, 0, 1};
  CHECK(knn_classify(train, labels, matrix(1, 2, {5, 5}), 1) == std::vector<int>{0});

  Tensor x;
  std::vector<int> y;
  blobs(20, 1, &x, &y);
  for (std::size_t k : {1, 3, 5, 10}) CHECK(knn_classify(x, y, x, k) == y);

  CHECK_THROWS_AS(knn_classify(Tensor({0, 2}), {}, train, 1), ValidationError);
  CHECK_THROWS_AS(knn_classify(train, labels, train, 4), ValidationError);
}

TEST_CASE("knn vote ties go to the smaller mean distance, then the smaller label") {
  // Query at the origin, k = 4: two votes each for labels 0 and 1.
  auto train = matrix(6, 2, {1, 0, 0, 3, 2, 0, 0, -1.5, 10, 10, 11, 11});
  std::vector<int> labels = {0, 0, 1, 1, 2, 2};
  // Mean distances: label 0 -> 2.0, label 1 -> 1.75.
  CHECK(knn_classify(train, labels, matrix(1, 2, {0, 0}), 4) == std::vector<int>{1});
  // Equal mean distances: smaller label wins.
  auto even = matrix(4, 2, {1, 0, -1, 0, 0, 1, 0, -1});
  std::vector<int> even_labels = {1, 1, 0, 0};
  CHECK(knn_classify(even, even_labels, matrix(1, 2, {0, 0}), 4) == std::vector<int>{0});
}

TEST_CASE("knn is invariant to a common positive scaling") {
  Tensor x, q;
  std::vector<int> y, yq;
  blobs(15, 2, &x, &y);
  blobs(10, 3, &q, &yq);
  auto base = knn_classify(x, y, q, 5);
  for (double s : {0.01, 3.0, 1000.0}) {
    Tensor xs = x, qs = q;
    for (double& v : xs.data) v *= s;
    for (double& v : qs.data) v *= s;
    CHECK(knn_classify(xs, y, qs, 5) == base);
  }
}

TEST_CASE("svm hand-stepped updates") {
  auto x = matrix(4, 2, {1, 0, 0, 1, -1, 0, 0, -1});
  std::vector<int> y = {0, 0, 1, 1};
  SvmConfig c;
  c.epochs = 1;
  c.learning_rate = 0.5;
  c.regularization = 0.1;
  auto one = svm_train(x, y, c);
  CHECK(one.weights.data == std::vector<double>{0.25, 0.25, -0.25, -0.25});
  c.epochs = 2;
  auto two = svm_train(x, y, c);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(two.weights.data[i]) == doctest::Approx(0.4875).epsilon(1e-15));
  }
  CHECK(two.bias == std::vector<double>{0.0, 0.0});
}

TEST_CASE("svm on separable data") {
  auto x = matrix(6, 2, {2, 2, 3, 1, 2.5, 3, -2, -2, -3, -1, -1.5, -2.5});
  std::vector<int> y = {0, 0, 0, 1, 1, 1};
  SvmConfig c;
  c.learning_rate = 0.05;
  c.epochs = 300;
  auto svm = svm_train(x, y, c);
  CHECK(svm.predict(x) == y);
  // Non-increasing objective under a small step.
  for (std::size_t i = 1; i < svm.objective_trace.size(); ++i) {
    CHECK(svm.objective_trace[i] <= svm.objective_trace[i - 1] + 1e-12);
  }
  // A point beyond the margin on both one-vs-rest scorers adds no hinge loss.
  LinearSvm fixed;
  fixed.weights = matrix(2, 2, {1, 1, -1, -1});
  fixed.bias = {0, 0};
  auto far = matrix(1, 2, {3, 3});
  std::vector<int> lbl = {0};
  CHECK(svm_objective(fixed, far, lbl, 0.0) == 0.0);

  std::vector<int> single = {0, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(svm_train(x, single, c), ValidationError);
}

TEST_CASE("svm is deterministic under a seed with mini-batches") {
  Tensor x;
  std::vector<int> y;
  blobs(30, 4, &x, &y);
  SvmConfig c;
  c.batch_size = 7;
  c.epochs = 20;
  auto a = svm_train(x, y, c);
  auto b = svm_train(x, y, c);
  CHECK(a.weights.data == b.weights.data);
  CHECK(a.objective_trace == b.objective_trace);
}

TEST_CASE("micro_f1") {
  std::vector<int> gold = {0, 1, 2, 1};
  CHECK(micro_f1(gold, gold) == 1.0);
  std::vector<int> pred = {0, 1, 2, 2};
  CHECK(micro_f1(pred, gold) == 0.75);
  CHECK_THROWS_AS(micro_f1(pred, std::vector<int>{0}), ValidationError);
  CHECK_THROWS_AS(micro_f1(std::vector<int>{}, std::vector<int>{}), ValidationError);
  auto cm = confusion_counts(pred, gold, 3);
  CHECK(cm[1][2] == 1);
  CHECK(cm[2][2] == 1);
  CHECK(cm[0][0] == 1);

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> lab(0, 4);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<int> p(37), g(37);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = lab(rng);
      g[i] = lab(rng);
      correct += p[i] == g[i];
    }
    CHECK(micro_f1(p, g) == static_cast<double>(correct) / 37.0);
  }
}

TEST_CASE("labeled node files and embedding export") {
  auto g = build_graph({{"a", "r", "b", 1}, {"c", "r", "d", 2}}, {}, {}, {});
  auto dir = testing::scratch_dir("nodes");
  std::ofstream(dir / "ok.tsv") << "a\tcat\ttrain\nb\tdog\ttrain\nc\tcat\ttest\n";
  auto set = load_labeled_nodes(dir / "ok.tsv", g.entities);
  CHECK(set.class_names == std::vector<std::string>{"cat", "dog"});
  CHECK(set.select(NodeSplit::kTrain).size() == 2);
  CHECK(set.select(NodeSplit::kTest).size() == 1);
  CHECK(set.nodes[1].label == 1);

  std::ofstream(dir / "bad.tsv") << "a\tcat\ttrain\nzz\tdog\ttrain\nyy\tcat\ttest\n";
  CHECK_THROWS_WITH_AS(load_labeled_nodes(dir / "bad.tsv", g.entities),
                       doctest::Contains("zz yy"), ValidationError);
  std::ofstream(dir / "split.tsv") << "a\tcat\tdev\n";
  CHECK_THROWS_AS(load_labeled_nodes(dir / "split.tsv", g.entities), ParseError);

  auto m = testing::toy_model(
      testing::toy_config(ModelKind::kComplEx, std::nullopt, AggregationKind::kMean, 4), g);
  std::vector<EntityId> nodes = {2, 0};
  auto feats = export_embeddings(m, nodes);
  CHECK(feats.rows() == 2);
  CHECK(feats.cols() == 4);
  for (std::size_t d = 0; d < 4; ++d) {
    CHECK(feats.at(0, d) == m.entity(2)[d]);
    CHECK(feats.at(1, d) == m.entity(0)[d]);
  }
  std::vector<EntityId> bad = {99};
  CHECK_THROWS_AS(export_embeddings(m, bad), ValidationError);
}

}  // namespace
}  // namespace realite
