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

#include "realite/aggregation.hpp"
#include "test_support.hpp"

namespace realite {
namespace {

using K = AggregationKind;

double stat(std::vector<double> v, K k, std::size_t present = 0) {
  return aggregate_column(v, present, k);
}

TEST_CASE("fixed statistics") {
  CHECK(stat({0.2, 0.4, 0.6}, K::kMean) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(stat({0.3, 0.3, 0.7, 0.7}, K::kMode) == 0.3);
  CHECK(stat({0.7, 0.3, 0.7, 0.3}, K::kMode) == 0.3);
  CHECK(stat({0.1, 0.7, 0.7, 0.3}, K::kMode) == 0.7);
  CHECK(stat({0.0, 1.0, 2.0, 3.0}, K::kIqr) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(interpolated_quantile(std::vector<double>{0, 1, 2, 3}, 0.25) == 0.75);
  CHECK(interpolated_quantile(std::vector<double>{0, 1, 2, 3}, 0.75) == 2.25);
  CHECK(stat({0.0, 0.0, 0.0}, K::kVariance) == 0.0);
  CHECK(stat({5.0}, K::kMedian) == 5.0);
  CHECK(stat({1.0, 4.0}, K::kMedian) == 2.5);
  CHECK(stat({1.0, 4.0}, K::kCount, 1) == 1.0);
  CHECK_THROWS_AS(stat({1.0}, K::kLearnable), ValidationError);
}

TEST_CASE("empty population gives zeros except count") {
  auto s = column_statistics({}, 0);
  for (double v : s) CHECK(v == 0.0);
}

TEST_CASE("two-row profile matches hand computation") {
  // Head rows 0.2 and 0.4 on the only attribute: raw 2 and 4 within [0, 10].
  std::vector<LabeledTriple> train = {{"h1", "r", "t", 1}, {"h2", "r", "t", 2}};
  std::vector<LabeledLiteral> lits = {
      {"lo", "a", 0, 1}, {"hi", "a", 10, 2}, {"h1", "a", 2, 3}, {"h2", "a", 4, 4}};
  auto g = build_graph(train, {}, {}, lits);
  auto profiles = build_profiles(g);
  const auto& u = profiles[g.relations.index("r")].head;
  const std::array<double, kNumStatistics> expected = {0.3, 0.3, 0.2, 0.2, 0.4, 0.6,
                                                       2,   0.01, 0.1, 0.1, 0.2};
  for (std::size_t k = 0; k < kNumStatistics; ++k) {
    CAPTURE(to_string(static_cast<K>(k)));
    CHECK(u.at(0, k) == doctest::Approx(expected[k]).epsilon(1e-12));
  }
  // Tail "t" carries no literal: value statistics over a stored zero, count 0.
  const auto& tail = profiles[g.relations.index("r")].tail;
  for (std::size_t k = 0; k < kNumStatistics; ++k) CHECK(tail.at(0, k) == 0.0);
}

TEST_CASE("collect_side_rows") {
  auto g = build_graph({{"a", "r", "b", 1}, {"c", "r", "b", 2}}, {}, {{"b", "s", "a", 1}}, {});
  const auto r = g.relations.index("r");
  const auto s = g.relations.index("s");
  auto heads = collect_side_rows(g, r, Side::kHead);
  CHECK(heads == std::vector<EntityId>{g.entities.index("a"), g.entities.index("c")});
  CHECK(collect_side_rows(g, r, Side::kTail) == std::vector<EntityId>{g.entities.index("b")});
  CHECK(collect_side_rows(g, r, Side::kTail, true).size() == 2);
  // s only occurs in the test split.
  CHECK(collect_side_rows(g, s, Side::kHead).empty());
  auto profiles = build_profiles(g);
  for (double v : profiles[s].head.data) CHECK(v == 0.0);
  for (double v : profiles[s].tail.data) CHECK(v == 0.0);
}

TEST_CASE("profiles match the brute-force oracle") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    std::mt19937_64 rng(seed);
    testing::RandomKgOptions o;
    o.entities = 10;
    o.train = 30;
    o.test = 5;
    auto raw = testing::random_raw_kg(rng, o);
    auto g = testing::make_graph(raw);
    auto got = build_profiles(g);
    auto want = testing::oracle_profiles(raw, g);
    for (std::size_t r = 0; r < got.size(); ++r) {
      for (std::size_t i = 0; i < got[r].head.size(); ++i) {
        CHECK(std::abs(got[r].head.data[i] - want[r].head.data[i]) <= 1e-9);
        CHECK(std::abs(got[r].tail.data[i] - want[r].tail.data[i]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("profiles are invariant to training triple order") {
  std::mt19937_64 rng(5);
  auto raw = testing::random_raw_kg(rng, {});
  auto base = build_profiles(testing::make_graph(raw));
  for (int i = 0; i < 5; ++i) {
    std::shuffle(raw.train.begin(), raw.train.end(), rng);
    auto shuffled = build_profiles(testing::make_graph(raw));
    for (std::size_t r = 0; r < base.size(); ++r) {
      CHECK(shuffled[r].head.data == base[r].head.data);
      CHECK(shuffled[r].tail.data == base[r].tail.data);
    }
  }
}

TEST_CASE("max grows when a larger head row joins") {
  std::vector<LabeledTriple> train = {{"a", "r", "z", 1}, {"b", "r", "z", 2}};
  std::vector<LabeledLiteral> lits = {
      {"a", "x", 1, 1}, {"b", "x", 2, 2}, {"c", "x", 5, 3}, {"z", "x", 0, 4}};
  auto before = build_profiles(build_graph(train, {}, {}, lits))[0].head;
  train.push_back({"c", "r", "z", 3});
  auto after = build_profiles(build_graph(train, {}, {}, lits))[0].head;
  CHECK(after.at(0, static_cast<std::size_t>(K::kMax)) >
        before.at(0, static_cast<std::size_t>(K::kMax)));
  CHECK(after.at(0, static_cast<std::size_t>(K::kCount)) >=
        before.at(0, static_cast<std::size_t>(K::kCount)));
}

TEST_CASE("multiset and all-rows profile options") {
  // a heads r twice, b once. Values a = 0, b = 1 after normalization.
  std::vector<LabeledTriple> train = {
      {"a", "r", "x", 1}, {"a", "r", "y", 2}, {"b", "r", "x", 3}};
  std::vector<LabeledLiteral> lits = {{"a", "v", 0, 1}, {"b", "v", 10, 2}};
  auto g = build_graph(train, {}, {}, lits);
  const auto mean = static_cast<std::size_t>(K::kMean);
  CHECK(build_profiles(g)[0].head.at(0, mean) == doctest::Approx(0.5));
  ProfileOptions multi;
  multi.multiset_rows = true;
  CHECK(build_profiles(g, multi)[0].head.at(0, mean) == doctest::Approx(1.0 / 3.0));
  ProfileOptions all;
  all.aggregate_over_all_rows = true;
  // Four entities, two participating heads: (0 + 1 + 0 + 0) / 4.
  CHECK(build_profiles(g, all)[0].head.at(0, mean) == doctest::Approx(0.25));
  all.multiset_rows = true;
  // Multiset rows plus the two non-participating zero rows: 1 / 5.
  CHECK(build_profiles(g, all)[0].head.at(0, mean) == doctest::Approx(0.2));
}

RelationLiteralProfile single_profile(double mean) {
  RelationLiteralProfile p;
  p.head = Tensor({1, kNumStatistics});
  p.tail = Tensor({1, kNumStatistics});
  p.head.at(0, static_cast<std::size_t>(K::kMean)) = mean;
  p.head.at(0, static_cast<std::size_t>(K::kMin)) = 0.2;
  return p;
}

TEST_CASE("literal_vectors") {
  auto p = single_profile(0.3);
  CHECK(literal_vectors(p, K::kMin, nullptr).head[0] == 0.2);
  CHECK(literal_vectors(p, K::kMean, nullptr).tail[0] == 0.0);
  CHECK_THROWS_AS(literal_vectors(p, K::kLearnable, nullptr), ValidationError);

  LearnableAggregationParams params;
  auto y = literal_vectors(p, K::kLearnable, &params);
  CHECK(y.head[0] == 0.5);
  CHECK(y.tail[0] == 0.5);

  params.weights.data[static_cast<std::size_t>(K::kMean)] = 1.0;
  y = literal_vectors(p, K::kLearnable, &params);
  CHECK(y.head[0] == doctest::Approx(0.574442516811659).epsilon(1e-14));
}

TEST_CASE("learnable output lies in (0, 1) and its gradient matches finite differences") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RelationLiteralProfile p;
  p.head = Tensor({3, kNumStatistics});
  p.tail = Tensor({3, kNumStatistics});
  for (double& v : p.head.data) v = u(rng);
  for (double& v : p.tail.data) v = u(rng);
  LearnableAggregationParams params;
  for (double& v : params.weights.data) v = u(rng);
  params.bias.data[0] = u(rng);
  std::vector<double> wh = {0.3, -1.2, 0.7}, wt = {1.1, 0.4, -0.5};
  auto objective = [&](const LearnableAggregationParams& q) {
    auto y = literal_vectors(p, K::kLearnable, &q);
    double s = 0.0;
    for (std::size_t a = 0; a < 3; ++a) s += wh[a] * y.head[a] + wt[a] * y.tail[a];
    return s;
  };
  auto y = literal_vectors(p, K::kLearnable, &params);
  for (double v : y.head) CHECK((v > 0.0 && v < 1.0));
  LearnableAggregationParams grad;
  grad.weights.fill(0.0);
  literal_vectors_backward(p, y, wh, wt, &grad);
  const double eps = 1e-6;
  for (std::size_t k = 0; k <= kNumStatistics; ++k) {
    auto up = params, down = params;
    double& pu = k < kNumStatistics ? up.weights.data[k] : up.bias.data[0];
    double& pd = k < kNumStatistics ? down.weights.data[k] : down.bias.data[0];
    pu += eps;
    pd -= eps;
    const double numeric = (objective(up) - objective(down)) / (2 * eps);
    const double analytic = k < kNumStatistics ? grad.weights.data[k] : grad.bias.data[0];
    CHECK(std::abs(numeric - analytic) <= 1e-4 * std::max(1.0, std::abs(numeric)));
  }
}

TEST_CASE("profile file round trip") {
  auto g = testing::random_graph(17);
  auto profiles = build_profiles(g);
  auto dir = testing::scratch_dir("profiles");
  save_profiles(profiles, g.num_attributes(), dir / "profiles.tsv");
  auto back = load_profiles(dir / "profiles.tsv", g.num_relations(), g.num_attributes());
  for (std::size_t r = 0; r < profiles.size(); ++r) {
    CHECK(back[r].head.data == profiles[r].head.data);
    CHECK(back[r].tail.data == profiles[r].tail.data);
  }
}

TEST_CASE("aggregation names") {
  for (std::size_t k = 0; k <= kNumStatistics; ++k) {
    const auto kind = static_cast<K>(k);
    CHECK(parse_aggregation(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_aggregation("average"), ValidationError);
}

}  // namespace
}  // namespace realite
