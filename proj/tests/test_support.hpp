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

#ifndef REALITE_TESTS_TEST_SUPPORT_HPP_
#define REALITE_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "realite/aggregation.hpp"
#include "realite/kg_data.hpp"
#include "realite/model.hpp"
#include "realite/synthetic.hpp"
#include "realite/training.hpp"

namespace realite::testing {

inline std::filesystem::path scratch_dir(const std::string& name) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("realite_test_" + std::to_string(::getpid()) + "_" + name + "_" +
              std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct RandomKgOptions {
  std::size_t entities = 8;
  std::size_t relations = 3;
  std::size_t attributes = 3;
  std::size_t train = 20;
  std::size_t valid = 0;
  std::size_t test = 0;
  double literal_density = 0.6;
};

// Random labeled KG. Every entity gets a label so the vocabulary size is
// exactly `entities` even when some never appear in a triple.
inline RawKg random_raw_kg(std::mt19937_64& rng, const RandomKgOptions& o) {
  RawKg kg;
  std::uniform_int_distribution<std::size_t> ent(0, o.entities - 1);
  std::uniform_int_distribution<std::size_t> rel(0, o.relations - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  auto fill = [&](std::vector<LabeledTriple>* out, std::size_t n) {
    std::size_t guard = 0;
    while (out->size() < n && guard++ < 100000) {
      auto key = std::make_tuple(ent(rng), rel(rng), ent(rng));
      if (!seen.insert(key).second) continue;
      out->push_back({"e" + std::to_string(std::get<0>(key)),
                      "r" + std::to_string(std::get<1>(key)),
                      "e" + std::to_string(std::get<2>(key)), 0});
    }
  };
  fill(&kg.train, o.train);
  fill(&kg.valid, o.valid);
  fill(&kg.test, o.test);
  // Pin the vocabularies: one literal per entity on attribute 0 when the
  // density draw misses, so every entity is known.
  for (std::size_t e = 0; e < o.entities; ++e) {
    bool any = false;
    for (std::size_t a = 0; a < o.attributes; ++a) {
      if (unit(rng) < o.literal_density) {
        kg.literals.push_back({"e" + std::to_string(e), "a" + std::to_string(a),
                               std::round(unit(rng) * 1000.0) - 200.0, 0});
        any = true;
      }
    }
    if (!any && o.attributes > 0) {
      kg.literals.push_back({"e" + std::to_string(e), "a0", unit(rng) * 50.0, 0});
    }
  }
  for (std::size_t a = 0; a < o.attributes; ++a) {
    kg.literals.push_back({"e0", "a" + std::to_string(a), unit(rng) * 10.0, 0});
  }
  for (std::size_t r = 0; r < o.relations; ++r) {
    kg.train.push_back({"e0", "r" + std::to_string(r), "e1", 0});
  }
  std::set<std::tuple<std::string, std::string, std::string>> uniq;
  std::vector<LabeledTriple> train;
  for (const auto& t : kg.train) {
    if (uniq.insert({t.head, t.relation, t.tail}).second) train.push_back(t);
  }
  kg.train = train;
  return kg;
}

inline KnowledgeGraph make_graph(const RawKg& kg) {
  return build_graph(kg.train, kg.valid, kg.test, kg.literals);
}

inline KnowledgeGraph random_graph(std::uint64_t seed, const RandomKgOptions& o = {}) {
  std::mt19937_64 rng(seed);
  return make_graph(random_raw_kg(rng, o));
}

inline ModelConfig toy_config(ModelKind model, std::optional<FusionKind> fusion,
                              AggregationKind aggregation, std::size_t dim = 6) {
  ModelConfig c;
  c.model = model;
  c.fusion = fusion;
  c.aggregation = aggregation;
  c.entity_dim = model == ModelKind::kRotatE ? 2 * dim : dim;
  c.relation_dim = dim;
  return c;
}

inline Model toy_model(const ModelConfig& config, const KnowledgeGraph& graph,
                       std::uint64_t seed = 7) {
  return Model(config, graph.num_entities(), graph.num_relations(), graph.num_attributes(),
               build_profiles(graph, config.profile), seed);
}

inline double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Independent recomputation of one statistic. Written against the textbook
// definitions rather than the library code paths.
inline double oracle_statistic(std::vector<double> v, std::size_t present, AggregationKind k) {
  using K = AggregationKind;
  if (k == K::kCount) return static_cast<double>(present);
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean) / n;
  auto quantile = [&](double q) {
    const double h = (n - 1.0) * q;
    const double fl = std::floor(h);
    const auto i = static_cast<std::size_t>(fl);
    if (i + 1 >= v.size()) return v.back();
    return v[i] + (h - fl) * (v[i + 1] - v[i]);
  };
  switch (k) {
    case K::kMean: return mean;
    case K::kMedian: return quantile(0.5);
    case K::kMode: {
      std::map<double, int> counts;
      for (double x : v) ++counts[x];
      double best = 0.0;
      int best_count = -1;
      for (const auto& [x, c] : counts) {
        if (c > best_count) {
          best = x;
          best_count = c;
        }
      }
      return best;
    }
    case K::kMin: return v.front();
    case K::kMax: return v.back();
    case K::kSum: return sum;
    case K::kVariance: return var;
    case K::kStd: return std::sqrt(var);
    case K::kIqr: return quantile(0.75) - quantile(0.25);
    case K::kRange: return v.back() - v.front();
    default: return 0.0;
  }
}

// Profiles recomputed from the raw labeled inputs: last-write-wins literal
// table, per-attribute min-max over all literals, set semantics over the
// deduplicated training triples. Indexed by the graph's vocabularies.
inline std::vector<RelationLiteralProfile> oracle_profiles(const RawKg& raw,
                                                           const KnowledgeGraph& g) {
  std::map<std::pair<std::string, std::string>, double> cell;
  for (const auto& l : raw.literals) cell[{l.entity, l.attribute}] = l.value;
  std::map<std::string, std::pair<double, double>> range;
  for (const auto& [key, v] : cell) {
    auto it = range.find(key.second);
    if (it == range.end()) {
      range[key.second] = {v, v};
    } else {
      it->second.first = std::min(it->second.first, v);
      it->second.second = std::max(it->second.second, v);
    }
  }
  auto normalized = [&](const std::string& e, const std::string& a, bool* present) {
    auto it = cell.find({e, a});
    *present = it != cell.end();
    if (!*present) return 0.0;
    const auto [lo, hi] = range[a];
    return hi > lo ? (it->second - lo) / (hi - lo) : 0.0;
  };
  std::vector<RelationLiteralProfile> out(g.num_relations());
  for (std::size_t r = 0; r < g.num_relations(); ++r) {
    std::set<std::string> heads, tails;
    for (const auto& t : raw.train) {
      if (t.relation == g.relations.label(r)) {
        heads.insert(t.head);
        tails.insert(t.tail);
      }
    }
    out[r].relation = static_cast<RelationId>(r);
    for (int side = 0; side < 2; ++side) {
      const auto& rows = side == 0 ? heads : tails;
      Tensor u({g.num_attributes(), kNumStatistics});
      for (std::size_t a = 0; a < g.num_attributes(); ++a) {
        std::vector<double> vals;
        std::size_t present = 0;
        for (const auto& e : rows) {
          bool p = false;
          vals.push_back(normalized(e, g.attributes.label(a), &p));
          present += p;
        }
        for (std::size_t k = 0; k < kNumStatistics; ++k) {
          u.at(a, k) = oracle_statistic(vals, present, static_cast<AggregationKind>(k));
        }
      }
      (side == 0 ? out[r].head : out[r].tail) = std::move(u);
    }
  }
  return out;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Exhaustive rank of the true entity: every candidate is scored one call at a
// time, filtered competitors are dropped, and ties are split evenly.
inline std::pair<double, double> oracle_ranks(const Model& m, const KnowledgeGraph& g,
                                              const Triple& t, bool filtered = true) {
  const auto rl = m.relation_embedding(t.relation);
  const auto& core = m.params().tables.core;
  auto side = [&](bool tail_side) {
    const EntityId truth = tail_side ? t.tail : t.head;
    auto score_of = [&](EntityId e) {
      return tail_side ? m.scorer().score(m.entity(t.head), rl, m.entity(e), core)
                       : m.scorer().score(m.entity(e), rl, m.entity(t.tail), core);
    };
    const double target = score_of(truth);
    std::vector<double> competitors;
    for (EntityId e = 0; e < g.num_entities(); ++e) {
      if (e == truth) continue;
      Triple c = t;
      (tail_side ? c.tail : c.head) = e;
      if (filtered && g.filter.contains(c)) continue;
      competitors.push_back(score_of(e));
    }
    std::sort(competitors.begin(), competitors.end(), std::greater<>());
    double better = 0.0, equal = 0.0;
    for (double s : competitors) {
      if (s > target) better += 1.0;
      if (s == target) equal += 1.0;
    }
    return ((better + 1.0) + (better + equal + 1.0)) / 2.0;
  };
  return {side(false), side(true)};
}

// max |pearson| over all (head attribute, tail attribute) pairs by explicit
// enumeration; empty when no pair reaches `min_samples` co-present points.
inline std::optional<double> oracle_max_correlation(const KnowledgeGraph& g, RelationId r,
                                                    std::size_t min_samples,
                                                    double (*pearson_fn)(std::span<const double>,
                                                                         std::span<const double>)) {
  std::optional<double> best;
  for (std::size_t a = 0; a < g.num_attributes(); ++a) {
    for (std::size_t b = 0; b < g.num_attributes(); ++b) {
      std::vector<double> xs, ys;
      for (const auto& t : g.train) {
        if (t.relation != r) continue;
        if (!g.literals.is_present(t.head, a) || !g.literals.is_present(t.tail, b)) continue;
        xs.push_back(g.literals.value(t.head, a));
        ys.push_back(g.literals.value(t.tail, b));
      }
      if (xs.size() < std::max<std::size_t>(min_samples, 2)) continue;
      const double c = std::abs(pearson_fn(xs, ys));
      best = std::max(best.value_or(0.0), c);
    }
  }
  return best;
}

struct GradCheckResult {
  std::string worst_tensor;
  double worst_error = 0.0;
  std::size_t tensors = 0;
};

// Central finite differences of symmetric_lcwa_loss_value over every scalar
// of every trainable tensor; error is |analytic - numeric| / max(|analytic|,
// |numeric|) in the Euclidean norm of each tensor.
inline GradCheckResult check_gradients(Model* model, std::span<const Triple> batch,
                                       double l2 = 0.0, double eps = 1e-5) {
  const auto analytic = symmetric_lcwa_loss(*model, batch, l2).grad;
  std::vector<std::vector<double>> numeric;
  model->mutable_params().for_each([&](const std::string&, Tensor& t) {
    std::vector<double> g(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double saved = t.data[i];
      t.data[i] = saved + eps;
      const double up = symmetric_lcwa_loss_value(*model, batch, l2);
      t.data[i] = saved - eps;
      const double down = symmetric_lcwa_loss_value(*model, batch, l2);
      t.data[i] = saved;
      g[i] = (up - down) / (2.0 * eps);
    }
    numeric.push_back(std::move(g));
  });
  GradCheckResult result;
  std::size_t k = 0;
  analytic.for_each([&](const std::string& name, const Tensor& t) {
    const auto& n = numeric[k++];
    std::vector<double> diff(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) diff[i] = t.data[i] - n[i];
    const double scale = std::max({l2_norm(t.data), l2_norm(n), 1e-7});
    const double err = l2_norm(diff) / scale;
    ++result.tensors;
    if (err > result.worst_error || result.worst_tensor.empty()) {
      result.worst_error = std::max(err, result.worst_error);
      result.worst_tensor = name;
    }
  });
  return result;
}

}  // namespace realite::testing

#endif  // REALITE_TESTS_TEST_SUPPORT_HPP_
