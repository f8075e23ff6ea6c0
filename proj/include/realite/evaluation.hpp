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

#ifndef REALITE_EVALUATION_HPP_
#define REALITE_EVALUATION_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "realite/kg_data.hpp"
#include "realite/model.hpp"

namespace realite {

enum class TiePolicy { kRealistic, kOptimistic, kPessimistic };

std::string_view to_string(TiePolicy policy);
TiePolicy parse_tie_policy(std::string_view name);

struct RankRecord {
  Triple triple;
  double head_rank = 0.0;
  double tail_rank = 0.0;
};

// Rank of scores[target] among all entries, higher score first. Entities in
// `filtered` other than `target` are removed from the competition. Realistic
// ties take the mean of the optimistic and pessimistic rank.
double rank_of(std::span<const double> scores, EntityId target,
               std::span<const EntityId> filtered, TiePolicy policy);

struct RankOptions {
  TiePolicy tie_policy = TiePolicy::kRealistic;
  bool filtered = true;
  std::size_t threads = 1;
};

RankRecord rank_triple(const Model& model, const KnowledgeGraph& graph, const Triple& triple,
                       const RankOptions& options = {});

// Ranks every triple; output order matches input order for any thread count.
std::vector<RankRecord> rank_triples(const Model& model, const KnowledgeGraph& graph,
                                     std::span<const Triple> triples,
                                     const RankOptions& options = {});

struct Metrics {
  double mrr = 0.0;
  double hits_at_1 = 0.0;
  double hits_at_10 = 0.0;
  std::size_t num_ranks = 0;
};

// Pools head and tail ranks. Throws ValidationError on empty input.
Metrics compute_metrics(std::span<const RankRecord> records);

enum class GroupingKind { kFrequency, kCorrelation };

std::string_view to_string(GroupingKind kind);

// Two-way partition of the relation vocabulary. group_of[r] indexes labels.
struct RelationGrouping {
  GroupingKind kind = GroupingKind::kFrequency;
  double threshold = 0.0;
  std::vector<std::string> labels;
  std::vector<int> group_of;
};

// An absolute count ("2817") or a percentage of training triples ("2.55%").
struct FrequencyThreshold {
  double value = 0.0;
  bool is_fraction = false;

  static FrequencyThreshold parse(std::string_view text);
  double resolve(std::size_t num_train_triples) const;
};

// frequent iff the relation's training-triple count exceeds the threshold.
RelationGrouping group_by_frequency(const KnowledgeGraph& graph, double threshold_count);
RelationGrouping group_by_frequency(const KnowledgeGraph& graph,
                                    const FrequencyThreshold& threshold);

// Pearson correlation. 0 when n < 2 or either series is constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Largest |pearson| over (head attribute, tail attribute) pairs for one
// relation, using training triples where both cells are present. Pairs with
// fewer than `min_samples` points are skipped; empty if none qualify.
std::optional<double> max_abs_attribute_correlation(const KnowledgeGraph& graph, RelationId relation,
                                     std::size_t min_samples = 3);

// correlated iff some attribute pair reaches |coef| >= threshold.
RelationGrouping group_by_correlation(const KnowledgeGraph& graph, double threshold,
                                      std::size_t min_samples = 3);

struct GroupReport {
  std::string label;
  std::size_t num_relations = 0;
  std::size_t num_triples = 0;
  std::optional<Metrics> metrics;  // empty for a group with no test triples
};

struct EvaluationReport {
  std::string split;
  std::size_t num_triples = 0;
  Metrics overall;
  std::optional<RelationGrouping> grouping;
  // One entry per group label, then the "All triples" row.
  std::vector<GroupReport> groups;

  nlohmann::json to_json() const;
  std::string to_table() const;
};

inline constexpr std::string_view kAllTriplesLabel = "All triples";

EvaluationReport evaluate(const Model& model, const KnowledgeGraph& graph,
                          std::span<const Triple> triples,
                          const RelationGrouping* grouping = nullptr,
                          const RankOptions& options = {}, std::string split = "test");

}  // namespace realite

#endif  // REALITE_EVALUATION_HPP_
