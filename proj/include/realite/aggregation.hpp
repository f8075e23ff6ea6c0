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

#ifndef REALITE_AGGREGATION_HPP_
#define REALITE_AGGREGATION_HPP_

#include <array>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "realite/common.hpp"
#include "realite/kg_data.hpp"

namespace realite {

// The order of the fixed kinds is the column order of a profile matrix.
enum class AggregationKind {
  kMean,
  kMedian,
  kMode,
  kMin,
  kMax,
  kSum,
  kCount,
  kVariance,
  kStd,
  kIqr,
  kRange,
  kLearnable,
};

inline constexpr std::size_t kNumStatistics = 11;

std::string_view to_string(AggregationKind kind);
AggregationKind parse_aggregation(std::string_view name);

// Quantile with linear interpolation at position (n - 1) * q over a sorted
// sample. Returns 0 for an empty sample.
double interpolated_quantile(std::span<const double> sorted, double q);

// One statistic over a column slice. `values` holds the selected rows with
// absent cells stored as 0; `present_count` only feeds kCount.
double aggregate_column(std::span<const double> values, std::size_t present_count,
                        AggregationKind kind);

// All eleven statistics at once, in AggregationKind order.
std::array<double, kNumStatistics> column_statistics(std::span<const double> values,
                                                     std::size_t present_count);

enum class Side { kHead, kTail };

struct ProfileOptions {
  // Aggregate over every entity row with non-participating rows zeroed,
  // instead of over the relation's own entities only.
  bool aggregate_over_all_rows = false;
  // Count an entity once per training triple instead of once per relation.
  bool multiset_rows = false;
};

// Entities on `side` of `relation` in the training split, ascending. With
// `multiset` an entity repeats once per triple.
std::vector<EntityId> collect_side_rows(const KnowledgeGraph& graph, RelationId relation,
                                        Side side, bool multiset = false);

// Per-relation |A| x 11 statistics of head and tail literal rows.
struct RelationLiteralProfile {
  RelationId relation = 0;
  Tensor head;  // [|A|, 11]
  Tensor tail;  // [|A|, 11]
};

std::vector<RelationLiteralProfile> build_profiles(const KnowledgeGraph& graph,
                                                   const ProfileOptions& options = {});

// y = sigmoid(U * weights + bias), shared between the head and tail sides.
struct LearnableAggregationParams {
  Tensor weights{{kNumStatistics, 1}};
  Tensor bias{{1}};

  std::size_t num_scalars() const { return weights.size() + bias.size(); }
};

struct LiteralVectors {
  std::vector<double> head;
  std::vector<double> tail;
};

// Reduces a profile to the (l_h, l_t) pair. Throws ValidationError when the
// kind is kLearnable and `params` is null.
LiteralVectors literal_vectors(const RelationLiteralProfile& profile, AggregationKind kind,
                               const LearnableAggregationParams* params);

// Accumulates d(loss)/d(params) for the learnable kind, given the outputs of
// literal_vectors and the upstream gradients on both sides.
void literal_vectors_backward(const RelationLiteralProfile& profile,
                              const LiteralVectors& outputs, std::span<const double> d_head,
                              std::span<const double> d_tail,
                              LearnableAggregationParams* grad);

// profiles.tsv: `relation<TAB>side<TAB>attribute<TAB>` followed by the eleven
// statistics, one row per (relation, side, attribute).
void save_profiles(const std::vector<RelationLiteralProfile>& profiles,
                   std::size_t num_attributes, const std::filesystem::path& file);
std::vector<RelationLiteralProfile> load_profiles(const std::filesystem::path& file,
                                                  std::size_t num_relations,
                                                  std::size_t num_attributes);

}  // namespace realite

#endif  // REALITE_AGGREGATION_HPP_
