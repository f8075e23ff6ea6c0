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

#include "realite/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "io_util.hpp"

namespace realite {

namespace {

constexpr std::array<std::string_view, 12> kKindNames = {
    "mean", "median", "mode", "min", "max", "sum", "count",
    "variance", "std", "iqr", "range", "learnable"};

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

std::string_view to_string(AggregationKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

AggregationKind parse_aggregation(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<AggregationKind>(i);
  }
  throw ValidationError("unknown aggregation kind: " + std::string(name));
}

double interpolated_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = (sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - lo;
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::array<double, kNumStatistics> column_statistics(std::span<const double> values,
                                                     std::size_t present_count) {
  std::array<double, kNumStatistics> s{};
  s[static_cast<std::size_t>(AggregationKind::kCount)] = static_cast<double>(present_count);
  const std::size_t n = values.size();
  if (n == 0) return s;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  const double mean = sum / n;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double variance = sq / n;

  // Longest run in sorted order; strict '>' keeps the smallest value on ties.
  double mode = sorted[0];
  std::size_t best = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    if (j - i > best) {
      best = j - i;
      mode = sorted[i];
    }
    i = j;
  }

  using K = AggregationKind;
  auto at = [&s](K k) -> double& { return s[static_cast<std::size_t>(k)]; };
  at(K::kMean) = mean;
  at(K::kMedian) = interpolated_quantile(sorted, 0.5);
  at(K::kMode) = mode;
  at(K::kMin) = sorted.front();
  at(K::kMax) = sorted.back();
  at(K::kSum) = sum;
  at(K::kVariance) = variance;
  at(K::kStd) = std::sqrt(variance);
  at(K::kIqr) = interpolated_quantile(sorted, 0.75) - interpolated_quantile(sorted, 0.25);
  at(K::kRange) = sorted.back() - sorted.front();
  return s;
}

double aggregate_column(std::span<const double> values, std::size_t present_count,
                        AggregationKind kind) {
  if (kind == AggregationKind::kLearnable) {
    throw ValidationError("aggregate_column: learnable is not a fixed statistic");
  }
  return column_statistics(values, present_count)[static_cast<std::size_t>(kind)];
}

std::vector<EntityId> collect_side_rows(const KnowledgeGraph& graph, RelationId relation,
                                        Side side, bool multiset) {
  std::vector<EntityId> rows;
  for (const auto& t : graph.train) {
    if (t.relation == relation) rows.push_back(side == Side::kHead ? t.head : t.tail);
  }
  std::sort(rows.begin(), rows.end());
  if (!multiset) rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

namespace {

Tensor side_profile(const LiteralMatrix& lit, const std::vector<EntityId>& rows,
                    const ProfileOptions& options) {
  const std::size_t num_attr = lit.num_attributes;
  Tensor u({num_attr, kNumStatistics});
  std::vector<double> column;
  for (std::size_t a = 0; a < num_attr; ++a) {
    column.clear();
    std::size_t present = 0;
    for (EntityId e : rows) {
      column.push_back(lit.value(e, a));
      present += lit.is_present(e, a) ? 1 : 0;
    }
    if (options.aggregate_over_all_rows) {
      // Non-participating rows are zeroed rows of the full matrix.
      std::size_t distinct = rows.size();
      if (options.multiset_rows) {
        distinct = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (i == 0 || rows[i] != rows[i - 1]) ++distinct;
        }
      }
      column.resize(column.size() + (lit.num_entities - distinct), 0.0);
    }
    auto stats = column_statistics(column, present);
    std::copy(stats.begin(), stats.end(), u.row(a));
  }
  return u;
}

}  // namespace

std::vector<RelationLiteralProfile> build_profiles(const KnowledgeGraph& graph,
                                                   const ProfileOptions& options) {
  const std::size_t num_rel = graph.num_relations();
  std::vector<std::vector<EntityId>> heads(num_rel), tails(num_rel);
  for (const auto& t : graph.train) {
    heads[t.relation].push_back(t.head);
    tails[t.relation].push_back(t.tail);
  }
  std::vector<RelationLiteralProfile> profiles(num_rel);
  for (std::size_t r = 0; r < num_rel; ++r) {
    for (auto* rows : {&heads[r], &tails[r]}) {
      std::sort(rows->begin(), rows->end());
      if (!options.multiset_rows) rows->erase(std::unique(rows->begin(), rows->end()), rows->end());
    }
    profiles[r].relation = static_cast<RelationId>(r);
    profiles[r].head = side_profile(graph.literals, heads[r], options);
    profiles[r].tail = side_profile(graph.literals, tails[r], options);
  }
  return profiles;
}

namespace {

std::vector<double> learnable_side(const Tensor& u, const LearnableAggregationParams& p) {
  std::vector<double> y(u.rows());
  for (std::size_t a = 0; a < u.rows(); ++a) {
    double z = p.bias.data[0];
    for (std::size_t k = 0; k < kNumStatistics; ++k) z += u.at(a, k) * p.weights.data[k];
    y[a] = sigmoid(z);
  }
  return y;
}

std::vector<double> fixed_side(const Tensor& u, AggregationKind kind) {
  std::vector<double> v(u.rows());
  for (std::size_t a = 0; a < u.rows(); ++a) v[a] = u.at(a, static_cast<std::size_t>(kind));
  return v;
}

void learnable_side_backward(const Tensor& u, std::span<const double> y,
                             std::span<const double> dy, LearnableAggregationParams* grad) {
  for (std::size_t a = 0; a < u.rows(); ++a) {
    const double dz = dy[a] * y[a] * (1.0 - y[a]);
    grad->bias.data[0] += dz;
    for (std::size_t k = 0; k < kNumStatistics; ++k) grad->weights.data[k] += u.at(a, k) * dz;
  }
}

}  // namespace

LiteralVectors literal_vectors(const RelationLiteralProfile& profile, AggregationKind kind,
                               const LearnableAggregationParams* params) {
  if (kind == AggregationKind::kLearnable) {
    if (params == nullptr) {
      throw ValidationError("learnable aggregation requires aggregation parameters");
    }
    return {learnable_side(profile.head, *params), learnable_side(profile.tail, *params)};
  }
  return {fixed_side(profile.head, kind), fixed_side(profile.tail, kind)};
}

void literal_vectors_backward(const RelationLiteralProfile& profile,
                              const LiteralVectors& outputs, std::span<const double> d_head,
                              std::span<const double> d_tail,
                              LearnableAggregationParams* grad) {
  learnable_side_backward(profile.head, outputs.head, d_head, grad);
  learnable_side_backward(profile.tail, outputs.tail, d_tail, grad);
}

void save_profiles(const std::vector<RelationLiteralProfile>& profiles,
                   std::size_t num_attributes, const std::filesystem::path& file) {
  std::string out;
  for (const auto& p : profiles) {
    for (int side = 0; side < 2; ++side) {
      const Tensor& u = side == 0 ? p.head : p.tail;
      for (std::size_t a = 0; a < num_attributes; ++a) {
        out += std::to_string(p.relation);
        out += side == 0 ? "\thead\t" : "\ttail\t";
        out += std::to_string(a);
        for (std::size_t k = 0; k < kNumStatistics; ++k) {
          out += '\t';
          out += io::format_double(u.at(a, k));
        }
        out += '\n';
      }
    }
  }
  io::write_file(file, out);
}

std::vector<RelationLiteralProfile> load_profiles(const std::filesystem::path& file,
                                                  std::size_t num_relations,
                                                  std::size_t num_attributes) {
  std::vector<RelationLiteralProfile> profiles(num_relations);
  for (std::size_t r = 0; r < num_relations; ++r) {
    profiles[r].relation = static_cast<RelationId>(r);
    profiles[r].head = Tensor({num_attributes, kNumStatistics});
    profiles[r].tail = Tensor({num_attributes, kNumStatistics});
  }
  io::for_each_line(file, [&](std::size_t n, std::string_view line) {
    if (line.empty()) return;
    auto f = io::split_tabs(line);
    bool ok = f.size() == 3 + kNumStatistics;
    std::size_t r = 0, a = 0;
    if (ok) {
      bool ok_r = false, ok_a = false;
      r = io::parse_index(f[0], &ok_r);
      a = io::parse_index(f[2], &ok_a);
      ok = ok_r && ok_a && r < num_relations && a < num_attributes &&
           (f[1] == "head" || f[1] == "tail");
    }
    if (!ok) throw ParseError(file.string(), n, "invalid profile row");
    Tensor& u = f[1] == "head" ? profiles[r].head : profiles[r].tail;
    for (std::size_t k = 0; k < kNumStatistics; ++k) {
      bool ok_v = false;
      u.at(a, k) = io::parse_double(f[3 + k], &ok_v);
      if (!ok_v) throw ParseError(file.string(), n, "invalid profile value");
    }
  });
  return profiles;
}

}  // namespace realite
