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

#include "realite/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <thread>

#include <spdlog/spdlog.h>

#include "io_util.hpp"

namespace realite {

std::string_view to_string(TiePolicy policy) {
  switch (policy) {
    case TiePolicy::kRealistic: return "realistic";
    case TiePolicy::kOptimistic: return "optimistic";
    case TiePolicy::kPessimistic: return "pessimistic";
  }
  return "realistic";
}

TiePolicy parse_tie_policy(std::string_view name) {
  if (name == "realistic") return TiePolicy::kRealistic;
  if (name == "optimistic") return TiePolicy::kOptimistic;
  if (name == "pessimistic") return TiePolicy::kPessimistic;
  throw ValidationError("unknown tie policy: " + std::string(name));
}

std::string_view to_string(GroupingKind kind) {
  return kind == GroupingKind::kFrequency ? "frequency" : "correlation";
}

double rank_of(std::span<const double> scores, EntityId target,
               std::span<const EntityId> filtered, TiePolicy policy) {
  const double s = scores[target];
  std::size_t greater = 0, equal = 0;
  for (std::size_t e = 0; e < scores.size(); ++e) {
    if (e == target) continue;
    if (scores[e] > s) {
      ++greater;
    } else if (scores[e] == s) {
      ++equal;
    }
  }
  // `filtered` is sorted; remove known-true competitors from the counts.
  for (EntityId e : filtered) {
    if (e == target) continue;
    if (scores[e] > s) {
      --greater;
    } else if (scores[e] == s) {
      --equal;
    }
  }
  const double optimistic = 1.0 + static_cast<double>(greater);
  const double pessimistic = optimistic + static_cast<double>(equal);
  switch (policy) {
    case TiePolicy::kOptimistic: return optimistic;
    case TiePolicy::kPessimistic: return pessimistic;
    case TiePolicy::kRealistic: break;
  }
  return 0.5 * (optimistic + pessimistic);
}

namespace {

RankRecord rank_with(const Model& model, const KnowledgeGraph& graph, const Triple& t,
                     std::span<const double> r_lit, const RankOptions& options,
                     std::vector<double>* scores) {
  const auto& tables = model.params().tables;
  scores->resize(model.num_entities());
  RankRecord rec{t, 0.0, 0.0};

  model.scorer().score_all_tails(model.entity(t.head), r_lit, tables.entity, tables.core,
                                 *scores);
  rec.tail_rank = rank_of(*scores, t.tail,
                          options.filtered ? graph.filter.tails(t.head, t.relation)
                                           : std::span<const EntityId>(),
                          options.tie_policy);

  model.scorer().score_all_heads(model.entity(t.tail), r_lit, tables.entity, tables.core,
                                 *scores);
  rec.head_rank = rank_of(*scores, t.head,
                          options.filtered ? graph.filter.heads(t.relation, t.tail)
                                           : std::span<const EntityId>(),
                          options.tie_policy);
  return rec;
}

}  // namespace

RankRecord rank_triple(const Model& model, const KnowledgeGraph& graph, const Triple& triple,
                       const RankOptions& options) {
  std::vector<double> scores;
  return rank_with(model, graph, triple, model.relation_embedding(triple.relation), options,
                   &scores);
}

std::vector<RankRecord> rank_triples(const Model& model, const KnowledgeGraph& graph,
                                     std::span<const Triple> triples,
                                     const RankOptions& options) {
  std::vector<std::vector<double>> r_lit(model.num_relations());
  for (const auto& t : triples) {
    if (r_lit[t.relation].empty()) r_lit[t.relation] = model.relation_embedding(t.relation);
  }
  std::vector<RankRecord> out(triples.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> scores;
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = rank_with(model, graph, triples[i], r_lit[triples[i].relation], options, &scores);
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, triples.size()));
  if (threads <= 1) {
    work(0, triples.size());
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (triples.size() + threads - 1) / threads;
  for (std::size_t w = 0; w < threads; ++w) {
    const std::size_t b = w * chunk, e = std::min(triples.size(), b + chunk);
    if (b < e) pool.emplace_back(work, b, e);
  }
  for (auto& th : pool) th.join();
  return out;
}

Metrics compute_metrics(std::span<const RankRecord> records) {
  if (records.empty()) throw ValidationError("compute_metrics: no rank records");
  Metrics m;
  double rr = 0.0;
  std::size_t h1 = 0, h10 = 0;
  for (const auto& r : records) {
    for (double rank : {r.head_rank, r.tail_rank}) {
      rr += 1.0 / rank;
      h1 += rank <= 1.0 ? 1 : 0;
      h10 += rank <= 10.0 ? 1 : 0;
    }
  }
  m.num_ranks = 2 * records.size();
  const double n = static_cast<double>(m.num_ranks);
  m.mrr = rr / n;
  m.hits_at_1 = static_cast<double>(h1) / n;
  m.hits_at_10 = static_cast<double>(h10) / n;
  return m;
}

FrequencyThreshold FrequencyThreshold::parse(std::string_view text) {
  FrequencyThreshold t;
  std::string_view num = text;
  if (!num.empty() && num.back() == '%') {
    t.is_fraction = true;
    num.remove_suffix(1);
  }
  bool ok = false;
  t.value = io::parse_double(num, &ok);
  if (!ok || !std::isfinite(t.value) || t.value < 0.0 ||
      (t.is_fraction && t.value > 100.0)) {
    throw ValidationError("invalid frequency threshold: " + std::string(text));
  }
  if (t.is_fraction) t.value /= 100.0;
  return t;
}

double FrequencyThreshold::resolve(std::size_t num_train_triples) const {
  return is_fraction ? value * static_cast<double>(num_train_triples) : value;
}

RelationGrouping group_by_frequency(const KnowledgeGraph& graph, double threshold_count) {
  if (!(threshold_count >= 0.0)) throw ValidationError("frequency threshold must be >= 0");
  std::vector<std::size_t> counts(graph.num_relations(), 0);
  for (const auto& t : graph.train) ++counts[t.relation];
  RelationGrouping g;
  g.kind = GroupingKind::kFrequency;
  g.threshold = threshold_count;
  g.labels = {"frequent", "long-tail"};
  g.group_of.resize(graph.num_relations());
  for (std::size_t r = 0; r < counts.size(); ++r) {
    g.group_of[r] = static_cast<double>(counts[r]) > threshold_count ? 0 : 1;
  }
  return g;
}

RelationGrouping group_by_frequency(const KnowledgeGraph& graph,
                                    const FrequencyThreshold& threshold) {
  const double count = threshold.resolve(graph.train.size());
  if (threshold.is_fraction) {
    spdlog::info("frequency threshold {}% of {} training triples = {} triples",
                 threshold.value * 100.0, graph.train.size(), count);
  }
  return group_by_frequency(graph, count);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw ValidationError("pearson: series lengths differ (" + std::to_string(xs.size()) +
                          " vs " + std::to_string(ys.size()) + ")");
  }
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

// Running co-moments for one (head attribute, tail attribute) pair.
struct CoMoments {
  std::size_t n = 0;
  double mean_x = 0.0, mean_y = 0.0;
  double cxx = 0.0, cyy = 0.0, cxy = 0.0;

  void add(double x, double y) {
    ++n;
    const double dx = x - mean_x;
    mean_x += dx / static_cast<double>(n);
    const double dy = y - mean_y;
    mean_y += dy / static_cast<double>(n);
    // Welford update with the post-update means.
    cxx += dx * (x - mean_x);
    cyy += dy * (y - mean_y);
    cxy += dx * (y - mean_y);
  }

  double correlation() const {
    if (n < 2 || cxx <= 0.0 || cyy <= 0.0) return 0.0;
    return std::clamp(cxy / std::sqrt(cxx * cyy), -1.0, 1.0);
  }
};

// Max |coef| per relation; empty where no pair has enough samples.
std::vector<std::optional<double>> relation_correlations(const KnowledgeGraph& graph,
                                                         std::size_t min_samples) {
  const LiteralMatrix& lit = graph.literals;
  const std::size_t A = lit.num_attributes;
  std::vector<std::vector<AttributeId>> attrs(lit.num_entities);
  for (std::size_t e = 0; e < lit.num_entities; ++e) {
    for (std::size_t a = 0; a < A; ++a) {
      if (lit.is_present(static_cast<EntityId>(e), static_cast<AttributeId>(a))) {
        attrs[e].push_back(static_cast<AttributeId>(a));
      }
    }
  }
  std::vector<std::vector<const Triple*>> by_relation(graph.num_relations());
  for (const auto& t : graph.train) by_relation[t.relation].push_back(&t);

  std::vector<std::optional<double>> out(graph.num_relations());
  std::map<std::uint64_t, CoMoments> acc;
  for (std::size_t r = 0; r < by_relation.size(); ++r) {
    acc.clear();
    for (const Triple* t : by_relation[r]) {
      for (AttributeId a : attrs[t->head]) {
        for (AttributeId b : attrs[t->tail]) {
          acc[(static_cast<std::uint64_t>(a) << 32) | b].add(lit.value(t->head, a),
                                                             lit.value(t->tail, b));
        }
      }
    }
    for (const auto& [key, m] : acc) {
      if (m.n < min_samples || m.n < 2) continue;
      out[r] = std::max(out[r].value_or(0.0), std::abs(m.correlation()));
    }
  }
  return out;
}

}  // namespace

std::optional<double> max_abs_attribute_correlation(const KnowledgeGraph& graph,
                                                    RelationId relation,
                                                    std::size_t min_samples) {
  if (relation >= graph.num_relations()) throw ValidationError("relation out of range");
  return relation_correlations(graph, min_samples)[relation];
}

RelationGrouping group_by_correlation(const KnowledgeGraph& graph, double threshold,
                                      std::size_t min_samples) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("correlation threshold must lie in [0, 1]");
  }
  RelationGrouping g;
  g.kind = GroupingKind::kCorrelation;
  g.threshold = threshold;
  g.labels = {"correlated", "less-correlated"};
  g.group_of.resize(graph.num_relations());
  const auto coef = relation_correlations(graph, min_samples);
  for (std::size_t r = 0; r < graph.num_relations(); ++r) {
    g.group_of[r] = coef[r] && *coef[r] >= threshold ? 0 : 1;
  }
  return g;
}

namespace {

nlohmann::json metrics_json(const std::optional<Metrics>& m) {
  if (!m) return nullptr;
  return {{"mrr", m->mrr},
          {"hits_at_1", m->hits_at_1},
          {"hits_at_10", m->hits_at_10},
          {"num_ranks", m->num_ranks}};
}

}  // namespace

nlohmann::json EvaluationReport::to_json() const {
  nlohmann::json j;
  j["split"] = split;
  j["num_triples"] = num_triples;
  j["overall"] = metrics_json(overall);
  if (grouping) {
    nlohmann::json g;
    g["kind"] = std::string(to_string(grouping->kind));
    g["threshold"] = grouping->threshold;
    g["labels"] = grouping->labels;
    g["group_of"] = grouping->group_of;
    j["grouping"] = g;
  } else {
    j["grouping"] = nullptr;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : groups) {
    rows.push_back({{"label", row.label},
                    {"num_relations", row.num_relations},
                    {"num_triples", row.num_triples},
                    {"metrics", metrics_json(row.metrics)}});
  }
  j["groups"] = rows;
  return j;
}

std::string EvaluationReport::to_table() const {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "split: %s  triples: %zu\n", split.c_str(), num_triples);
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-18s %8s %8s %8s %8s\n", "group", "triples", "MRR", "H@1",
                "H@10");
  out += buf;
  auto line = [&](const std::string& label, std::size_t n, const std::optional<Metrics>& m) {
    if (m) {
      std::snprintf(buf, sizeof(buf), "%-18s %8zu %8.4f %8.4f %8.4f\n", label.c_str(), n,
                    m->mrr, m->hits_at_1, m->hits_at_10);
    } else {
      std::snprintf(buf, sizeof(buf), "%-18s %8zu %8s %8s %8s\n", label.c_str(), n, "-", "-",
                    "-");
    }
    out += buf;
  };
  if (groups.empty()) {
    line("overall", num_triples, overall);
  } else {
    for (const auto& g : groups) line(g.label, g.num_triples, g.metrics);
  }
  return out;
}

EvaluationReport evaluate(const Model& model, const KnowledgeGraph& graph,
                          std::span<const Triple> triples, const RelationGrouping* grouping,
                          const RankOptions& options, std::string split) {
  EvaluationReport report;
  report.split = std::move(split);
  report.num_triples = triples.size();
  auto records = rank_triples(model, graph, triples, options);
  report.overall = compute_metrics(records);
  if (!grouping) return report;

  report.grouping = *grouping;
  const std::size_t num_groups = grouping->labels.size();
  std::vector<std::vector<RankRecord>> per_group(num_groups);
  for (const auto& r : records) per_group[grouping->group_of[r.triple.relation]].push_back(r);
  for (std::size_t g = 0; g < num_groups; ++g) {
    GroupReport row;
    row.label = grouping->labels[g];
    row.num_relations = static_cast<std::size_t>(
        std::count(grouping->group_of.begin(), grouping->group_of.end(), static_cast<int>(g)));
    row.num_triples = per_group[g].size();
    if (!per_group[g].empty()) row.metrics = compute_metrics(per_group[g]);
    report.groups.push_back(std::move(row));
  }
  GroupReport all;
  all.label = std::string(kAllTriplesLabel);
  all.num_relations = grouping->group_of.size();
  all.num_triples = records.size();
  all.metrics = report.overall;
  report.groups.push_back(std::move(all));
  return report;
}

}  // namespace realite
