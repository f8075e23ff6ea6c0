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

#ifndef REALITE_KG_DATA_HPP_
#define REALITE_KG_DATA_HPP_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "realite/common.hpp"

namespace realite {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;
using AttributeId = std::uint32_t;

struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  auto operator<=>(const Triple&) const = default;
};

// A triple as read from disk, before vocabulary assignment.
struct LabeledTriple {
  std::string head;
  std::string relation;
  std::string tail;
  std::size_t line = 0;
};

struct LabeledLiteral {
  std::string entity;
  std::string attribute;
  double value = 0.0;
  std::size_t line = 0;
};

// Bidirectional label <-> dense index map. Indices are contiguous from 0.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> labels);

  // Returns the index of `label`, inserting it if absent.
  std::uint32_t add(const std::string& label);
  // Throws ValidationError when absent.
  std::uint32_t index(const std::string& label) const;
  bool contains(const std::string& label) const;
  const std::string& label(std::uint32_t index) const { return labels_.at(index); }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Entity x attribute matrix of min-max normalized literal values.
struct LiteralMatrix {
  std::size_t num_entities = 0;
  std::size_t num_attributes = 0;
  std::vector<double> values;         // normalized, 0 where absent
  std::vector<std::uint8_t> present;  // 1 where some literal asserted the cell
  std::vector<double> raw;            // pre-normalization value, 0 where absent
  std::vector<double> raw_min;
  std::vector<double> raw_max;

  LiteralMatrix() = default;
  LiteralMatrix(std::size_t entities, std::size_t attributes);

  double value(EntityId e, AttributeId a) const { return values[e * num_attributes + a]; }
  bool is_present(EntityId e, AttributeId a) const {
    return present[e * num_attributes + a] != 0;
  }
  std::span<const double> row(EntityId e) const {
    return {values.data() + e * num_attributes, num_attributes};
  }
  std::size_t num_present() const;
};

// Min-max normalizes the present cells of one column into [0, 1]. Absent
// cells come back as 0. A constant column normalizes to all zeros.
std::vector<double> min_max_normalize(std::span<const double> column,
                                      std::span<const std::uint8_t> present);

// Known-true triples over train, valid and test, for filtered ranking.
class FilterIndex {
 public:
  void add(const Triple& t);
  // Sorts and dedups the adjacency lists; call once after the last add().
  void finalize();

  bool contains(const Triple& t) const;
  std::span<const EntityId> tails(EntityId head, RelationId relation) const;
  std::span<const EntityId> heads(RelationId relation, EntityId tail) const;

 private:
  static std::uint64_t key(std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }
  std::unordered_map<std::uint64_t, std::vector<EntityId>> tails_;
  std::unordered_map<std::uint64_t, std::vector<EntityId>> heads_;
};

struct KnowledgeGraph {
  Vocabulary entities;
  Vocabulary relations;
  Vocabulary attributes;
  std::vector<Triple> train;
  std::vector<Triple> valid;
  std::vector<Triple> test;
  LiteralMatrix literals;
  FilterIndex filter;

  std::size_t num_entities() const { return entities.size(); }
  std::size_t num_relations() const { return relations.size(); }
  std::size_t num_attributes() const { return attributes.size(); }
};

// Reads `head<TAB>relation<TAB>tail` lines. Blank lines are skipped.
std::vector<LabeledTriple> load_triples(const std::filesystem::path& path);
// Reads `entity<TAB>attribute<TAB>value` lines; value must be a finite real.
std::vector<LabeledLiteral> load_literals(const std::filesystem::path& path);

// YYYY.MMDD encoding of a calendar date.
double date_to_decimal(int year, int month, int day);

// Builds sorted vocabularies over every label in every input, maps the
// splits, normalizes the literals and indexes all known triples.
KnowledgeGraph build_graph(const std::vector<LabeledTriple>& train,
                           const std::vector<LabeledTriple>& valid,
                           const std::vector<LabeledTriple>& test,
                           const std::vector<LabeledLiteral>& literals);

// Graph artifact directory: entities.txt / relations.txt / attributes.txt
// (one label per line, line number = index), train.tsv / valid.tsv /
// test.tsv (index triples), literals.tsv and attribute_stats.tsv.
void save_graph(const KnowledgeGraph& graph, const std::filesystem::path& dir);
KnowledgeGraph load_graph(const std::filesystem::path& dir);

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& file);
Vocabulary load_vocabulary(const std::filesystem::path& file);

}  // namespace realite

#endif  // REALITE_KG_DATA_HPP_
