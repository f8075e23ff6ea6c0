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

#include "realite/kg_data.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "io_util.hpp"

namespace realite {

Vocabulary::Vocabulary(std::vector<std::string> labels) {
  for (auto& l : labels) {
    if (contains(l)) throw ValidationError("duplicate vocabulary label: " + l);
    add(l);
  }
}

std::uint32_t Vocabulary::add(const std::string& label) {
  auto [it, inserted] =
      index_.try_emplace(label, static_cast<std::uint32_t>(labels_.size()));
  if (inserted) labels_.push_back(label);
  return it->second;
}

std::uint32_t Vocabulary::index(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw ValidationError("unknown label: " + label);
  return it->second;
}

bool Vocabulary::contains(const std::string& label) const {
  return index_.count(label) != 0;
}

LiteralMatrix::LiteralMatrix(std::size_t entities, std::size_t attributes)
    : num_entities(entities),
      num_attributes(attributes),
      values(entities * attributes, 0.0),
      present(entities * attributes, 0),
      raw(entities * attributes, 0.0),
      raw_min(attributes, 0.0),
      raw_max(attributes, 0.0) {}

std::size_t LiteralMatrix::num_present() const {
  return static_cast<std::size_t>(std::count(present.begin(), present.end(), 1));
}

std::vector<double> min_max_normalize(std::span<const double> column,
                                      std::span<const std::uint8_t> present) {
  std::vector<double> out(column.size(), 0.0);
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (!present[i]) continue;
    if (!any) {
      lo = hi = column[i];
      any = true;
    } else {
      lo = std::min(lo, column[i]);
      hi = std::max(hi, column[i]);
    }
  }
  if (!any || hi == lo) return out;
  const double span = hi - lo;
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (present[i]) out[i] = std::clamp((column[i] - lo) / span, 0.0, 1.0);
  }
  return out;
}

void FilterIndex::add(const Triple& t) {
  tails_[key(t.head, t.relation)].push_back(t.tail);
  heads_[key(t.relation, t.tail)].push_back(t.head);
}

void FilterIndex::finalize() {
  auto tidy = [](auto& map) {
    for (auto& [k, v] : map) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  };
  tidy(tails_);
  tidy(heads_);
}

bool FilterIndex::contains(const Triple& t) const {
  auto ts = tails(t.head, t.relation);
  return std::binary_search(ts.begin(), ts.end(), t.tail);
}

std::span<const EntityId> FilterIndex::tails(EntityId head, RelationId relation) const {
  auto it = tails_.find(key(head, relation));
  if (it == tails_.end()) return {};
  return it->second;
}

std::span<const EntityId> FilterIndex::heads(RelationId relation, EntityId tail) const {
  auto it = heads_.find(key(relation, tail));
  if (it == heads_.end()) return {};
  return it->second;
}

std::vector<LabeledTriple> load_triples(const std::filesystem::path& path) {
  std::vector<LabeledTriple> out;
  io::for_each_line(path, [&](std::size_t n, std::string_view line) {
    if (line.find_first_not_of(" \t") == std::string_view::npos) return;
    auto f = io::split_tabs(line);
    if (f.size() != 3) {
      throw ParseError(path.string(), n,
                       "expected 3 tab-separated fields, got " + std::to_string(f.size()));
    }
    out.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]), n});
  });
  return out;
}

std::vector<LabeledLiteral> load_literals(const std::filesystem::path& path) {
  std::vector<LabeledLiteral> out;
  io::for_each_line(path, [&](std::size_t n, std::string_view line) {
    if (line.find_first_not_of(" \t") == std::string_view::npos) return;
    auto f = io::split_tabs(line);
    if (f.size() != 3) {
      throw ParseError(path.string(), n,
                       "expected 3 tab-separated fields, got " + std::to_string(f.size()));
    }
    bool ok = false;
    double v = io::parse_double(f[2], &ok);
    if (!ok || !std::isfinite(v)) {
      throw ParseError(path.string(), n,
                       "invalid numeric value '" + std::string(f[2]) + "'");
    }
    out.push_back({std::string(f[0]), std::string(f[1]), v, n});
  });
  return out;
}

double date_to_decimal(int year, int month, int day) {
  if (month < 1 || month > 12) {
    throw ValidationError("month out of range: " + std::to_string(month));
  }
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  const int max_day = kDays[month - 1] + (month == 2 && leap ? 1 : 0);
  if (day < 1 || day > max_day) {
    throw ValidationError("day out of range: " + std::to_string(day));
  }
  return year + (month * 100 + day) / 10000.0;
}

namespace {

std::vector<Triple> map_split(const std::vector<LabeledTriple>& split,
                              const KnowledgeGraph& g, std::set<Triple>* seen,
                              const char* name) {
  std::vector<Triple> out;
  out.reserve(split.size());
  std::set<Triple> local;
  std::size_t dups = 0, overlaps = 0;
  for (const auto& lt : split) {
    Triple t{g.entities.index(lt.head), g.relations.index(lt.relation),
             g.entities.index(lt.tail)};
    if (!local.insert(t).second) {
      ++dups;
      continue;
    }
    if (seen->count(t)) {
      ++overlaps;
      continue;
    }
    out.push_back(t);
  }
  if (dups) spdlog::warn("{}: dropped {} duplicate triples", name, dups);
  if (overlaps) {
    spdlog::warn("{}: dropped {} triples already present in an earlier split", name,
                 overlaps);
  }
  seen->insert(out.begin(), out.end());
  return out;
}

}  // namespace

KnowledgeGraph build_graph(const std::vector<LabeledTriple>& train,
                           const std::vector<LabeledTriple>& valid,
                           const std::vector<LabeledTriple>& test,
                           const std::vector<LabeledLiteral>& literals) {
  std::set<std::string> ent, rel, attr;
  for (const auto* split : {&train, &valid, &test}) {
    for (const auto& t : *split) {
      ent.insert(t.head);
      ent.insert(t.tail);
      rel.insert(t.relation);
    }
  }
  for (const auto& l : literals) {
    ent.insert(l.entity);
    attr.insert(l.attribute);
  }

  KnowledgeGraph g;
  g.entities = Vocabulary({ent.begin(), ent.end()});
  g.relations = Vocabulary({rel.begin(), rel.end()});
  g.attributes = Vocabulary({attr.begin(), attr.end()});

  std::set<Triple> seen;
  g.train = map_split(train, g, &seen, "train");
  g.valid = map_split(valid, g, &seen, "valid");
  g.test = map_split(test, g, &seen, "test");

  LiteralMatrix& m = g.literals;
  m = LiteralMatrix(g.num_entities(), g.num_attributes());
  std::size_t overwritten = 0;
  for (const auto& l : literals) {
    const std::size_t cell =
        g.entities.index(l.entity) * m.num_attributes + g.attributes.index(l.attribute);
    if (m.present[cell]) ++overwritten;
    m.raw[cell] = l.value;
    m.present[cell] = 1;
  }
  if (overwritten) {
    spdlog::warn("literals: {} repeated (entity, attribute) assertions, last value kept",
                 overwritten);
  }

  std::vector<double> column(m.num_entities);
  std::vector<std::uint8_t> mask(m.num_entities);
  for (std::size_t a = 0; a < m.num_attributes; ++a) {
    bool any = false;
    for (std::size_t e = 0; e < m.num_entities; ++e) {
      column[e] = m.raw[e * m.num_attributes + a];
      mask[e] = m.present[e * m.num_attributes + a];
      if (mask[e]) {
        m.raw_min[a] = any ? std::min(m.raw_min[a], column[e]) : column[e];
        m.raw_max[a] = any ? std::max(m.raw_max[a], column[e]) : column[e];
        any = true;
      }
    }
    auto norm = min_max_normalize(column, mask);
    for (std::size_t e = 0; e < m.num_entities; ++e) {
      m.values[e * m.num_attributes + a] = norm[e];
    }
  }

  for (const auto* split : {&g.train, &g.valid, &g.test}) {
    for (const auto& t : *split) g.filter.add(t);
  }
  g.filter.finalize();
  return g;
}

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& file) {
  std::string out;
  for (const auto& l : vocab.labels()) {
    out += l;
    out += '\n';
  }
  io::write_file(file, out);
}

Vocabulary load_vocabulary(const std::filesystem::path& file) {
  std::vector<std::string> labels;
  io::for_each_line(file, [&](std::size_t, std::string_view line) {
    labels.emplace_back(line);
  });
  return Vocabulary(std::move(labels));
}

namespace {

void save_split(const std::vector<Triple>& split, const std::filesystem::path& file) {
  std::string out;
  for (const auto& t : split) {
    out += std::to_string(t.head) + '\t' + std::to_string(t.relation) + '\t' +
           std::to_string(t.tail) + '\n';
  }
  io::write_file(file, out);
}

std::vector<Triple> load_split(const std::filesystem::path& file, const KnowledgeGraph& g) {
  std::vector<Triple> out;
  io::for_each_line(file, [&](std::size_t n, std::string_view line) {
    if (line.empty()) return;
    auto f = io::split_tabs(line);
    bool ok1 = false, ok2 = false, ok3 = false;
    if (f.size() == 3) {
      Triple t{static_cast<EntityId>(io::parse_index(f[0], &ok1)),
               static_cast<RelationId>(io::parse_index(f[1], &ok2)),
               static_cast<EntityId>(io::parse_index(f[2], &ok3))};
      if (ok1 && ok2 && ok3 && t.head < g.num_entities() && t.tail < g.num_entities() &&
          t.relation < g.num_relations()) {
        out.push_back(t);
        return;
      }
    }
    throw ParseError(file.string(), n, "invalid index triple");
  });
  return out;
}

}  // namespace

void save_graph(const KnowledgeGraph& g, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_vocabulary(g.entities, dir / "entities.txt");
  save_vocabulary(g.relations, dir / "relations.txt");
  save_vocabulary(g.attributes, dir / "attributes.txt");
  save_split(g.train, dir / "train.tsv");
  save_split(g.valid, dir / "valid.tsv");
  save_split(g.test, dir / "test.tsv");

  const LiteralMatrix& m = g.literals;
  std::string lit;
  for (std::size_t e = 0; e < m.num_entities; ++e) {
    for (std::size_t a = 0; a < m.num_attributes; ++a) {
      const std::size_t c = e * m.num_attributes + a;
      if (!m.present[c]) continue;
      lit += std::to_string(e) + '\t' + std::to_string(a) + '\t' +
             io::format_double(m.raw[c]) + '\t' + io::format_double(m.values[c]) + '\n';
    }
  }
  io::write_file(dir / "literals.tsv", lit);

  std::string stats;
  for (std::size_t a = 0; a < m.num_attributes; ++a) {
    stats += std::to_string(a) + '\t' + io::format_double(m.raw_min[a]) + '\t' +
             io::format_double(m.raw_max[a]) + '\n';
  }
  io::write_file(dir / "attribute_stats.tsv", stats);
}

KnowledgeGraph load_graph(const std::filesystem::path& dir) {
  KnowledgeGraph g;
  g.entities = load_vocabulary(dir / "entities.txt");
  g.relations = load_vocabulary(dir / "relations.txt");
  g.attributes = load_vocabulary(dir / "attributes.txt");
  g.train = load_split(dir / "train.tsv", g);
  g.valid = load_split(dir / "valid.tsv", g);
  g.test = load_split(dir / "test.tsv", g);

  LiteralMatrix& m = g.literals;
  m = LiteralMatrix(g.num_entities(), g.num_attributes());
  const auto lit_file = dir / "literals.tsv";
  io::for_each_line(lit_file, [&](std::size_t n, std::string_view line) {
    if (line.empty()) return;
    auto f = io::split_tabs(line);
    bool ok[4] = {false, false, false, false};
    if (f.size() == 4) {
      auto e = io::parse_index(f[0], &ok[0]);
      auto a = io::parse_index(f[1], &ok[1]);
      double raw = io::parse_double(f[2], &ok[2]);
      double norm = io::parse_double(f[3], &ok[3]);
      if (ok[0] && ok[1] && ok[2] && ok[3] && e < m.num_entities && a < m.num_attributes) {
        const std::size_t c = e * m.num_attributes + a;
        m.raw[c] = raw;
        m.values[c] = norm;
        m.present[c] = 1;
        return;
      }
    }
    throw ParseError(lit_file.string(), n, "invalid literal cell");
  });
  const auto stats_file = dir / "attribute_stats.tsv";
  io::for_each_line(stats_file, [&](std::size_t n, std::string_view line) {
    if (line.empty()) return;
    auto f = io::split_tabs(line);
    bool ok[3] = {false, false, false};
    if (f.size() == 3) {
      auto a = io::parse_index(f[0], &ok[0]);
      double lo = io::parse_double(f[1], &ok[1]);
      double hi = io::parse_double(f[2], &ok[2]);
      if (ok[0] && ok[1] && ok[2] && a < m.num_attributes) {
        m.raw_min[a] = lo;
        m.raw_max[a] = hi;
        return;
      }
    }
    throw ParseError(stats_file.string(), n, "invalid attribute statistics row");
  });

  for (const auto* split : {&g.train, &g.valid, &g.test}) {
    for (const auto& t : *split) g.filter.add(t);
  }
  g.filter.finalize();
  return g;
}

}  // namespace realite
