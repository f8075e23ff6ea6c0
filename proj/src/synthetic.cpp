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

#include "realite/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "io_util.hpp"

namespace realite {

RawKg rent_income_kg(const RentIncomeOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> income_dist(1500.0, 9000.0);
  std::uniform_real_distribution<double> rent_dist(500.0, 3000.0);

  RawKg kg;
  std::vector<double> income(o.people), rent(o.houses);
  for (std::size_t i = 0; i < o.people; ++i) {
    income[i] = std::round(income_dist(rng));
    kg.literals.push_back({"person" + std::to_string(i), "monthlyIncome", income[i], 0});
  }
  for (std::size_t j = 0; j < o.houses; ++j) {
    rent[j] = std::round(rent_dist(rng));
    kg.literals.push_back({"house" + std::to_string(j), "monthlyRent", rent[j], 0});
  }

  std::vector<LabeledTriple> edges;
  for (std::size_t i = 0; i < o.people; ++i) {
    for (std::size_t j = 0; j < o.houses; ++j) {
      if (std::abs(income[i] - 3.0 * rent[j]) <= o.band * income[i]) {
        edges.push_back({"person" + std::to_string(i), "rents", "house" + std::to_string(j), 0});
      }
    }
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  const auto n_test = static_cast<std::size_t>(std::llround(o.test_fraction * edges.size()));
  const auto n_valid = static_cast<std::size_t>(std::llround(o.valid_fraction * edges.size()));
  kg.test.assign(edges.begin(), edges.begin() + n_test);
  kg.valid.assign(edges.begin() + n_test, edges.begin() + n_test + n_valid);
  kg.train.assign(edges.begin() + n_test + n_valid, edges.end());
  return kg;
}

void write_raw_kg(const RawKg& kg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto triples = [](const std::vector<LabeledTriple>& v) {
    std::string out;
    for (const auto& t : v) out += t.head + '\t' + t.relation + '\t' + t.tail + '\n';
    return out;
  };
  io::write_file(dir / "train.tsv", triples(kg.train));
  io::write_file(dir / "valid.tsv", triples(kg.valid));
  io::write_file(dir / "test.tsv", triples(kg.test));
  std::string lit;
  for (const auto& l : kg.literals) {
    lit += l.entity + '\t' + l.attribute + '\t' + io::format_double(l.value) + '\n';
  }
  io::write_file(dir / "literals.tsv", lit);
}

}  // namespace realite
