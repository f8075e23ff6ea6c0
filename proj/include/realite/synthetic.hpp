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

#ifndef REALITE_SYNTHETIC_HPP_
#define REALITE_SYNTHETIC_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "realite/kg_data.hpp"

namespace realite {

// Raw inputs of a knowledge graph, as they would be read from disk.
struct RawKg {
  std::vector<LabeledTriple> train;
  std::vector<LabeledTriple> valid;
  std::vector<LabeledTriple> test;
  std::vector<LabeledLiteral> literals;
};

// People with a monthly income and houses with a monthly rent. A person
// rents a house iff |income - 3 * rent| <= band * income, so head income
// and tail rent are linearly related along the `rents` edges.
struct RentIncomeOptions {
  std::size_t people = 200;
  std::size_t houses = 200;
  double band = 0.05;
  double valid_fraction = 0.1;
  double test_fraction = 0.2;
  std::uint64_t seed = 1;
};

RawKg rent_income_kg(const RentIncomeOptions& options);

// Writes train.tsv, valid.tsv, test.tsv and literals.tsv into `dir`.
void write_raw_kg(const RawKg& kg, const std::filesystem::path& dir);

}  // namespace realite

#endif  // REALITE_SYNTHETIC_HPP_
