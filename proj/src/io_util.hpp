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

// Small file helpers shared by the artifact readers and writers.

#ifndef REALITE_IO_UTIL_HPP_
#define REALITE_IO_UTIL_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace realite::io {

// Splits on '\t'. A trailing '\r' is dropped first.
std::vector<std::string_view> split_tabs(std::string_view line);

// Calls fn(line_number, line) for every line; throws IoError if unreadable.
template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// Shortest text that round-trips the double exactly.
std::string format_double(double v);
double parse_double(std::string_view token, bool* ok);
unsigned long parse_index(std::string_view token, bool* ok);

}  // namespace realite::io

#include "io_util_inl.hpp"

#endif  // REALITE_IO_UTIL_HPP_
