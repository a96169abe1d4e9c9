// Copyright 2026 The predbench Authors.
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

#ifndef PREDBENCH_TEXT_HPP_
#define PREDBENCH_TEXT_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace predbench {

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

// "a=1;b=2" -> {{"a","1"},{"b","2"}}, order preserved.
std::vector<std::pair<std::string, std::string>> parse_fields(std::string_view s);

// Strict parsers; throw FormatError naming the offending text.
double parse_double(std::string_view s);
std::size_t parse_size(std::string_view s);
std::uint64_t parse_u64(std::string_view s);
bool parse_bool(std::string_view s);

std::string hex64(std::uint64_t v);

}  // namespace predbench

#endif  // PREDBENCH_TEXT_HPP_
