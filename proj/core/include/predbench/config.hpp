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

#ifndef PREDBENCH_CONFIG_HPP_
#define PREDBENCH_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace predbench {

// Minimal INI: "[section]" headers, "key = value" lines, '#' or ';'
// comments on their own line. Keys before the first header belong to the
// unnamed section "". Duplicate keys within a section are an error.
class IniDocument {
 public:
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
  };

  struct Section {
    std::string name;
    std::size_t line = 0;
    std::vector<Entry> entries;

    const Entry* find(std::string_view key) const;
    void set(std::string key, std::string value);

    // Typed getters; a present but malformed value throws ConfigError
    // naming the key and its line.
    std::optional<std::string> text(std::string_view key) const;
    double number(std::string_view key, double fallback) const;
    std::size_t count(std::string_view key, std::size_t fallback) const;
    std::uint64_t u64(std::string_view key, std::uint64_t fallback) const;
    bool flag(std::string_view key, bool fallback) const;
    // Throws ConfigError for any key outside `allowed`.
    void check_keys(const std::vector<std::string_view>& allowed) const;
  };

  static IniDocument parse(std::string_view text);
  static IniDocument load(const std::filesystem::path& path);

  const std::vector<Section>& sections() const { return sections_; }
  const Section* section(std::string_view name) const;
  Section& add_section(std::string name);

  std::string serialize() const;

 private:
  std::vector<Section> sections_;
};

}  // namespace predbench

#endif  // PREDBENCH_CONFIG_HPP_
