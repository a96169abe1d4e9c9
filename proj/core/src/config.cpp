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

#include "predbench/config.hpp"

#include <fstream>
#include <sstream>

#include "predbench/error.hpp"
#include "predbench/text.hpp"

namespace predbench {

namespace {

template <class Fn>
auto typed(const IniDocument::Entry& e, Fn&& fn) {
  try {
    return fn(e.value);
  } catch (const Error& err) {
    throw ConfigError(e.line, e.key, err.what());
  }
}

}  // namespace

const IniDocument::Entry* IniDocument::Section::find(std::string_view key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

void IniDocument::Section::set(std::string key, std::string value) {
  for (auto& e : entries) {
    if (e.key == key) {
      e.value = std::move(value);
      return;
    }
  }
  entries.push_back({std::move(key), std::move(value), 0});
}

std::optional<std::string> IniDocument::Section::text(std::string_view key) const {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  return e->value;
}

double IniDocument::Section::number(std::string_view key, double fallback) const {
  const Entry* e = find(key);
  return e ? typed(*e, [](const std::string& v) { return parse_double(v); }) : fallback;
}

std::size_t IniDocument::Section::count(std::string_view key, std::size_t fallback) const {
  const Entry* e = find(key);
  return e ? typed(*e, [](const std::string& v) { return parse_size(v); }) : fallback;
}

std::uint64_t IniDocument::Section::u64(std::string_view key, std::uint64_t fallback) const {
  const Entry* e = find(key);
  return e ? typed(*e, [](const std::string& v) { return parse_u64(v); }) : fallback;
}

bool IniDocument::Section::flag(std::string_view key, bool fallback) const {
  const Entry* e = find(key);
  return e ? typed(*e, [](const std::string& v) { return parse_bool(v); }) : fallback;
}

void IniDocument::Section::check_keys(const std::vector<std::string_view>& allowed) const {
  for (const auto& e : entries) {
    bool ok = false;
    for (auto a : allowed) ok = ok || e.key == a;
    if (!ok) {
      throw ConfigError(e.line, e.key,
                        "unknown key in section [" + name + "]");
    }
  }
}

IniDocument IniDocument::parse(std::string_view text) {
  IniDocument doc;
  doc.sections_.push_back({"", 0, {}});
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "", "unterminated section header");
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (name.empty()) throw ConfigError(line_no, "", "empty section name");
      for (const auto& s : doc.sections_) {
        if (s.name == name) throw ConfigError(line_no, "", "duplicate section [" + name + "]");
      }
      doc.sections_.push_back({name, line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, "", "expected 'key = value', got '" + std::string(line) + "'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(line_no, "", "empty key");
    auto& sec = doc.sections_.back();
    if (sec.find(key)) throw ConfigError(line_no, key, "duplicate key");
    sec.entries.push_back({std::move(key), std::move(value), line_no});
  }
  return doc;
}

IniDocument IniDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "", "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const IniDocument::Section* IniDocument::section(std::string_view name) const {
  for (const auto& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

IniDocument::Section& IniDocument::add_section(std::string name) {
  for (auto& s : sections_) {
    if (s.name == name) return s;
  }
  sections_.push_back({std::move(name), 0, {}});
  return sections_.back();
}

std::string IniDocument::serialize() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& s : sections_) {
    if (s.name.empty() && s.entries.empty()) continue;
    if (!first) os << '\n';
    first = false;
    if (!s.name.empty()) os << '[' << s.name << "]\n";
    for (const auto& e : s.entries) os << e.key << " = " << e.value << '\n';
  }
  return os.str();
}

}  // namespace predbench
