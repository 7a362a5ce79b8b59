// Copyright 2026 The TTH Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tth/core/hint.hpp"

#include <algorithm>
#include <cctype>

#include "tth/core/json.hpp"
#include "tth/error.hpp"

namespace tth {

namespace {

std::string_view trim_view(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Accepts a bare object or one wrapped in a ``` / ```json fence.
std::string_view strip_fence(std::string_view s) {
  s = trim_view(s);
  if (s.starts_with("```") && s.ends_with("```") && s.size() >= 6) {
    s.remove_prefix(3);
    s.remove_suffix(3);
    if (s.starts_with("json")) s.remove_prefix(4);
    s = trim_view(s);
  }
  return s;
}

bool contains_sequence(const std::vector<std::string>& haystack,
                       const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

}  // namespace

Hint parse_hint(std::string_view wire_text) {
  Json doc;
  try {
    doc = Json::parse(strip_fence(wire_text));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::MalformedWire, e.what());
  }
  if (!doc.is_object() || !doc.contains("hint")) {
    throw Error(ErrorCode::WrongShape, "expected an object with key \"hint\"");
  }
  if (doc.size() != 1) throw Error(ErrorCode::WrongShape, "unexpected keys besides \"hint\"");
  const Json& list = doc.at("hint");
  if (!list.is_array()) throw Error(ErrorCode::WrongShape, "\"hint\" is not a list");
  std::vector<std::string> items;
  items.reserve(list.size());
  for (const auto& item : list) {
    if (!item.is_string()) throw Error(ErrorCode::WrongShape, "hint item is not a string");
    items.push_back(item.get<std::string>());
  }
  return make_hint(std::move(items));
}

std::string serialize(const Hint& hint) {
  Json doc = Json::object();
  doc["hint"] = hint.items();
  return doc.dump();
}

std::vector<std::string> normalized_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isspace(c) || (c < 0x80 && std::ispunct(c))) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

LeakReport check_leakage(const Hint& hint, const QuestionRecord& record) {
  const auto gold = normalized_tokens(record.gold_text());
  if (gold.empty()) return {};
  for (std::size_t i = 0; i < record.options.size(); ++i) {
    if (i == record.gold_index) continue;
    if (contains_sequence(normalized_tokens(record.options[i]), gold)) return {};
  }
  for (std::size_t i = 0; i < hint.items().size(); ++i) {
    if (contains_sequence(normalized_tokens(hint.items()[i]), gold)) {
      return LeakReport{true, i};
    }
  }
  return {};
}

bool is_contrastive_item(std::string_view item) {
  for (const auto& token : normalized_tokens(item)) {
    if (token == "vs" || token == "versus" || token == "or") return true;
  }
  return false;
}

bool check_contrastive(const Hint& hint) {
  return std::any_of(hint.items().begin(), hint.items().end(),
                     [](const std::string& item) { return is_contrastive_item(item); });
}

}  // namespace tth
