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

#include "tth/client/mcq.hpp"

#include <cctype>
#include <optional>
#include <string>

#include "tth/core/json.hpp"

namespace tth {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

// "A", "A.", "(B)", "C. firefighters" -> letter index.
std::optional<std::size_t> letter_of(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  if (!s.empty() && s.front() == '(') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s.front())));
  if (!is_upper(c)) return std::nullopt;
  if (s.size() > 1 && is_alnum(s[1])) return std::nullopt;
  return static_cast<std::size_t>(c - 'A');
}

// End of the balanced {...} starting at `open`, honoring JSON strings.
std::optional<std::size_t> match_brace(std::string_view raw, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < raw.size(); ++i) {
    char c = raw[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i;
  }
  return std::nullopt;
}

struct Structured {
  std::optional<std::size_t> letter;
  std::optional<std::string> reasoning;
};

std::optional<Structured> last_answer_object(std::string_view raw) {
  std::optional<Structured> found;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '{') continue;
    auto close = match_brace(raw, i);
    if (!close) continue;
    Json obj = Json::parse(raw.substr(i, *close - i + 1), nullptr, false);
    if (obj.is_object() && obj.contains("answer")) {
      Structured s;
      if (obj["answer"].is_string()) s.letter = letter_of(obj["answer"].get<std::string>());
      if (obj.contains("reasoning") && obj["reasoning"].is_string()) {
        s.reasoning = obj["reasoning"].get<std::string>();
      }
      found = s;
      i = *close;
    }
  }
  return found;
}

std::optional<std::size_t> last_answer_phrase(std::string_view raw) {
  std::string lower(raw);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::optional<std::size_t> found;
  for (std::size_t pos = lower.find("answer"); pos != std::string::npos;
       pos = lower.find("answer", pos + 1)) {
    std::size_t i = pos + 6;
    auto skip = [&] {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == ':' || raw[i] == '-' ||
                                raw[i] == '*' || raw[i] == '\t')) {
        ++i;
      }
    };
    skip();
    if (lower.compare(i, 3, "is ") == 0) {
      i += 3;
      skip();
    }
    if (i < raw.size() && raw[i] == '(') ++i;
    if (i < raw.size() && is_upper(raw[i]) && (i + 1 == raw.size() || !is_alnum(raw[i + 1]))) {
      found = static_cast<std::size_t>(raw[i] - 'A');
    }
  }
  return found;
}

std::optional<std::size_t> last_delimited_letter(std::string_view raw) {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!is_upper(raw[i])) continue;
    if (i > 0 && (is_alnum(raw[i - 1]) || raw[i - 1] == '\'')) continue;
    std::size_t j = i + 1;
    bool delimited = j == raw.size() || raw[j] == '.' || raw[j] == ')' || raw[j] == ':';
    if (!delimited) {
      while (j < raw.size() && (raw[j] == ' ' || raw[j] == '\t' || raw[j] == '\r')) ++j;
      delimited = j == raw.size() || raw[j] == '\n';
    }
    if (delimited) found = static_cast<std::size_t>(raw[i] - 'A');
  }
  return found;
}

}  // namespace

TrialResponse parse_mcq(std::string_view raw, std::size_t n_options) {
  TrialResponse out;
  out.raw = std::string(raw);
  std::optional<std::size_t> letter;
  if (auto structured = last_answer_object(raw)) {
    letter = structured->letter;
    out.reasoning = structured->reasoning;
  } else {
    letter = last_answer_phrase(raw);
    if (!letter) letter = last_delimited_letter(raw);
    if (letter) out.reasoning = std::string(raw);
  }
  if (letter && *letter < n_options) {
    out.answer_index = letter;
    out.parse_valid = true;
  }
  return out;
}

}  // namespace tth
