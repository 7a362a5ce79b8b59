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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tth/core/types.hpp"

namespace tth {

/// Parses a proposer/generator output of the form {"hint": [...]}.
/// Throws MalformedWire, WrongShape or TooManyItems.
Hint parse_hint(std::string_view wire_text);

/// Compact wire form, e.g. {"hint":["a","b"]}.
std::string serialize(const Hint& hint);

/// Lower-cased tokens with ASCII punctuation treated as separators.
std::vector<std::string> normalized_tokens(std::string_view text);

struct LeakReport {
  bool leak = false;
  std::optional<std::size_t> item_index;
};

/// Flags a hint item that spells out the gold option as a whole-token
/// sequence, unless that sequence also occurs inside a non-gold option.
LeakReport check_leakage(const Hint& hint, const QuestionRecord& record);

/// Syntactic contrastive heuristic: "vs", "versus" or "or" as a token.
bool is_contrastive_item(std::string_view item);
bool check_contrastive(const Hint& hint);

}  // namespace tth
