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
#include <string_view>

#include "tth/core/types.hpp"

namespace tth {

/// Extracts the chosen option letter. A JSON object carrying an "answer"
/// field wins; otherwise the last "answer ... X" phrase; otherwise the last
/// standalone capital letter followed by '.', ')', ':' or end of line.
TrialResponse parse_mcq(std::string_view raw, std::size_t n_options);

}  // namespace tth
