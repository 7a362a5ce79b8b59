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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tth/agentic/agentic.hpp"
#include "tth/core/json.hpp"
#include "tth/reward/grpo.hpp"
#include "tth/sampler/sampler.hpp"

namespace tth {

/// One Stage-1 training tuple; the image and question are referenced by id.
struct SftExample {
  std::string question_id;
  ModelId model;
  Hint hint;
  std::string source_id;  // OptimizationResult::id()
};

/// Middle element of the sorted sizes; the floor of the mean of the two
/// middle elements for an even count.
std::size_t median_count(std::vector<std::size_t> sizes);

/// Keeps leak-free successes, groups by model and resamples every group to
/// the median group size. Output is ordered by model, then draw order.
std::vector<SftExample> build_sft_pool(std::span<const OptimizationResult> results,
                                       std::uint64_t seed);

struct RlQuestion {
  std::string question_id;
  bool all_base_correct = false;
};

struct RlPool {
  std::vector<RlQuestion> questions;
  std::vector<PromptKey> keys(std::span<const ModelId> targets) const;
};

/// Stratified pool in which the share of all-base-correct questions equals
/// `base_correct_share` within one item. Questions with a Mixed target, or
/// without a profile for every target, are left out.
RlPool build_rl_pool(std::span<const BaseProfile> profiles, std::span<const ModelId> targets,
                     double base_correct_share, std::uint64_t seed);

Json to_json(const SftExample& e);
Json to_json(const RlQuestion& q);
RlQuestion rl_question_from_json(const Json& j);

}  // namespace tth
