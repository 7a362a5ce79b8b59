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

#include "tth/reward/pools.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tth/core/dataset.hpp"
#include "tth/core/random.hpp"
#include "tth/error.hpp"

namespace tth {

std::size_t median_count(std::vector<std::size_t> sizes) {
  if (sizes.empty()) throw Error(ErrorCode::EmptyPool, "median of no groups");
  std::sort(sizes.begin(), sizes.end());
  const std::size_t mid = sizes.size() / 2;
  if (sizes.size() % 2 == 1) return sizes[mid];
  return (sizes[mid - 1] + sizes[mid]) / 2;
}

std::vector<SftExample> build_sft_pool(std::span<const OptimizationResult> results,
                                       std::uint64_t seed) {
  std::map<ModelId, std::vector<SftExample>> groups;
  for (const auto& r : results) {
    if (r.outcome != OptimizationOutcome::Success || r.leak || !r.selected_hint) continue;
    groups[r.model].push_back(SftExample{r.question_id, r.model, *r.selected_hint, r.id()});
  }
  if (groups.empty()) throw Error(ErrorCode::EmptyPool, "no successful, leak-free hints");

  std::vector<std::size_t> sizes;
  for (const auto& [model, g] : groups) sizes.push_back(g.size());
  const std::size_t target = median_count(sizes);

  Rng rng(seed);
  std::vector<SftExample> pool;
  for (auto& [model, g] : groups) {
    if (g.size() >= target) {
      for (std::size_t i : rng.sample_without_replacement(g.size(), target)) pool.push_back(g[i]);
    } else {
      const std::size_t n = g.size();
      for (const auto& e : g) pool.push_back(e);
      for (std::size_t i = n; i < target; ++i) pool.push_back(g[rng.uniform_index(n)]);
    }
  }
  return pool;
}

std::vector<PromptKey> RlPool::keys(std::span<const ModelId> targets) const {
  std::vector<PromptKey> out;
  out.reserve(questions.size() * targets.size());
  for (const auto& q : questions) {
    for (const auto& t : targets) out.push_back(PromptKey{q.question_id, t});
  }
  return out;
}

RlPool build_rl_pool(std::span<const BaseProfile> profiles, std::span<const ModelId> targets,
                     double base_correct_share, std::uint64_t seed) {
  if (!(base_correct_share >= 0.0 && base_correct_share <= 1.0)) {
    throw Error(ErrorCode::PreconditionViolation, "base_correct_share must lie in [0, 1]");
  }
  // Question order follows first appearance in `profiles`.
  std::vector<std::string> order;
  std::map<std::string, std::map<ModelId, BaseLabel>> labels;
  for (const auto& p : profiles) {
    if (!labels.contains(p.question_id)) order.push_back(p.question_id);
    labels[p.question_id][p.model] = p.label;
  }

  std::vector<std::string> correct;
  std::vector<std::string> rest;
  for (const auto& id : order) {
    const auto& by_model = labels[id];
    bool complete = true;
    bool any_mixed = false;
    bool all_correct = true;
    for (const auto& t : targets) {
      auto it = by_model.find(t);
      if (it == by_model.end()) {
        complete = false;
        break;
      }
      any_mixed |= it->second == BaseLabel::Mixed;
      all_correct &= it->second == BaseLabel::BaseCorrect;
    }
    if (!complete || any_mixed) continue;
    (all_correct ? correct : rest).push_back(id);
  }

  const double s = base_correct_share;
  std::size_t n_correct = 0;
  std::size_t n_rest = 0;
  if (s == 0.0) {
    n_rest = rest.size();
  } else if (s == 1.0) {
    n_correct = correct.size();
  } else {
    n_rest = rest.size();
    n_correct = static_cast<std::size_t>(std::llround(s / (1.0 - s) * static_cast<double>(n_rest)));
    if (n_correct > correct.size()) {
      n_correct = correct.size();
      n_rest = std::min(rest.size(), static_cast<std::size_t>(std::llround(
                                         (1.0 - s) / s * static_cast<double>(n_correct))));
    }
  }
  if ((s > 0.0 && correct.empty()) || (s < 1.0 && rest.empty()) || n_correct + n_rest == 0) {
    throw Error(ErrorCode::InsufficientData,
                "cannot realise base_correct_share " + std::to_string(s) + " from " +
                    std::to_string(correct.size()) + " all-correct and " +
                    std::to_string(rest.size()) + " other questions");
  }

  Rng rng(seed);
  RlPool pool;
  for (std::size_t i : rng.sample_without_replacement(correct.size(), n_correct)) {
    pool.questions.push_back(RlQuestion{correct[i], true});
  }
  for (std::size_t i : rng.sample_without_replacement(rest.size(), n_rest)) {
    pool.questions.push_back(RlQuestion{rest[i], false});
  }
  rng.shuffle(pool.questions);
  return pool;
}

Json to_json(const SftExample& e) {
  return Json{{"question_id", e.question_id},
              {"model", e.model.name()},
              {"hint", to_json(e.hint)},
              {"source", e.source_id}};
}

Json to_json(const RlQuestion& q) {
  return Json{{"question_id", q.question_id}, {"all_base_correct", q.all_base_correct}};
}

RlQuestion rl_question_from_json(const Json& j) {
  return RlQuestion{j.at("question_id").get<std::string>(), j.at("all_base_correct").get<bool>()};
}

}  // namespace tth
