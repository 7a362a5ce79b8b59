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

#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "tth/core/types.hpp"
#include "tth/error.hpp"

namespace tth {

/// Per-target scores for the four base/hinted cells.
struct RewardConfig {
  double repair_score = 1.0;
  double noop_score = 0.0;
  double harm_score = -1.0;
  double unrepaired_score = -0.5;
};

/// Requires harm < unrepaired < noop < repair; throws InvalidConfig.
void validate(const RewardConfig& cfg);

enum class OutcomeKind { Repair, NoOp, Harm, Unrepaired };

std::string_view to_string(OutcomeKind kind);

struct HintOutcome {
  ModelId model;
  bool base_correct = false;
  bool hinted_correct = false;
  OutcomeKind outcome = OutcomeKind::Unrepaired;
  double score = 0.0;
};

HintOutcome classify_outcome(bool base_correct, bool hinted_correct,
                             const RewardConfig& cfg = {}, ModelId model = {});

/// Mean score; `targets` must each appear exactly once in `outcomes`.
double average_reward(std::span<const HintOutcome> outcomes, std::span<const ModelId> targets);

/// (r - mean) / std with the population std; all zeros when std == 0.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> group_advantages(
    const Eigen::MatrixBase<Derived>& rewards) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (rewards.size() < 2) throw Error(ErrorCode::GroupTooSmall, "GRPO group needs at least 2 rewards");
  const Vector r = rewards.derived();
  const Vector centered = r.array() - r.mean();
  const Scalar stddev = std::sqrt(centered.squaredNorm() / static_cast<Scalar>(r.size()));
  if (stddev == Scalar(0)) return Vector::Zero(r.size());
  Vector adv = centered / stddev;
  // Re-center so the mean is zero to working precision.
  adv.array() -= adv.mean();
  return adv;
}

inline Eigen::VectorXd group_advantages(const std::vector<double>& rewards) {
  return group_advantages(Eigen::Map<const Eigen::VectorXd>(rewards.data(),
                                                            static_cast<Eigen::Index>(rewards.size())));
}

}  // namespace tth
