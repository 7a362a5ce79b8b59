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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tth/core/random.hpp"
#include "tth/core/types.hpp"
#include "tth/error.hpp"
#include "tth/reward/reward.hpp"

namespace tth {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Numerically stable softmax.
template <typename Derived>
VectorX<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  VectorX<Scalar> p = (logits.array() - logits.maxCoeff()).exp().matrix();
  return p / p.sum();
}

/// KL(softmax(logits) || softmax(reference)) over the finite pool.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar kl_divergence(const Eigen::MatrixBase<DerivedA>& logits,
                                        const Eigen::MatrixBase<DerivedB>& reference) {
  using Scalar = typename DerivedA::Scalar;
  const VectorX<Scalar> p = softmax(logits);
  const VectorX<Scalar> r = softmax(reference);
  Scalar kl(0);
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p[k] > Scalar(0)) kl += p[k] * (std::log(p[k]) - std::log(r[k]));
  }
  return kl;
}

/// Softmax policy over a fixed pool of K hint templates, anchored to a
/// frozen reference copy.
template <typename Scalar>
struct ToyPolicy {
  VectorX<Scalar> logits;
  VectorX<Scalar> reference_logits;

  static ToyPolicy uniform(std::size_t k) {
    ToyPolicy p;
    p.logits = VectorX<Scalar>::Zero(static_cast<Eigen::Index>(k));
    p.reference_logits = p.logits;
    return p;
  }

  std::size_t size() const { return static_cast<std::size_t>(logits.size()); }
  VectorX<Scalar> probabilities() const { return softmax(logits); }
};

using ToyPolicyd = ToyPolicy<double>;

/// Prompt key of a GRPO group: the question and the model identifier the
/// generator is conditioned on.
struct PromptKey {
  std::string question_id;
  ModelId model;

  auto operator<=>(const PromptKey&) const = default;
};

/// G candidates sampled for one prompt, with the logits that sampled them.
template <typename Scalar>
struct GroupSample {
  PromptKey key;
  std::vector<std::size_t> candidates;
  VectorX<Scalar> rewards;
  VectorX<Scalar> advantages;
  VectorX<Scalar> sampling_logits;

  std::size_t size() const { return candidates.size(); }
};

using GroupSampled = GroupSample<double>;

template <typename Scalar>
void check_group(const ToyPolicy<Scalar>& policy, const GroupSample<Scalar>& group) {
  const auto g = static_cast<Eigen::Index>(group.candidates.size());
  if (group.rewards.size() != g || group.advantages.size() != g) {
    throw Error(ErrorCode::DimensionMismatch, "group lists have inconsistent lengths");
  }
  if (group.sampling_logits.size() != policy.logits.size()) {
    throw Error(ErrorCode::DimensionMismatch, "sampling logits do not match the policy pool");
  }
  for (std::size_t c : group.candidates) {
    if (c >= policy.size()) throw Error(ErrorCode::IndexOutOfPool, "candidate outside the template pool");
  }
}

/// Clipped surrogate (mean over candidates) minus kl_beta * KL(policy || reference).
template <typename Scalar>
Scalar grpo_objective(const ToyPolicy<Scalar>& policy, const GroupSample<Scalar>& group,
                      Scalar clip_eps, Scalar kl_beta) {
  check_group(policy, group);
  const VectorX<Scalar> p = softmax(policy.logits);
  const VectorX<Scalar> old = softmax(group.sampling_logits);
  Scalar surrogate(0);
  for (std::size_t i = 0; i < group.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(group.candidates[i]);
    const Scalar ratio = p[k] / old[k];
    const Scalar adv = group.advantages[static_cast<Eigen::Index>(i)];
    const Scalar clipped = std::clamp(ratio, Scalar(1) - clip_eps, Scalar(1) + clip_eps);
    surrogate += std::min(ratio * adv, clipped * adv);
  }
  surrogate /= static_cast<Scalar>(group.size());
  return surrogate - kl_beta * kl_divergence(policy.logits, policy.reference_logits);
}

/// Analytic gradient of grpo_objective with respect to the logits.
template <typename Scalar>
VectorX<Scalar> grpo_gradient(const ToyPolicy<Scalar>& policy, const GroupSample<Scalar>& group,
                              Scalar clip_eps, Scalar kl_beta) {
  check_group(policy, group);
  const VectorX<Scalar> p = softmax(policy.logits);
  const VectorX<Scalar> old = softmax(group.sampling_logits);
  const VectorX<Scalar> ref = softmax(policy.reference_logits);
  VectorX<Scalar> grad = VectorX<Scalar>::Zero(p.size());

  for (std::size_t i = 0; i < group.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(group.candidates[i]);
    const Scalar ratio = p[k] / old[k];
    const Scalar adv = group.advantages[static_cast<Eigen::Index>(i)];
    // The min picks the clipped constant exactly when the ratio has left the
    // trust region in the direction the advantage favors.
    const bool clipped = (adv > Scalar(0) && ratio > Scalar(1) + clip_eps) ||
                         (adv < Scalar(0) && ratio < Scalar(1) - clip_eps);
    if (clipped || adv == Scalar(0)) continue;
    // d ratio / d z = ratio * (e_k - p)
    grad -= ratio * adv * p;
    grad[k] += ratio * adv;
  }
  grad /= static_cast<Scalar>(group.size());

  // d KL / d z_j = p_j * (log p_j - log r_j - KL)
  VectorX<Scalar> log_ratio(p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) log_ratio[j] = std::log(p[j]) - std::log(ref[j]);
  const Scalar kl = p.dot(log_ratio);
  grad -= kl_beta * (p.array() * (log_ratio.array() - kl)).matrix();
  return grad;
}

/// One gradient-ascent step on the GRPO objective.
template <typename Scalar>
ToyPolicy<Scalar> grpo_step(const ToyPolicy<Scalar>& policy, const GroupSample<Scalar>& group,
                            Scalar lr, Scalar clip_eps = Scalar(0.2), Scalar kl_beta = Scalar(0.04)) {
  ToyPolicy<Scalar> next = policy;
  next.logits += lr * grpo_gradient(policy, group, clip_eps, kl_beta);
  if (!next.logits.allFinite()) throw Error(ErrorCode::DimensionMismatch, "non-finite logits after update");
  return next;
}

/// Draws `g` template indices from softmax(logits / temperature).
template <typename Scalar>
std::vector<std::size_t> sample_candidates(const ToyPolicy<Scalar>& policy, std::size_t g,
                                           Scalar temperature, Rng& rng) {
  if (!(temperature > Scalar(0))) throw Error(ErrorCode::InvalidConfig, "temperature must be > 0");
  const VectorX<Scalar> p = softmax((policy.logits / temperature).eval());
  std::vector<std::size_t> out;
  out.reserve(g);
  for (std::size_t i = 0; i < g; ++i) {
    const double u = rng.uniform01();
    double acc = 0.0;
    std::size_t pick = policy.size() - 1;
    for (std::size_t k = 0; k < policy.size(); ++k) {
      acc += static_cast<double>(p[static_cast<Eigen::Index>(k)]);
      if (u < acc) {
        pick = k;
        break;
      }
    }
    out.push_back(pick);
  }
  return out;
}

}  // namespace tth
