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
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tth/core/json.hpp"
#include "tth/predictor/mlp.hpp"

namespace tth {

/// Rank-statistic AUROC with midranks for ties; absent when either class
/// is empty.
std::optional<double> auroc(std::span<const double> scores, std::span<const int> labels);

struct ThresholdChoice {
  double threshold = 0.0;  // predict positive when score >= threshold
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

/// Exact max-F1 over thresholds at every midpoint between adjacent distinct
/// scores, plus one threshold below the minimum.
ThresholdChoice max_f1(std::span<const double> scores, std::span<const int> labels);

struct BinaryReport {
  std::size_t n = 0;
  std::size_t positives = 0;
  std::optional<double> auroc;
  /// Precision and recall are reported at the max-F1 threshold.
  ThresholdChoice at_max_f1;
};

BinaryReport binary_report(std::span<const double> scores, std::span<const int> labels);

struct ModeReport {
  std::size_t n = 0;
  double top1 = 0.0;
  double top2 = 0.0;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
  double balanced_accuracy = 0.0;
};

/// `scores` is classes x n; `labels` holds class indices.
ModeReport mode_report(const Eigen::MatrixXd& scores, std::span<const std::size_t> labels);

Json to_json(const BinaryReport& r);
Json to_json(const ModeReport& r);

/// Scores every row labelled for `target` and reports. Throws MissingLabels
/// when the test set carries no usable label for the target.
template <typename Scalar>
BinaryReport evaluate_binary(const MlpParams<Scalar>& p, std::span<const FeatureVector> rows, const ModelId& target) {
  std::vector<std::size_t> index;
  std::vector<int> labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (auto it = rows[i].labels.find(target); it != rows[i].labels.end()) {
      index.push_back(i);
      labels.push_back(it->second.error ? 1 : 0);
    }
  }
  if (index.empty()) throw Error(ErrorCode::MissingLabels, "no test labels for '" + target.name() + "'");
  const auto out = forward(p, make_batch<Scalar>(rows, index, p.shape), HeadKind::Binary, target);
  std::vector<double> scores(index.size());
  for (std::size_t c = 0; c < index.size(); ++c) scores[c] = static_cast<double>(out.probabilities(0, static_cast<Eigen::Index>(c)));
  return binary_report(scores, labels);
}

template <typename Scalar>
ModeReport evaluate_mode(const MlpParams<Scalar>& p, std::span<const FeatureVector> rows, const ModelId& target) {
  std::vector<std::size_t> index;
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (auto it = rows[i].labels.find(target); it != rows[i].labels.end() && it->second.mode) {
      index.push_back(i);
      labels.push_back(index_of(*it->second.mode));
    }
  }
  if (index.empty()) throw Error(ErrorCode::MissingLabels, "no failure-mode labels for '" + target.name() + "'");
  const auto out = forward(p, make_batch<Scalar>(rows, index, p.shape), HeadKind::Mode, target);
  return mode_report(out.probabilities.template cast<double>(), labels);
}

}  // namespace tth
