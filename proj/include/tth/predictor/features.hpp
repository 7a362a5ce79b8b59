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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tth/core/json.hpp"
#include "tth/core/types.hpp"

namespace tth {

inline constexpr std::size_t kHiddenStateDim = 3584;
inline constexpr std::size_t kScalarFeatureDim = 22;

/// Per-target supervision for one question.
struct TargetLabel {
  bool error = false;
  std::optional<FailureMode> mode;

  bool operator==(const TargetLabel&) const = default;
};

struct FeatureVector {
  std::string question_id;
  Eigen::VectorXd hidden;
  Eigen::VectorXd scalars;
  std::map<ModelId, TargetLabel> labels;
};

/// Throws DimensionMismatch on wrong lengths and InvalidRecord on
/// non-finite entries.
void validate(const FeatureVector& fv, std::size_t hidden_dim = kHiddenStateDim,
              std::size_t scalar_dim = kScalarFeatureDim);

/// Feature files carry their dimensions; readers check them against the
/// expected shape. Entries are stored as float32 in both formats.
struct FeatureFile {
  std::size_t hidden_dim = kHiddenStateDim;
  std::size_t scalar_dim = kScalarFeatureDim;
  std::vector<FeatureVector> rows;
};

void write_features_binary(const std::filesystem::path& path, const FeatureFile& file);
FeatureFile read_features_binary(const std::filesystem::path& path);

void write_features_jsonl(const std::filesystem::path& path, const FeatureFile& file);
FeatureFile read_features_jsonl(const std::filesystem::path& path);

/// Dispatches on the extension: ".jsonl" reads JSON-lines, anything else
/// the binary container.
FeatureFile read_features(const std::filesystem::path& path);

Json to_json(const TargetLabel& label);
TargetLabel target_label_from_json(const Json& j);

}  // namespace tth
