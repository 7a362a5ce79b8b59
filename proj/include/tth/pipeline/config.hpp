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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tth/client/http.hpp"
#include "tth/core/types.hpp"
#include "tth/metrics/metrics.hpp"
#include "tth/predictor/mlp.hpp"
#include "tth/reward/reward.hpp"
#include "tth/sampler/sampler.hpp"

namespace tth {

/// Values of the TOML subset the config files use: strings, integers,
/// floats, booleans and flat arrays of those.
using TomlScalar = std::variant<std::string, std::int64_t, double, bool>;
using TomlValue = std::variant<std::string, std::int64_t, double, bool, std::vector<TomlScalar>>;

/// Section path ("endpoint.local") -> key -> value. Top-level keys live
/// under "". Throws InvalidConfig with a line number on syntax errors.
using TomlDocument = std::map<std::string, std::map<std::string, TomlValue>>;
TomlDocument parse_toml(std::string_view text);

struct GrpoConfig {
  std::size_t group_size = 8;
  double temperature = 0.9;
  double clip = 0.2;
  double kl = 0.04;
  double learning_rate = 0.5;
  std::size_t steps = 20;
  std::vector<std::string> templates;
};

struct PredictorRunConfig {
  std::optional<std::filesystem::path> features;
  std::optional<std::filesystem::path> test_features;
  HeadKind task = HeadKind::Binary;
  PredictorVariant variant = PredictorVariant::shared();
  TrainConfig train;
};

struct RunConfig {
  std::optional<std::filesystem::path> dataset;
  std::vector<ModelId> targets;
  ModelId proposer{"proposer"};
  ModelId editor{"editor"};
  ModelId annotator{"annotator"};
  std::size_t r_max = 3;
  std::size_t trials = kBaseTrials;
  RewardConfig reward;
  GrpoConfig grpo;
  double base_correct_share = 0.5;
  std::size_t parallelism = 8;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> prompts_dir;
  std::uint64_t seed = 0;
  std::vector<Strategy> strategies = {Strategy::Base, Strategy::CoT, Strategy::SelfRefine, Strategy::ExternalJudge,
                                      Strategy::TTH};
  /// Target -> judge model for the external-judge strategy.
  std::map<ModelId, ModelId> judges;
  std::vector<EndpointConfig> endpoints;
  PredictorRunConfig predictor;
};

/// Default hint templates for the toy GRPO policy.
const std::vector<std::string>& default_hint_templates();

/// Relative paths are resolved against `base_dir`. Throws InvalidConfig.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Checks ranges and cross-field invariants; throws InvalidConfig.
void validate(const RunConfig& cfg);

/// Canonical JSON of the effective config, used for the manifest digest.
Json to_json(const RunConfig& cfg);

}  // namespace tth
