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

#include <filesystem>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "tth/client/hub.hpp"
#include "tth/core/prompt.hpp"
#include "tth/pipeline/config.hpp"
#include "tth/pipeline/strategy.hpp"

namespace tth {

enum class Command {
  SampleBase,
  OptimizeHints,
  BuildPools,
  ScoreRewards,
  GrpoToy,
  Annotate,
  TrainPredictor,
  Evaluate,
  AnalyzeOverlap,
  Report,
};

inline constexpr Command kAllCommands[] = {Command::SampleBase,     Command::OptimizeHints, Command::BuildPools,
                                           Command::ScoreRewards,   Command::GrpoToy,       Command::Annotate,
                                           Command::TrainPredictor, Command::Evaluate,      Command::AnalyzeOverlap,
                                           Command::Report};

std::string_view to_string(Command c);
Command command_from_string(std::string_view s);

/// Artifact file names inside the output directory.
namespace artifacts {
inline constexpr std::string_view kBaseProfiles = "base_profiles.jsonl";
inline constexpr std::string_view kOptimization = "optimization_results.jsonl";
inline constexpr std::string_view kHints = "hints.jsonl";
inline constexpr std::string_view kSftPool = "sft_pool.jsonl";
inline constexpr std::string_view kRlPool = "rl_pool.jsonl";
inline constexpr std::string_view kRewardGroups = "reward_groups.jsonl";
inline constexpr std::string_view kGrpoTrace = "grpo_trace.jsonl";
inline constexpr std::string_view kPolicy = "grpo_policy.json";
inline constexpr std::string_view kAnnotations = "annotations.jsonl";
inline constexpr std::string_view kPredictorParams = "predictor_params.json";
inline constexpr std::string_view kPredictorReport = "predictor_report.jsonl";
inline constexpr std::string_view kLossTrace = "loss_trace.jsonl";
inline constexpr std::string_view kEvalDir = "eval";
inline constexpr std::string_view kOverlap = "overlap.jsonl";
inline constexpr std::string_view kOverlapTable = "overlap.txt";
inline constexpr std::string_view kMetrics = "metrics.jsonl";
inline constexpr std::string_view kReport = "report.txt";
inline constexpr std::string_view kManifest = "manifest.json";
}  // namespace artifacts

struct RunOptions {
  std::filesystem::path out_dir;
  /// Scripted fixture (JSON-lines of ScriptedEntry); every model is served
  /// from it and no endpoint is contacted.
  std::optional<std::filesystem::path> mock;
  /// Restricts `evaluate` to one strategy.
  std::optional<Strategy> strategy;
};

/// Runs pipeline commands against one output directory. Each command reads
/// its upstream artifacts (MissingUpstream if absent) and atomically writes
/// its own, then records input and output digests in the manifest.
class Pipeline {
 public:
  Pipeline(RunConfig config, RunOptions options);
  /// Uses a caller-built hub (tests inject clients this way).
  Pipeline(RunConfig config, RunOptions options, std::shared_ptr<ClientHub> hub);

  void run(Command command);

  ClientHub& hub() { return *hub_; }
  const RunConfig& config() const { return config_; }

 private:
  void sample_base();
  void optimize_hints();
  void build_pools();
  void score_rewards();
  void grpo_toy();
  void annotate_failures();
  void train_predictor();
  void evaluate();
  void analyze_overlap();
  void report();

  std::filesystem::path path(std::string_view name) const { return options_.out_dir / name; }
  std::filesystem::path require(std::string_view name);
  void write(std::string_view name, const std::string& content);
  const std::vector<QuestionRecord>& dataset();
  void record_manifest(Command command);

  RunConfig config_;
  RunOptions options_;
  std::shared_ptr<ClientHub> hub_;
  PromptSet prompts_;
  std::optional<std::vector<QuestionRecord>> dataset_;
  std::vector<std::filesystem::path> inputs_;
  std::vector<std::filesystem::path> outputs_;
};

/// 2 config error, 3 missing upstream, 4 transport exhaustion, 1 otherwise.
int exit_code_for(const Error& e);

}  // namespace tth
