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

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include "tth/client/scripted.hpp"
#include "tth/core/random.hpp"
#include "tth/core/types.hpp"
#include "tth/pipeline/pipeline.hpp"
#include "tth/predictor/mlp.hpp"

namespace tth::testing {

inline QuestionRecord make_record(std::string id, std::size_t gold = 0,
                                  std::vector<std::string> options = {"red", "green", "blue", "yellow"}) {
  QuestionRecord r;
  r.id = std::move(id);
  r.image_ref = "images/" + r.id + ".jpg";
  r.question = "What color is the marked object?";
  r.options = std::move(options);
  r.gold_index = gold;
  r.rationale = "The object is " + r.options[gold] + ".";
  return r;
}

inline ScriptedEntry answer(std::string model, std::string q, std::string behavior, std::size_t index) {
  ScriptedEntry e;
  e.model = std::move(model);
  e.question_id = std::move(q);
  e.behavior = std::move(behavior);
  e.answer_index = index;
  e.reasoning = "scripted";
  return e;
}

inline ScriptedEntry raw(std::string model, std::string q, std::string behavior, std::string text) {
  ScriptedEntry e;
  e.model = std::move(model);
  e.question_id = std::move(q);
  e.behavior = std::move(behavior);
  e.raw = std::move(text);
  return e;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("tth-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Narrow input widths so finite differences stay cheap.
inline PredictorShape small_shape() {
  PredictorShape s;
  s.hidden_dim = 10;
  s.hidden_width = 8;
  s.hidden_embed = 6;
  s.scalar_dim = 3;
  s.scalar_embed = 4;
  s.head_width = 5;
  return s;
}

/// Gaussian features; each target's error label is the sign of a fixed
/// linear function of the hidden features, and its mode the argmax of
/// another projection.
inline std::vector<FeatureVector> separable_rows(std::size_t n, const PredictorShape& shape,
                                                 const std::vector<ModelId>& targets, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> directions;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(shape.hidden_dim));
    for (auto& x : w) x = rng.normal();
    directions.push_back(w);
  }
  std::vector<FeatureVector> rows;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector fv;
    fv.question_id = "q" + std::to_string(i);
    fv.hidden.resize(static_cast<Eigen::Index>(shape.hidden_dim));
    for (auto& x : fv.hidden) x = rng.normal();
    fv.scalars.resize(static_cast<Eigen::Index>(shape.scalar_dim));
    for (auto& x : fv.scalars) x = rng.uniform01();
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const double score = directions[t].dot(fv.hidden);
      const auto mode = static_cast<std::size_t>(std::abs(fv.hidden[0] * 3 + fv.hidden[1])) % kFailureModeCount;
      fv.labels[targets[t]] = TargetLabel{score > 0, kAllFailureModes[mode]};
    }
    rows.push_back(std::move(fv));
  }
  return rows;
}

#ifdef TTH_FIXTURE_DIR
inline std::filesystem::path mock40_dir() { return TTH_FIXTURE_DIR; }

/// Stages run by the scripted end-to-end check, in dependency order.
inline constexpr Command kMock40Stages[] = {Command::SampleBase,   Command::OptimizeHints, Command::BuildPools,
                                            Command::ScoreRewards, Command::GrpoToy,       Command::Annotate,
                                            Command::Evaluate,     Command::AnalyzeOverlap, Command::Report};

/// Runs every scripted stage of the 40-question fixture into `out`.
inline void run_mock40(const std::filesystem::path& out, std::size_t parallelism = 4) {
  RunConfig cfg = load_run_config(mock40_dir() / "config.toml");
  cfg.parallelism = parallelism;
  RunOptions opts;
  opts.out_dir = out;
  opts.mock = mock40_dir() / "script.jsonl";
  Pipeline pipeline(std::move(cfg), std::move(opts));
  for (Command c : kMock40Stages) pipeline.run(c);
}
#endif

}  // namespace tth::testing
