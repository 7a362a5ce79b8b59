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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "support.hpp"
#include "tth/agentic/agentic.hpp"
#include "tth/client/scripted.hpp"
#include "tth/core/dataset.hpp"
#include "tth/core/hint.hpp"
#include "tth/core/json.hpp"
#include "tth/core/prompt.hpp"
#include "tth/error.hpp"
#include "tth/pipeline/config.hpp"
#include "tth/pipeline/pipeline.hpp"
#include "tth/pipeline/strategy.hpp"
#include "tth/predictor/features.hpp"

namespace tth {
namespace {

using testing::answer;
using testing::make_record;
using testing::raw;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no tth::Error thrown";
  return ErrorCode::Io;
}

TEST(Toml, ScalarsArraysAndComments) {
  const auto doc = parse_toml(R"(
# comment
[run]
name = "a # not a comment"   # trailing
count = 3
ratio = 0.25
flag = true
list = [
  "x", "y",
]
[endpoint.local.models]
"Target A" = "api-a"
)");
  const auto& run = doc.at("run");
  EXPECT_EQ(std::get<std::string>(run.at("name")), "a # not a comment");
  EXPECT_EQ(std::get<std::int64_t>(run.at("count")), 3);
  EXPECT_EQ(std::get<double>(run.at("ratio")), 0.25);
  EXPECT_TRUE(std::get<bool>(run.at("flag")));
  EXPECT_EQ(std::get<std::vector<TomlScalar>>(run.at("list")).size(), 2u);
  EXPECT_EQ(std::get<std::string>(doc.at("endpoint.local.models").at("Target A")), "api-a");
}

TEST(Toml, SyntaxErrorsNameTheLine) {
  try {
    parse_toml("[run]\nx = 1\ny = \n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_EQ(code_of([] { parse_toml("[run\n"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { parse_toml("[run]\nx = \"open\n"); }), ErrorCode::InvalidConfig);
}

TEST(Config, DefaultsAreValid) {
  const RunConfig cfg = parse_run_config("");
  EXPECT_EQ(cfg.r_max, 3u);
  EXPECT_EQ(cfg.trials, 3u);
  EXPECT_EQ(cfg.strategies.size(), 5u);
  EXPECT_GE(cfg.grpo.templates.size(), 2u);
}

TEST(Config, FixtureConfigLoads) {
  const RunConfig cfg = load_run_config(testing::mock40_dir() / "config.toml");
  EXPECT_EQ(cfg.targets.size(), 3u);
  EXPECT_EQ(cfg.judges.at(ModelId("Target Beta")), ModelId("Judge Beta"));
  EXPECT_EQ(cfg.strategies.size(), 7u);
  EXPECT_EQ(*cfg.dataset, testing::mock40_dir() / "dataset.jsonl");
  EXPECT_EQ(cfg.grpo.group_size, 4u);
}

TEST(Config, RejectsBadInput) {
  auto bad = [](const std::string& text) { return code_of([&] { parse_run_config(text); }); };
  EXPECT_EQ(bad("[run]\nr_max = 0\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad("[run]\nmystery = 1\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad("[nowhere]\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad("x = 1\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad("[run]\ntrials = \"three\"\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad("[run]\ntargets = [\"a\", \"a\"]\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad("[reward]\nnoop = 5.0\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad("[grpo]\nclip = 1.5\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad("[predictor]\nvariant = \"individual\"\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad("[predictor]\ntask = \"regression\"\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad("[evaluate]\nstrategies = [\"magic\"]\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(bad("[endpoint.x]\npath = \"/v1\"\n"), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { load_run_config("/nonexistent/config.toml"); }), ErrorCode::InvalidConfig);
}

TEST(Config, EndpointsAndPredictor) {
  const RunConfig cfg = parse_run_config(R"(
[endpoint.local]
base_url = "http://127.0.0.1:8000"
api_key_env = "LOCAL_KEY"
models = ["plain"]
[endpoint.local.models]
"Target A" = "a-v2"
[predictor]
task = "mode"
variant = "individual"
target = "Target A"
epochs = 7
features = "feats.tthf"
)",
                                         "/data");
  ASSERT_EQ(cfg.endpoints.size(), 1u);
  const auto& ep = cfg.endpoints[0];
  EXPECT_EQ(ep.name, "local");
  EXPECT_EQ(ep.model_names.at("plain"), "plain");
  EXPECT_EQ(ep.model_names.at("Target A"), "a-v2");
  EXPECT_EQ(cfg.predictor.task, HeadKind::Mode);
  EXPECT_EQ(cfg.predictor.train.task, HeadKind::Mode);
  EXPECT_EQ(cfg.predictor.train.epochs, 7u);
  EXPECT_EQ(*cfg.predictor.features, std::filesystem::path("/data/feats.tthf"));
}

TEST(Commands, NamesRoundTrip) {
  for (Command c : kAllCommands) EXPECT_EQ(command_from_string(to_string(c)), c);
  EXPECT_EQ(to_string(Command::SampleBase), "sample-base");
  EXPECT_THROW(command_from_string("launch"), Error);
}

TEST(ExitCodes, MapErrorKinds) {
  EXPECT_EQ(exit_code_for(Error(ErrorCode::InvalidConfig, "")), 2);
  EXPECT_EQ(exit_code_for(Error(ErrorCode::Unconfigured, "")), 2);
  EXPECT_EQ(exit_code_for(Error(ErrorCode::MissingUpstream, "")), 3);
  EXPECT_EQ(exit_code_for(Error(ErrorCode::Transport, "")), 4);
  EXPECT_EQ(exit_code_for(Error(ErrorCode::ScriptMiss, "")), 1);
}

struct StrategyFixture {
  QuestionRecord record = make_record("q1", 2);
  ModelId target{"T"};
  BaseProfile base;
  ScriptedClient client{{answer("T", "*", "*", 2), raw("J", "*", "*", "Looks wrong, reconsider the colour.")}};

  StrategyFixture() {
    base.question_id = "q1";
    base.model = target;
    TrialResponse t;
    t.answer_index = 1;
    t.parse_valid = true;
    base.trials = {t, t, t};
    base.label = BaseLabel::BaseIncorrect;
  }

  StrategyRun run(Strategy s, StrategyInputs in = {}) {
    in.base = &base;
    StrategySpec spec{s, std::nullopt, std::nullopt};
    if (s == Strategy::ExternalJudge) spec.judge_model = ModelId("J");
    if (s == Strategy::TTH) spec.hint_source = "hints.jsonl";
    return run_strategy(client, record, target, spec, in);
  }
};

TEST(Strategies, CallCountsMatchBudgets) {
  StrategyFixture f;
  const std::map<Strategy, std::size_t> expected = {
      {Strategy::Base, 1}, {Strategy::CoT, 1}, {Strategy::SelfRefine, 2}, {Strategy::ExternalJudge, 3},
      {Strategy::TTH, 1},  {Strategy::CategoricalHint, 1}, {Strategy::UniversalTaxonomyHint, 1}};
  for (Strategy s : kAllStrategies) {
    EXPECT_EQ(call_budget(s), expected.at(s)) << to_string(s);
    const auto run = f.run(s);
    EXPECT_EQ(run.requests.size(), call_budget(s)) << to_string(s);
    EXPECT_FALSE(run.row.base_correct);
    EXPECT_TRUE(run.row.final_correct);
  }
}

TEST(Strategies, ExternalJudgeSequence) {
  StrategyFixture f;
  const auto run = f.run(Strategy::ExternalJudge);
  ASSERT_EQ(run.requests.size(), 3u);
  EXPECT_EQ(run.requests[0].prompt, base_prompt(f.record));
  EXPECT_EQ(run.requests[0].seed_tag, "trial-1");
  EXPECT_EQ(run.requests[1].model, ModelId("J"));
  EXPECT_EQ(run.requests[1].tag.behavior, "external_judge:critique");
  EXPECT_NE(run.requests[1].prompt.find(render_answer(2, "scripted")), std::string::npos);
  EXPECT_EQ(run.requests[2].model, f.target);
  EXPECT_EQ(run.requests[2].tag.behavior, "external_judge:revise");
  EXPECT_NE(run.requests[2].prompt.find("reconsider the colour"), std::string::npos);
}

TEST(Strategies, SelfRefineFeedsBackTheFirstAnswer) {
  StrategyFixture f;
  const auto run = f.run(Strategy::SelfRefine);
  EXPECT_EQ(run.requests[0].prompt, base_prompt(f.record));
  EXPECT_EQ(run.requests[1].tag.behavior, "self_refine:revise");
  EXPECT_NE(run.requests[1].prompt.find(render_answer(2, "scripted")), std::string::npos);
}

TEST(Strategies, HintPromptsAndFallbacks) {
  StrategyFixture f;
  const Hint hint = make_hint({"Compare the shade with the sky."});
  StrategyInputs with_hint;
  with_hint.hint = &hint;
  EXPECT_EQ(f.run(Strategy::TTH, with_hint).requests[0].prompt, build_hint_prompt(f.record, hint));
  EXPECT_EQ(f.run(Strategy::TTH).requests[0].prompt, base_prompt(f.record));
  EXPECT_EQ(f.run(Strategy::TTH).requests[0].seed_tag, "trial-1");

  const FailureAnnotation ann{"q1", f.target, FailureMode::AttributeBinding, "attribute binding", false};
  StrategyInputs annotated;
  annotated.annotation = &ann;
  const auto cat = f.run(Strategy::CategoricalHint, annotated).requests[0];
  EXPECT_EQ(cat.prompt, serialize(categorical_hint(FailureMode::AttributeBinding)) + "\n\n" + cot_prompt(f.record));
  const auto fallback = f.run(Strategy::CategoricalHint).requests[0];
  const auto cot = f.run(Strategy::CoT).requests[0];
  EXPECT_EQ(fallback.prompt, cot.prompt);
  EXPECT_EQ(fallback.tag.behavior, cot.tag.behavior);
  EXPECT_EQ(fallback.seed_tag, cot.seed_tag);

  const auto uni = f.run(Strategy::UniversalTaxonomyHint).requests[0];
  EXPECT_EQ(uni.prompt, universal_taxonomy_hint() + "\n\n" + base_prompt(f.record));
}

TEST(Strategies, Preconditions) {
  StrategyFixture f;
  EXPECT_EQ(code_of([&] {
              run_strategy(f.client, f.record, f.target, StrategySpec{Strategy::Base, std::nullopt, std::nullopt}, {});
            }),
            ErrorCode::MissingBaseProfile);
  StrategyInputs in;
  in.base = &f.base;
  EXPECT_EQ(code_of([&] {
              run_strategy(f.client, f.record, f.target,
                           StrategySpec{Strategy::ExternalJudge, std::nullopt, std::nullopt}, in);
            }),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] {
              run_strategy(f.client, f.record, f.target, StrategySpec{Strategy::TTH, std::nullopt, std::nullopt}, in);
            }),
            ErrorCode::InvalidConfig);
}

RunOptions mock_options(const std::filesystem::path& out) {
  RunOptions opts;
  opts.out_dir = out;
  opts.mock = testing::mock40_dir() / "script.jsonl";
  return opts;
}

TEST(Pipeline, DownstreamStagesNeedTheirInputs) {
  testing::TempDir dir;
  Pipeline p(load_run_config(testing::mock40_dir() / "config.toml"), mock_options(dir.path()));
  for (Command c : {Command::OptimizeHints, Command::BuildPools, Command::Annotate, Command::Evaluate,
                    Command::AnalyzeOverlap, Command::Report}) {
    EXPECT_EQ(code_of([&] { p.run(c); }), ErrorCode::MissingUpstream) << to_string(c);
  }
}

TEST(Pipeline, MissingDatasetIsMissingUpstream) {
  testing::TempDir dir;
  RunConfig cfg = load_run_config(testing::mock40_dir() / "config.toml");
  cfg.dataset = dir.path() / "absent.jsonl";
  Pipeline p(std::move(cfg), mock_options(dir.path()));
  EXPECT_EQ(code_of([&] { p.run(Command::SampleBase); }), ErrorCode::MissingUpstream);
}

TEST(Pipeline, Mock40MatchesGoldenAndIsParallelismInvariant) {
  testing::TempDir a, b;
  testing::run_mock40(a.path(), 4);
  testing::run_mock40(b.path(), 1);
  const auto golden = testing::mock40_dir() / "golden";
  EXPECT_EQ(read_file(a.path() / "metrics.jsonl"), read_file(golden / "metrics.jsonl"));
  EXPECT_EQ(read_file(a.path() / "report.txt"), read_file(golden / "report.txt"));
  for (const char* name : {"base_profiles.jsonl", "optimization_results.jsonl", "hints.jsonl", "rl_pool.jsonl",
                           "grpo_trace.jsonl", "annotations.jsonl", "metrics.jsonl", "eval/tth.transcript.jsonl"}) {
    EXPECT_EQ(read_file(a.path() / name), read_file(b.path() / name)) << name;
  }

  for (Strategy s : kAllStrategies) {
    const auto calls = read_jsonl(a.path() / "eval" / (std::string(to_string(s)) + ".calls.jsonl"));
    EXPECT_EQ(calls.size(), 120u);
    for (const auto& c : calls) EXPECT_EQ(c.at("calls").get<std::size_t>(), call_budget(s));
  }

  const auto records = load_dataset(testing::mock40_dir() / "dataset.jsonl");
  std::map<std::string, QuestionRecord> by_id;
  for (const auto& r : records) by_id.emplace(r.id, r);
  std::map<std::pair<std::string, std::string>, Hint> hints;
  for (const auto& j : read_jsonl(a.path() / "hints.jsonl")) {
    hints.emplace(std::pair{j.at("question_id").get<std::string>(), j.at("model").get<std::string>()},
                  hint_from_json(j.at("hint")));
  }
  ASSERT_FALSE(hints.empty());
  std::size_t hinted = 0;
  for (const auto& t : read_jsonl(a.path() / "eval" / "tth.transcript.jsonl")) {
    const auto& record = by_id.at(t.at("question_id").get<std::string>());
    const auto it = hints.find({record.id, t.at("model").get<std::string>()});
    const std::string expected = it == hints.end() ? base_prompt(record) : build_hint_prompt(record, it->second);
    hinted += it != hints.end();
    EXPECT_EQ(t.at("prompt").get<std::string>(), expected);
  }
  EXPECT_EQ(hinted, hints.size());

  const Json manifest = Json::parse(read_file(a.path() / "manifest.json"));
  EXPECT_TRUE(manifest.contains("config_digest"));
  EXPECT_EQ(manifest.at("commands").size(), std::size(testing::kMock40Stages));
}

TEST(Pipeline, TrainPredictorStage) {
  testing::TempDir dir;
  RunConfig cfg = parse_run_config("");
  EXPECT_EQ(code_of([&] { Pipeline(cfg, RunOptions{dir.path(), {}, {}}).run(Command::TrainPredictor); }),
            ErrorCode::InvalidConfig);
  cfg.predictor.features = dir.path() / "train.tthf";
  EXPECT_EQ(code_of([&] { Pipeline(cfg, RunOptions{dir.path(), {}, {}}).run(Command::TrainPredictor); }),
            ErrorCode::MissingUpstream);

  const auto shape = testing::small_shape();
  const std::vector<ModelId> targets = {ModelId("A"), ModelId("B")};
  FeatureFile file;
  file.hidden_dim = shape.hidden_dim;
  file.scalar_dim = shape.scalar_dim;
  file.rows = testing::separable_rows(48, shape, targets, 3);
  write_features_binary(*cfg.predictor.features, file);
  cfg.predictor.train.shape = shape;
  cfg.predictor.train.epochs = 20;
  cfg.predictor.train.batch_size = 16;
  Pipeline(cfg, RunOptions{dir.path(), {}, {}}).run(Command::TrainPredictor);
  const auto report = read_jsonl(dir.path() / "predictor_report.jsonl");
  ASSERT_EQ(report.size(), 2u);
  EXPECT_EQ(report[0].at("target"), "A");
  EXPECT_EQ(report[0].at("split"), "train");
  EXPECT_EQ(read_jsonl(dir.path() / "loss_trace.jsonl").size(), 21u);  // initial loss plus one per epoch
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + TTH_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  testing::TempDir dir;
  const std::string out = "--out \"" + dir.path().string() + "\"";
  const std::string config = "--config \"" + (testing::mock40_dir() / "config.toml").string() + "\"";
  const std::string mock = "--mock \"" + (testing::mock40_dir() / "script.jsonl").string() + "\"";

  std::ofstream(dir.path() / "bad.toml") << "[run]\nr_max = 0\n";
  EXPECT_EQ(run_cli("sample-base --config \"" + (dir.path() / "bad.toml").string() + "\" " + out), 2);
  EXPECT_EQ(run_cli("evaluate " + config + " " + mock + " " + out), 3);
  EXPECT_EQ(run_cli("sample-base " + config + " " + mock + " " + out), 0);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "base_profiles.jsonl"));
  EXPECT_EQ(run_cli("evaluate --strategy magic " + config + " " + mock + " " + out), 2);
  EXPECT_EQ(run_cli("no-such-command"), 2);
}

}  // namespace
}  // namespace tth
