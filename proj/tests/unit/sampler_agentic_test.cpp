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

#include "support.hpp"
#include "tth/agentic/agentic.hpp"
#include "tth/client/scripted.hpp"
#include "tth/core/hint.hpp"
#include "tth/core/prompt.hpp"
#include "tth/error.hpp"
#include "tth/sampler/sampler.hpp"

namespace tth {
namespace {

using testing::answer;
using testing::make_record;
using testing::raw;

/// Records every request before delegating.
class Recorder final : public ChatClient {
 public:
  explicit Recorder(ChatClient& inner) : inner_(inner) {}
  std::string complete(const ChatRequest& r) override {
    requests.push_back(r);
    return inner_.complete(r);
  }
  std::vector<ChatRequest> requests;

 private:
  ChatClient& inner_;
};

TrialResponse trial(std::optional<std::size_t> index) {
  TrialResponse t;
  t.answer_index = index;
  t.parse_valid = index.has_value();
  t.raw = index ? option_letter(*index) : "?";
  return t;
}

TEST(Sampler, ThreeDeterministicTrialsWithDistinctSeeds) {
  const auto r = make_record("q1", 1);
  ScriptedClient scripted({answer("T", "q1", "base:trial-1", 1), answer("T", "q1", "base:trial-2", 1),
                           raw("T", "q1", "base:trial-3", "unsure")});
  Recorder rec(scripted);
  const auto p = sample_base(rec, r, ModelId("T"));
  ASSERT_EQ(rec.requests.size(), 3u);
  std::set<std::string> seeds;
  for (const auto& req : rec.requests) {
    EXPECT_EQ(req.temperature, 0.0);
    EXPECT_EQ(req.top_p, 1.0);
    EXPECT_EQ(req.prompt, base_prompt(r));
    seeds.insert(req.seed_tag);
  }
  EXPECT_EQ(seeds, (std::set<std::string>{"trial-1", "trial-2", "trial-3"}));
  EXPECT_EQ(p.label, BaseLabel::Mixed);
  EXPECT_TRUE(p.first_trial_correct(1));
}

TEST(Sampler, ClassificationRules) {
  const std::vector<TrialResponse> correct = {trial(0), trial(0), trial(0)};
  const std::vector<TrialResponse> wrong = {trial(1), trial(2), trial(1)};
  const std::vector<TrialResponse> mixed = {trial(0), trial(1), trial(0)};
  const std::vector<TrialResponse> invalid = {trial(1), trial(std::nullopt), trial(1)};
  EXPECT_EQ(classify_trials(correct, 0), BaseLabel::BaseCorrect);
  EXPECT_EQ(classify_trials(wrong, 0), BaseLabel::BaseIncorrect);
  EXPECT_EQ(classify_trials(mixed, 0), BaseLabel::Mixed);
  EXPECT_EQ(classify_trials(invalid, 0), BaseLabel::Mixed);
}

TEST(Sampler, IncorrectSetRules) {
  auto profile = [](std::string q, std::vector<TrialResponse> t, const char* model = "T") {
    BaseProfile p;
    p.question_id = std::move(q);
    p.model = ModelId(model);
    p.trials = std::move(t);
    p.label = classify_trials(p.trials, 0);
    return p;
  };
  const std::vector<BaseProfile> ps = {
      profile("same", {trial(1), trial(1), trial(1)}), profile("diff", {trial(1), trial(2), trial(1)}),
      profile("ok", {trial(0), trial(0), trial(0)}), profile("other", {trial(1), trial(1), trial(1)}, "U")};
  EXPECT_EQ(incorrect_set(ps, ModelId("T"), IncorrectRule::AllWrongSameAnswer), (std::set<std::string>{"same"}));
  EXPECT_EQ(incorrect_set(ps, ModelId("T"), IncorrectRule::AllWrongAnyAnswer),
            (std::set<std::string>{"diff", "same"}));
}

TEST(Sampler, ProfileJsonRoundTrip) {
  BaseProfile p;
  p.question_id = "q";
  p.model = ModelId("T");
  p.trials = {trial(1), trial(std::nullopt), trial(2)};
  p.label = BaseLabel::Mixed;
  const auto back = base_profile_from_json(to_json(p));
  EXPECT_EQ(to_json(back), to_json(p));
}

// Agentic loop. "T" is the target, "P" the proposer, "E" the editor.
struct LoopFixture {
  QuestionRecord record = make_record("q1", 2);
  AgentRoles roles{ModelId("P"), ModelId("E")};
  std::vector<ScriptedEntry> entries = {
      raw("P", "*", "*", R"({"hint": ["Look at the marked object."]})"),
      raw("E", "*", "*", R"({"verdict": "approve", "feedback": "fine"})"),
      answer("T", "*", "*", 0),
  };

  BaseProfile base(BaseLabel label) const {
    BaseProfile p;
    p.question_id = record.id;
    p.model = ModelId("T");
    p.trials = {trial(label == BaseLabel::BaseCorrect ? 2 : 0)};
    p.label = label;
    return p;
  }
};

TEST(Agentic, SuccessStopsAtFirstCorrectRound) {
  LoopFixture f;
  f.entries.push_back(answer("T", "q1", "hinted:round-2", 2));
  ScriptedClient c(f.entries);
  Recorder rec(c);
  const auto r = optimize_hint(rec, f.record, f.base(BaseLabel::BaseIncorrect), HintType::Repair, f.roles);
  EXPECT_EQ(r.outcome, OptimizationOutcome::Success);
  EXPECT_EQ(r.rounds.size(), 2u);
  EXPECT_EQ(rec.requests.size(), 6u);
  EXPECT_EQ(*r.selected_hint, make_hint({"Look at the marked object."}));
  // The verifier sees the hint prepended to the unchanged base prompt.
  EXPECT_EQ(rec.requests[2].prompt, build_hint_prompt(f.record, *r.selected_hint));
  EXPECT_EQ(rec.requests[2].model, ModelId("T"));
}

TEST(Agentic, MalformedProposerOutputBurnsTheRound) {
  LoopFixture f;
  f.entries.push_back(raw("P", "q1", "propose:round-1:T", "I would rather not"));
  f.entries.push_back(answer("T", "q1", "hinted:round-2", 2));
  ScriptedClient c(f.entries);
  const auto r = optimize_hint(c, f.record, f.base(BaseLabel::BaseIncorrect), HintType::Repair, f.roles);
  ASSERT_EQ(r.rounds.size(), 2u);
  EXPECT_TRUE(r.rounds[0].error);
  EXPECT_FALSE(r.rounds[0].verifier_answer);
  EXPECT_EQ(r.outcome, OptimizationOutcome::Success);
}

TEST(Agentic, EditorRevisionReplacesTheHintAndFeedbackIsForwarded) {
  LoopFixture f;
  f.entries.push_back(raw("E", "q1", "edit:round-1:T",
                          R"({"verdict": "revise", "hint": ["Check the shade."], "feedback": "too vague"})"));
  ScriptedClient c(f.entries);
  Recorder rec(c);
  const auto r = optimize_hint(rec, f.record, f.base(BaseLabel::BaseIncorrect), HintType::Repair, f.roles);
  EXPECT_EQ(*r.rounds[0].final_hint, make_hint({"Check the shade."}));
  EXPECT_EQ(*r.rounds[0].editor_verdict, EditorVerdict::Revise);
  EXPECT_EQ(rec.requests[2].prompt, build_hint_prompt(f.record, make_hint({"Check the shade."})));
  // Round 2's proposer prompt carries round 1's editor feedback and hinted answer.
  EXPECT_NE(rec.requests[3].prompt.find("too vague"), std::string::npos);
  EXPECT_NE(rec.requests[3].prompt.find("A. red"), std::string::npos);
  // Only the latest feedback is forwarded.
  EXPECT_NE(rec.requests[6].prompt.find("fine"), std::string::npos);
  EXPECT_EQ(rec.requests[6].prompt.find("too vague"), std::string::npos);
  EXPECT_EQ(r.outcome, OptimizationOutcome::UnsuccessfulRepair);
  EXPECT_EQ(*r.selected_hint, make_hint({"Look at the marked object."}));
}

TEST(Agentic, ProposerSeesPrivilegedContext) {
  LoopFixture f;
  ScriptedClient c(f.entries);
  Recorder rec(c);
  optimize_hint(rec, f.record, f.base(BaseLabel::BaseIncorrect), HintType::Repair, f.roles, 1);
  const auto& prompt = rec.requests[0].prompt;
  EXPECT_NE(prompt.find("C. blue"), std::string::npos);
  EXPECT_NE(prompt.find(*f.record.rationale), std::string::npos);
  EXPECT_NE(prompt.find("T"), std::string::npos);
  // The target never sees the gold answer.
  EXPECT_EQ(rec.requests[2].prompt.find(*f.record.rationale), std::string::npos);
}

TEST(Agentic, LeakyHintIsFlagged) {
  LoopFixture f;
  f.entries.push_back(raw("P", "q1", "propose:round-1:T", R"({"hint": ["It is blue."]})"));
  f.entries.push_back(answer("T", "q1", "hinted:round-1", 2));
  ScriptedClient c(f.entries);
  const auto r = optimize_hint(c, f.record, f.base(BaseLabel::BaseIncorrect), HintType::Repair, f.roles);
  EXPECT_EQ(r.outcome, OptimizationOutcome::Success);
  EXPECT_TRUE(r.leak);
}

TEST(Agentic, Preconditions) {
  LoopFixture f;
  ScriptedClient c(f.entries);
  EXPECT_THROW(optimize_hint(c, f.record, f.base(BaseLabel::BaseCorrect), HintType::Repair, f.roles), Error);
  EXPECT_THROW(optimize_hint(c, f.record, f.base(BaseLabel::Mixed), HintType::Repair, f.roles), Error);
  EXPECT_THROW(optimize_hint(c, f.record, f.base(BaseLabel::BaseIncorrect), HintType::Repair, f.roles, 0), Error);
}

TEST(Agentic, EditorParsing) {
  EXPECT_EQ(parse_editor(R"(ok {"verdict": "APPROVE"})").verdict, EditorVerdict::Approve);
  EXPECT_EQ(*parse_editor(R"({"verdict": "revise", "hint": ["a"]})").revised, make_hint({"a"}));
  EXPECT_THROW(parse_editor(R"({"verdict": "revise"})"), Error);
  EXPECT_THROW(parse_editor(R"({"verdict": "maybe"})"), Error);
  EXPECT_THROW(parse_editor("approve"), Error);
}

TEST(Agentic, ResultJsonRoundTrip) {
  LoopFixture f;
  f.entries.push_back(raw("P", "q1", "propose:round-1:T", "garbage"));
  ScriptedClient c(f.entries);
  const auto r = optimize_hint(c, f.record, f.base(BaseLabel::BaseIncorrect), HintType::Repair, f.roles);
  EXPECT_EQ(to_json(optimization_result_from_json(to_json(r))), to_json(r));
}

}  // namespace
}  // namespace tth
