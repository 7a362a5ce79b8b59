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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits 1 if
// any fails. Tolerances and time limits are the constants in `tol`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tth/agentic/agentic.hpp"
#include "tth/client/scripted.hpp"
#include "tth/core/dataset.hpp"
#include "tth/core/hint.hpp"
#include "tth/core/json.hpp"
#include "tth/core/prompt.hpp"
#include "tth/core/random.hpp"
#include "tth/error.hpp"
#include "tth/metrics/metrics.hpp"
#include "tth/pipeline/strategy.hpp"
#include "tth/predictor/evaluate.hpp"
#include "tth/predictor/mlp.hpp"
#include "tth/reward/grpo.hpp"
#include "tth/reward/pools.hpp"
#include "tth/reward/reward.hpp"
#include "tth/sampler/sampler.hpp"

namespace {

using namespace tth;
using Clock = std::chrono::steady_clock;

namespace tol {
constexpr double kTruthTableSeconds = 1e-3;
constexpr double kIdentity = 1e-12;
constexpr double kAdvantageMean = 1e-12;
constexpr double kTranslation = 1e-9;
constexpr double kGrpoGradient = 1e-6;
constexpr double kGrpoSeconds = 10.0;
constexpr double kHintLoopSeconds = 5.0;
constexpr double kMlpGradient = 1e-5;
constexpr double kSeparableAccuracy = 0.98;
constexpr std::size_t kSeparableEpochs = 200;
constexpr double kAuroc = 1e-12;
constexpr double kSoftmax = 1e-9;
constexpr double kMlpSeconds = 60.0;
constexpr double kRlShareItems = 1.0;
constexpr double kEndToEndSeconds = 30.0;
constexpr double kImpliedHarmPp = 0.01;
}  // namespace tol

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "failed: " << what << "; ";
    pass = pass && ok;
  }
};

struct Criterion {
  int number;
  std::string name;
  double time_limit;  // seconds; 0 means unbounded
  std::function<void(Outcome&)> check;
};

std::string fmt(double v, int precision = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

// ---------------------------------------------------------------- 1

void truth_table(Outcome& out) {
  struct Cell {
    bool base, hinted;
    OutcomeKind kind;
    double score;
  };
  const Cell table[] = {{false, true, OutcomeKind::Repair, 1.0},
                        {true, true, OutcomeKind::NoOp, 0.0},
                        {true, false, OutcomeKind::Harm, -1.0},
                        {false, false, OutcomeKind::Unrepaired, -0.5}};
  const auto start = Clock::now();
  std::vector<HintOutcome> got;
  for (const auto& c : table) got.push_back(classify_outcome(c.base, c.hinted));
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  int exact = 0;
  for (std::size_t i = 0; i < 4; ++i) exact += got[i].outcome == table[i].kind && got[i].score == table[i].score;
  out.require(exact == 4, "cells");
  out.require(seconds < tol::kTruthTableSeconds, "time");
  out.detail << exact << "/4 cells exact in " << fmt(seconds * 1e3) << " ms";
}

// ---------------------------------------------------------------- 2

std::vector<EvalOutcomeRow> rows_from_counts(std::size_t bc_ok, std::size_t bc_bad, std::size_t bw_ok,
                                             std::size_t bw_bad) {
  std::vector<EvalOutcomeRow> rows;
  rows.reserve(bc_ok + bc_bad + bw_ok + bw_bad);
  auto add = [&](std::size_t n, bool base, bool final) {
    for (std::size_t i = 0; i < n; ++i) rows.push_back({"q" + std::to_string(rows.size()), ModelId("T"), Strategy::TTH, base, final});
  };
  add(bc_ok, true, true);
  add(bc_bad, true, false);
  add(bw_ok, false, true);
  add(bw_bad, false, false);
  return rows;
}

void decomposition(Outcome& out) {
  Rng rng(20260101);
  double worst = 0.0, worst_oracle = 0.0;
  int degenerate = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // Every tenth configuration empties one margin to exercise undefined rates.
    std::size_t c[4];
    for (auto& x : c) x = rng.uniform_index(200);
    if (trial % 10 == 0) {
      const std::size_t side = rng.uniform_index(2) * 2;
      c[side] = c[side + 1] = 0;
      ++degenerate;
    }
    if (c[0] + c[1] + c[2] + c[3] == 0) c[3] = 1;
    const auto rows = rows_from_counts(c[0], c[1], c[2], c[3]);
    const auto d = decompose_accuracy(rows);
    worst = std::max(worst, std::abs(d.accuracy - d.reconstructed));
    const double n = static_cast<double>(rows.size());
    worst_oracle = std::max(worst_oracle, std::abs(d.accuracy - static_cast<double>(c[0] + c[2]) / n));
  }
  out.require(worst <= tol::kIdentity, "identity");
  out.require(worst_oracle <= tol::kIdentity, "count oracle");
  out.detail << "1000 configs (" << degenerate << " with an empty margin), max |acc - identity| = " << fmt(worst)
             << ", max |acc - count oracle| = " << fmt(worst_oracle);
}

// ---------------------------------------------------------------- 3

void grpo(Outcome& out) {
  Rng rng(77);
  const double levels[] = {1.0, 0.0, -1.0, -0.5};
  double worst_mean = 0.0, worst_shift = 0.0;
  for (int g = 0; g < 1000; ++g) {
    Eigen::VectorXd r(8);
    // Half the groups draw from the reward levels (ties, constant groups), half are continuous.
    for (auto& x : r) x = g % 2 ? levels[rng.uniform_index(4)] : rng.uniform01() * 4 - 2;
    const Eigen::VectorXd a = group_advantages(r);
    const double shift = rng.uniform01() * 20 - 10;
    const Eigen::VectorXd b = group_advantages((r.array() + shift).matrix().eval());
    worst_mean = std::max(worst_mean, std::abs(a.mean()));
    worst_shift = std::max(worst_shift, (a - b).cwiseAbs().maxCoeff());
  }

  double worst_grad = 0.0;
  const double clip = 0.2, kl = 0.04, h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    ToyPolicyd policy = ToyPolicyd::uniform(5);
    for (auto& z : policy.logits) z = rng.normal();
    for (auto& z : policy.reference_logits) z = rng.normal() * 0.5;
    GroupSampled group;
    group.key = {"q", ModelId("T")};
    group.sampling_logits = policy.logits;
    for (auto& z : group.sampling_logits) z += 0.3 * rng.normal();
    group.candidates = sample_candidates(policy, 8, 1.0, rng);
    group.rewards.resize(8);
    for (auto& x : group.rewards) x = levels[rng.uniform_index(4)];
    group.rewards[0] = 1.0;
    group.rewards[1] = -1.0;
    group.advantages = group_advantages(group.rewards);

    const Eigen::VectorXd analytic = grpo_gradient(policy, group, clip, kl);
    Eigen::VectorXd numeric(5);
    for (Eigen::Index k = 0; k < 5; ++k) {
      ToyPolicyd plus = policy, minus = policy;
      plus.logits[k] += h;
      minus.logits[k] -= h;
      numeric[k] = (grpo_objective(plus, group, clip, kl) - grpo_objective(minus, group, clip, kl)) / (2 * h);
    }
    const double denom = std::max(analytic.norm() + numeric.norm(), 1e-12);
    worst_grad = std::max(worst_grad, (analytic - numeric).norm() / denom);
  }

  // Zero advantage: no update at the reference policy, nor anywhere when the KL term is off.
  double worst_zero = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    ToyPolicyd policy = ToyPolicyd::uniform(5);
    for (auto& z : policy.logits) z = rng.normal();
    GroupSampled group;
    group.candidates = sample_candidates(policy, 8, 1.0, rng);
    group.rewards = Eigen::VectorXd::Constant(8, levels[rng.uniform_index(4)]);
    group.advantages = group_advantages(group.rewards);
    group.sampling_logits = policy.logits;
    for (auto& z : group.sampling_logits) z += 0.3 * rng.normal();

    ToyPolicyd at_reference = policy;
    at_reference.reference_logits = policy.logits;
    worst_zero = std::max(worst_zero, (grpo_step(at_reference, group, 0.5, clip, kl).logits - policy.logits).norm());
    for (auto& z : policy.reference_logits) z = rng.normal();
    worst_zero = std::max(worst_zero, (grpo_step(policy, group, 0.5, clip, 0.0).logits - policy.logits).norm());
  }

  out.require(worst_mean <= tol::kAdvantageMean, "advantage mean");
  out.require(worst_shift <= tol::kTranslation, "translation invariance");
  out.require(worst_grad <= tol::kGrpoGradient, "gradient");
  out.require(worst_zero == 0.0, "zero-advantage update");
  out.detail << "max |mean A| = " << fmt(worst_mean) << ", max shift delta = " << fmt(worst_shift)
             << ", max grad rel err = " << fmt(worst_grad) << ", max zero-adv update = " << fmt(worst_zero);
}

// ---------------------------------------------------------------- 4

void hint_loop(Outcome& out) {
  const QuestionRecord record = testing::make_record("q1", 2);
  const AgentRoles roles{ModelId("P"), ModelId("E")};
  const auto hint_for = [](std::size_t round) { return make_hint({"Focus on region " + std::to_string(round) + "."}); };

  int matched = 0;
  for (HintType type : {HintType::Repair, HintType::Reinforcement}) {
    for (std::size_t first_correct : {1u, 2u, 3u, 0u}) {  // 0 = never
      std::vector<ScriptedEntry> entries = {testing::raw("E", "*", "*", R"({"verdict": "approve", "feedback": "ok"})"),
                                            testing::answer("T", "*", "*", 0)};
      for (std::size_t r = 1; r <= 3; ++r) {
        entries.push_back(testing::raw("P", "q1", "propose:round-" + std::to_string(r) + ":T", serialize(hint_for(r))));
      }
      if (first_correct) {
        entries.push_back(testing::answer("T", "q1", "hinted:round-" + std::to_string(first_correct), 2));
      }
      ScriptedClient client(entries);

      BaseProfile base;
      base.question_id = "q1";
      base.model = ModelId("T");
      TrialResponse t;
      t.parse_valid = true;
      t.answer_index = type == HintType::Repair ? 0 : 2;
      base.trials = {t, t, t};
      base.label = type == HintType::Repair ? BaseLabel::BaseIncorrect : BaseLabel::BaseCorrect;

      const auto result = optimize_hint(client, record, base, type, roles, 3);

      // Expected row of the outcome table.
      OptimizationOutcome outcome;
      std::optional<Hint> selected;
      std::size_t rounds;
      if (first_correct) {
        outcome = OptimizationOutcome::Success;
        selected = hint_for(first_correct);
        rounds = first_correct;
      } else if (type == HintType::Repair) {
        outcome = OptimizationOutcome::UnsuccessfulRepair;
        selected = hint_for(3);
        rounds = 3;
      } else {
        outcome = OptimizationOutcome::Discard;
        rounds = 3;
      }
      const bool ok = result.outcome == outcome && result.selected_hint == selected && result.rounds.size() == rounds &&
                      result.hint_type == type && !result.leak;
      matched += ok;
      out.require(ok, std::string(to_string(type)) + " r=" + std::to_string(first_correct));
    }
  }
  out.detail << matched << "/8 cases";
}

// ---------------------------------------------------------------- 5

void classification(Outcome& out) {
  // Per trial: 0 correct, 1 same-wrong, 2 other-wrong, 3 unparseable. Gold is option 0.
  const std::size_t gold = 0;
  auto trial = [](int kind) {
    TrialResponse t;
    if (kind == 3) {
      t.raw = "cannot tell";
      return t;
    }
    t.answer_index = static_cast<std::size_t>(kind);
    t.parse_valid = true;
    t.raw = option_letter(*t.answer_index);
    return t;
  };

  std::vector<BaseProfile> profiles;
  std::set<std::string> same_oracle, any_oracle;
  int labels_ok = 0;
  for (int code = 0; code < 64; ++code) {
    const int k[3] = {code % 4, code / 4 % 4, code / 16};
    BaseProfile p;
    p.question_id = "p" + std::to_string(k[0]) + std::to_string(k[1]) + std::to_string(k[2]);
    p.model = ModelId("T");
    for (int x : k) p.trials.push_back(trial(x));
    p.label = classify_trials(p.trials, gold);

    // Rule table.
    const bool all_correct = k[0] == 0 && k[1] == 0 && k[2] == 0;
    const bool all_wrong = k[0] != 0 && k[0] != 3 && k[1] != 0 && k[1] != 3 && k[2] != 0 && k[2] != 3;
    const BaseLabel expected = all_correct ? BaseLabel::BaseCorrect : all_wrong ? BaseLabel::BaseIncorrect
                                                                               : BaseLabel::Mixed;
    labels_ok += p.label == expected;
    if (all_wrong) any_oracle.insert(p.question_id);
    if (all_wrong && k[0] == k[1] && k[1] == k[2]) same_oracle.insert(p.question_id);
    profiles.push_back(std::move(p));
  }
  const auto same = incorrect_set(profiles, ModelId("T"), IncorrectRule::AllWrongSameAnswer);
  const auto any = incorrect_set(profiles, ModelId("T"), IncorrectRule::AllWrongAnyAnswer);
  out.require(labels_ok == 64, "labels");
  out.require(same == same_oracle, "same-answer set");
  out.require(any == any_oracle, "any-answer set");
  out.detail << labels_ok << "/64 labels, same-answer set " << same.size() << "/" << same_oracle.size()
             << ", any-answer set " << any.size() << "/" << any_oracle.size();
}

// ---------------------------------------------------------------- 6

double mlp_gradient_error(MlpParamsd p, const std::vector<FeatureVector>& rows, HeadKind kind,
                          const std::vector<ModelId>& targets) {
  std::vector<std::size_t> idx(rows.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto batch = make_batch<double>(rows, idx, p.shape);
  const auto labels = collect_labels(rows, idx, targets, kind);
  MlpParamsd grad;
  loss_and_gradient(p, batch, kind, labels, &grad);
  double worst = 0.0;
  const double h = 1e-5;
  visit_tensors(p, grad, [&](auto& x, const auto& g) {
    Eigen::VectorXd numeric(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double saved = x.data()[i];
      x.data()[i] = saved + h;
      const double up = loss_and_gradient<double>(p, batch, kind, labels, nullptr);
      x.data()[i] = saved - h;
      const double down = loss_and_gradient<double>(p, batch, kind, labels, nullptr);
      x.data()[i] = saved;
      numeric[i] = (up - down) / (2 * h);
    }
    const Eigen::VectorXd analytic = Eigen::Map<const Eigen::VectorXd>(g.data(), g.size());
    const double denom = analytic.norm() + numeric.norm();
    if (denom > 0) worst = std::max(worst, (analytic - numeric).norm() / denom);
  });
  return worst;
}

double pairwise_auroc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] == 1 && y[j] == 0) {
        pairs += 1;
        wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
      }
    }
  }
  return wins / pairs;
}

void mlp(Outcome& out) {
  const auto shape = testing::small_shape();
  const std::vector<ModelId> targets = {ModelId("A"), ModelId("B")};

  const auto grad_rows = testing::separable_rows(12, shape, targets, 1);
  const double binary_err =
      mlp_gradient_error(init_params<double>(shape, targets, HeadKind::Binary, 2), grad_rows, HeadKind::Binary, targets);
  auto mode_params = init_params<double>(shape, targets, HeadKind::Mode, 4);
  for (Eigen::Index c = 0; c < mode_params.class_weights.size(); ++c) {
    mode_params.class_weights[c] = 0.5 + 0.1 * static_cast<double>(c);
  }
  const double mode_err = mlp_gradient_error(mode_params, grad_rows, HeadKind::Mode, targets);

  const std::vector<ModelId> one = {ModelId("A")};
  const auto sep = testing::separable_rows(64, shape, one, 12);
  TrainConfig cfg;
  cfg.shape = shape;
  cfg.epochs = tol::kSeparableEpochs;
  cfg.batch_size = 16;
  cfg.learning_rate = 0.05;
  cfg.seed = 1;
  const auto trained = train<double>(sep, PredictorVariant::individual(ModelId("A")), cfg);
  const auto fwd = forward(trained.params, make_batch<double>(sep, shape), HeadKind::Binary, ModelId("A"));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < sep.size(); ++i) {
    correct += (fwd.probabilities(0, static_cast<Eigen::Index>(i)) >= 0.5) == sep[i].labels.at(ModelId("A")).error;
  }
  const double accuracy = static_cast<double>(correct) / static_cast<double>(sep.size());

  Rng rng(8);
  double worst_auroc = 0.0;
  std::size_t sets = 0;
  for (std::size_t n = 2; n <= 200; ++n) {
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = n % 2 ? static_cast<double>(rng.uniform_index(9)) : rng.uniform01();
      y[i] = static_cast<int>(rng.uniform_index(2));
    }
    y[0] = 0;
    y[1] = 1;
    worst_auroc = std::max(worst_auroc, std::abs(*auroc(s, y) - pairwise_auroc(s, y)));
    ++sets;
  }

  auto sm_params = init_params<double>(shape, targets, HeadKind::Mode, 6);
  double worst_softmax = 0.0;
  for (double scale : {1.0, 50.0}) {
    visit_tensors(sm_params, sm_params, [&](auto& x, const auto&) { x *= scale; });
    const auto rows = testing::separable_rows(50, shape, targets, 5);
    const auto o = forward(sm_params, make_batch<double>(rows, shape), HeadKind::Mode, ModelId("B"));
    out.require(o.probabilities.rows() == static_cast<Eigen::Index>(kFailureModeCount), "12 classes");
    for (Eigen::Index c = 0; c < o.probabilities.cols(); ++c) {
      worst_softmax = std::max(worst_softmax, std::abs(o.probabilities.col(c).sum() - 1.0));
    }
  }

  out.require(binary_err <= tol::kMlpGradient, "binary gradient");
  out.require(mode_err <= tol::kMlpGradient, "mode gradient");
  out.require(accuracy >= tol::kSeparableAccuracy, "separable accuracy");
  out.require(worst_auroc <= tol::kAuroc, "auroc");
  out.require(worst_softmax <= tol::kSoftmax, "softmax");
  out.detail << "grad rel err binary " << fmt(binary_err) << " mode " << fmt(mode_err) << ", separable acc "
             << fmt(accuracy) << " after " << tol::kSeparableEpochs << " epochs, AUROC max diff " << fmt(worst_auroc)
             << " over " << sets << " sets, softmax max dev " << fmt(worst_softmax);
}

// ---------------------------------------------------------------- 7

std::size_t median_oracle(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

void pools(Outcome& out) {
  Rng rng(4242);
  int sft_ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t models = 2 + rng.uniform_index(5);
    std::vector<OptimizationResult> results;
    std::vector<std::size_t> clean(models);
    std::map<ModelId, std::set<std::string>> originals;
    for (std::size_t m = 0; m < models; ++m) {
      const ModelId model("M" + std::to_string(m));
      clean[m] = 1 + rng.uniform_index(30);
      for (std::size_t i = 0; i < clean[m]; ++i) {
        OptimizationResult r;
        r.question_id = "q" + std::to_string(i);
        r.model = model;
        r.outcome = OptimizationOutcome::Success;
        r.selected_hint = make_hint({"h"});
        originals[model].insert(r.question_id);
        results.push_back(r);
      }
      // Ineligible noise: leaky successes and unsuccessful repairs.
      for (std::size_t i = 0, noise = rng.uniform_index(4); i < noise; ++i) {
        OptimizationResult r;
        r.question_id = "x" + std::to_string(i);
        r.model = model;
        r.selected_hint = make_hint({"h"});
        r.outcome = i % 2 ? OptimizationOutcome::UnsuccessfulRepair : OptimizationOutcome::Success;
        r.leak = i % 2 == 0;
        results.push_back(r);
      }
    }
    std::vector<OptimizationResult> shuffled = results;
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.uniform_index(i)]);

    const std::size_t target = median_oracle(clean);
    const auto pool = build_sft_pool(shuffled, static_cast<std::uint64_t>(trial));
    std::map<ModelId, std::size_t> counts;
    std::map<ModelId, std::set<std::string>> seen;
    bool ok = true;
    for (const auto& e : pool) {
      ++counts[e.model];
      seen[e.model].insert(e.question_id);
      ok = ok && originals[e.model].count(e.question_id);
    }
    for (std::size_t m = 0; m < models; ++m) {
      const ModelId model("M" + std::to_string(m));
      ok = ok && counts[model] == target;
      // Upsampled models keep every original.
      if (clean[m] <= target) ok = ok && seen[model] == originals[model];
    }
    sft_ok += ok;
  }

  int rl_ok = 0, rl_trials = 0;
  double worst_share = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<ModelId> targets = {ModelId("A"), ModelId("B"), ModelId("C")};
    std::vector<BaseProfile> profiles;
    const std::size_t questions = 20 + rng.uniform_index(80);
    std::set<std::string> eligible_correct, eligible_rest;
    for (std::size_t q = 0; q < questions; ++q) {
      const std::string id = "q" + std::to_string(q);
      const double u = rng.uniform01();
      bool complete = true, mixed = false, all_correct = true;
      for (const auto& t : targets) {
        BaseLabel label = u < 0.4                           ? BaseLabel::BaseCorrect
                          : u < 0.8                         ? BaseLabel::BaseIncorrect
                          : rng.uniform_index(3) == 0       ? BaseLabel::Mixed
                          : rng.uniform_index(2) == 0       ? BaseLabel::BaseCorrect
                                                            : BaseLabel::BaseIncorrect;
        if (q < 2) label = q == 0 ? BaseLabel::BaseCorrect : BaseLabel::BaseIncorrect;
        if (q >= 2 && u > 0.97 && t == targets[2]) {
          complete = false;
          continue;
        }
        mixed |= label == BaseLabel::Mixed;
        all_correct &= label == BaseLabel::BaseCorrect;
        BaseProfile p;
        p.question_id = id;
        p.model = t;
        p.label = label;
        profiles.push_back(p);
      }
      if (complete && !mixed) (all_correct ? eligible_correct : eligible_rest).insert(id);
    }
    const double share = trial % 4 == 0 ? 0.5 : 0.1 + 0.8 * rng.uniform01();
    const std::uint64_t seed = static_cast<std::uint64_t>(trial) * 31 + 7;
    ++rl_trials;
    const auto pool = build_rl_pool(profiles, targets, share, seed);
    const auto again = build_rl_pool(profiles, targets, share, seed);
    std::size_t n_correct = 0;
    std::set<std::string> ids;
    bool ok = again.questions.size() == pool.questions.size();
    for (std::size_t i = 0; i < pool.questions.size(); ++i) {
      const auto& q = pool.questions[i];
      ok = ok && again.questions[i].question_id == q.question_id;
      ok = ok && ids.insert(q.question_id).second;
      ok = ok && (q.all_base_correct ? eligible_correct : eligible_rest).count(q.question_id);
      n_correct += q.all_base_correct;
    }
    const double deviation = std::abs(static_cast<double>(n_correct) - share * static_cast<double>(pool.questions.size()));
    worst_share = std::max(worst_share, deviation);
    ok = ok && deviation <= tol::kRlShareItems;
    rl_ok += ok;
  }

  out.require(sft_ok == 200, "sft median");
  out.require(rl_ok == rl_trials, "rl pool");
  out.detail << "SFT " << sft_ok << "/200 equalized to median, RL " << rl_ok << "/" << rl_trials
             << " deterministic, max share deviation " << fmt(worst_share) << " items";
}

// ---------------------------------------------------------------- 8

void end_to_end(Outcome& out) {
  testing::TempDir dir;
  testing::run_mock40(dir.path());
  const auto golden = testing::mock40_dir() / "golden";
  const bool metrics_equal = read_file(dir.path() / "metrics.jsonl") == read_file(golden / "metrics.jsonl");
  const bool report_equal = read_file(dir.path() / "report.txt") == read_file(golden / "report.txt");

  std::map<std::string, std::set<std::size_t>> budgets;
  for (Strategy s : kAllStrategies) {
    for (const auto& c : read_jsonl(dir.path() / "eval" / (std::string(to_string(s)) + ".calls.jsonl"))) {
      budgets[std::string(to_string(s))].insert(c.at("calls").get<std::size_t>());
    }
  }
  const std::map<std::string, std::set<std::size_t>> expected = {
      {"base", {1}}, {"cot", {1}}, {"self_refine", {2}}, {"external_judge", {3}}, {"tth", {1}},
      {"categorical_hint", {1}}, {"universal_taxonomy_hint", {1}}};

  const auto records = load_dataset(testing::mock40_dir() / "dataset.jsonl");
  std::map<std::string, const QuestionRecord*> by_id;
  for (const auto& r : records) by_id[r.id] = &r;
  std::map<std::pair<std::string, std::string>, Hint> hints;
  for (const auto& j : read_jsonl(dir.path() / "hints.jsonl")) {
    hints.emplace(std::pair{j.at("question_id").get<std::string>(), j.at("model").get<std::string>()},
                  hint_from_json(j.at("hint")));
  }
  std::size_t hinted_ok = 0;
  for (const auto& t : read_jsonl(dir.path() / "eval" / "tth.transcript.jsonl")) {
    const auto it = hints.find({t.at("question_id").get<std::string>(), t.at("model").get<std::string>()});
    if (it == hints.end()) continue;
    hinted_ok += t.at("prompt").get<std::string>() == build_hint_prompt(*by_id.at(it->first.first), it->second);
  }

  out.require(metrics_equal, "golden metrics");
  out.require(report_equal, "golden report");
  out.require(budgets == expected, "call budgets");
  out.require(!hints.empty() && hinted_ok == hints.size(), "tth prompts");
  out.detail << "metrics.jsonl " << (metrics_equal ? "byte-identical" : "DIFFERS") << ", report.txt "
             << (report_equal ? "byte-identical" : "DIFFERS") << ", budgets b/cot/sr/ej/tth = ";
  std::string sep;
  for (const char* s : {"base", "cot", "self_refine", "external_judge", "tth"}) {
    out.detail << sep << (budgets[s].size() == 1 ? std::to_string(*budgets[s].begin()) : "?");
    sep = "/";
  }
  out.detail << ", " << hinted_ok << "/" << hints.size() << " hinted prompts match";
}

// ---------------------------------------------------------------- 9

void reference_cell(Outcome& out) {
  // Reference cell, percent, two decimals.
  const double base_ref = 78.25, acc_ref = 84.27, repair_ref = 49.40;
  // Construction: 1545 rows, 1209 base-correct (73 harmed), 336 base-wrong (166 repaired).
  const auto rows = rows_from_counts(1209 - 73, 73, 166, 336 - 166);
  const auto d = decompose_accuracy(rows);
  auto round2 = [](double pct) { return std::round(pct * 100.0) / 100.0; };
  const bool rounds_to_cell = round2(100 * d.base_accuracy) == base_ref && round2(100 * d.accuracy) == acc_ref &&
                              round2(100 * d.repair) == repair_ref;
  const double implied_pp = 100 * implied_harm(base_ref / 100, acc_ref / 100, repair_ref / 100);
  const double measured_pp = 100 * d.harm;
  const double gap = std::abs(measured_pp - implied_pp);
  out.require(rounds_to_cell, "construction rounds to the reference cell");
  out.require(gap <= tol::kImpliedHarmPp, "implied harm");
  out.detail << "N=" << rows.size() << " base " << fmt(100 * d.base_accuracy, 6) << "% acc " << fmt(100 * d.accuracy, 6)
             << "% repair " << fmt(100 * d.repair, 6) << "%; harm " << fmt(measured_pp, 6) << "% vs implied "
             << fmt(implied_pp, 6) << "% (gap " << fmt(gap, 2) << " pp); reported harm 6.02% differs from implied by "
             << fmt(std::abs(6.02 - implied_pp), 2) << " pp (informational)";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "reward truth table", 0, truth_table},
      {2, "accuracy decomposition identity", 0, decomposition},
      {3, "GRPO advantages and gradient", tol::kGrpoSeconds, grpo},
      {4, "hint optimization loop outcomes", tol::kHintLoopSeconds, hint_loop},
      {5, "base trial classification", 0, classification},
      {6, "MLP predictor", tol::kMlpSeconds, mlp},
      {7, "pool construction", 0, pools},
      {8, "end-to-end scripted run", tol::kEndToEndSeconds, end_to_end},
      {9, "reference cell implied harm", 0, reference_cell},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = Clock::now();
    try {
      c.check(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "exception: " << e.what();
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.time_limit > 0 && seconds >= c.time_limit) {
      out.pass = false;
      out.detail << "; over time limit " << c.time_limit << " s";
    }
    failures += !out.pass;
    std::printf("%s  %d  %-34s %s [%.3f s]\n", out.pass ? "PASS" : "FAIL", c.number, c.name.c_str(),
                out.detail.str().c_str(), seconds);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
