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

#include "tth/pipeline/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "tth/agentic/agentic.hpp"
#include "tth/annotator/annotator.hpp"
#include "tth/client/http.hpp"
#include "tth/client/mcq.hpp"
#include "tth/client/scripted.hpp"
#include "tth/core/dataset.hpp"
#include "tth/core/encoding.hpp"
#include "tth/core/parallel.hpp"
#include "tth/core/random.hpp"
#include "tth/error.hpp"
#include "tth/metrics/metrics.hpp"
#include "tth/predictor/evaluate.hpp"
#include "tth/predictor/mlp.hpp"
#include "tth/reward/grpo.hpp"
#include "tth/reward/pools.hpp"
#include "tth/sampler/sampler.hpp"

namespace tth {

namespace {

using ProfileKey = std::pair<std::string, ModelId>;

std::shared_ptr<ClientHub> make_hub(const RunConfig& cfg, const RunOptions& opts) {
  auto cache = cfg.cache_dir ? std::make_shared<ResponseCache>(*cfg.cache_dir) : std::make_shared<ResponseCache>();
  auto hub = std::make_shared<ClientHub>(cache, RetryPolicy{}, cfg.parallelism);
  if (opts.mock) {
    auto scripted = std::make_shared<ScriptedClient>(load_script(*opts.mock));
    for (const auto& model : scripted->models()) hub->register_model(model, scripted);
    return hub;
  }
  for (const auto& endpoint : cfg.endpoints) {
    auto client = std::make_shared<HttpChatClient>(endpoint);
    for (const auto& [model, api] : endpoint.model_names) hub->register_model(model, client);
  }
  return hub;
}

std::map<ProfileKey, BaseProfile> load_profiles(const std::filesystem::path& p) {
  std::map<ProfileKey, BaseProfile> out;
  for (const auto& j : read_jsonl(p)) {
    auto profile = base_profile_from_json(j);
    ProfileKey key{profile.question_id, profile.model};
    out.emplace(std::move(key), std::move(profile));
  }
  return out;
}

std::vector<BaseProfile> profile_list(const std::map<ProfileKey, BaseProfile>& m) {
  std::vector<BaseProfile> out;
  out.reserve(m.size());
  for (const auto& [k, v] : m) out.push_back(v);
  return out;
}

std::map<ProfileKey, Hint> load_hints(const std::filesystem::path& p) {
  std::map<ProfileKey, Hint> out;
  for (const auto& j : read_jsonl(p)) {
    out.emplace(ProfileKey{j.at("question_id").get<std::string>(), ModelId(j.at("model").get<std::string>())},
                hint_from_json(j.at("hint")));
  }
  return out;
}

std::map<ProfileKey, FailureAnnotation> load_annotations(const std::filesystem::path& p) {
  std::map<ProfileKey, FailureAnnotation> out;
  for (const auto& j : read_jsonl(p)) {
    auto a = failure_annotation_from_json(j);
    ProfileKey key{a.question_id, a.model};
    out.emplace(std::move(key), std::move(a));
  }
  return out;
}

template <typename T>
std::string jsonl_of(const std::vector<T>& items) {
  std::vector<Json> rows;
  rows.reserve(items.size());
  for (const auto& item : items) rows.push_back(to_json(item));
  return to_jsonl(rows);
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::SampleBase: return "sample-base";
    case Command::OptimizeHints: return "optimize-hints";
    case Command::BuildPools: return "build-pools";
    case Command::ScoreRewards: return "score-rewards";
    case Command::GrpoToy: return "grpo-toy";
    case Command::Annotate: return "annotate";
    case Command::TrainPredictor: return "train-predictor";
    case Command::Evaluate: return "evaluate";
    case Command::AnalyzeOverlap: return "analyze-overlap";
    case Command::Report: return "report";
  }
  return "report";
}

Command command_from_string(std::string_view s) {
  for (Command c : kAllCommands) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown command '" + std::string(s) + "'");
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::Unconfigured: return 2;
    case ErrorCode::MissingUpstream: return 3;
    case ErrorCode::Transport: return 4;
    default: return 1;
  }
}

Pipeline::Pipeline(RunConfig config, RunOptions options)
    : Pipeline(config, options, make_hub(config, options)) {}

Pipeline::Pipeline(RunConfig config, RunOptions options, std::shared_ptr<ClientHub> hub)
    : config_(std::move(config)),
      options_(std::move(options)),
      hub_(std::move(hub)),
      prompts_(config_.prompts_dir ? PromptSet::load(*config_.prompts_dir) : PromptSet::builtin()) {
  validate(config_);
  if (options_.out_dir.empty()) throw Error(ErrorCode::InvalidConfig, "no output directory");
  std::filesystem::create_directories(options_.out_dir);
}

std::filesystem::path Pipeline::require(std::string_view name) {
  auto p = path(name);
  if (!std::filesystem::exists(p)) {
    throw Error(ErrorCode::MissingUpstream, "required artifact " + p.string() + " is absent");
  }
  inputs_.push_back(p);
  return p;
}

void Pipeline::write(std::string_view name, const std::string& content) {
  auto p = path(name);
  std::filesystem::create_directories(p.parent_path());
  atomic_write(p, content);
  outputs_.push_back(p);
}

const std::vector<QuestionRecord>& Pipeline::dataset() {
  if (!dataset_) {
    if (!config_.dataset) throw Error(ErrorCode::InvalidConfig, "no dataset configured");
    if (!std::filesystem::exists(*config_.dataset)) {
      throw Error(ErrorCode::MissingUpstream, "dataset " + config_.dataset->string() + " is absent");
    }
    dataset_ = load_dataset(*config_.dataset);
    inputs_.push_back(*config_.dataset);
  }
  return *dataset_;
}

void Pipeline::run(Command command) {
  inputs_.clear();
  outputs_.clear();
  switch (command) {
    case Command::SampleBase: sample_base(); break;
    case Command::OptimizeHints: optimize_hints(); break;
    case Command::BuildPools: build_pools(); break;
    case Command::ScoreRewards: score_rewards(); break;
    case Command::GrpoToy: grpo_toy(); break;
    case Command::Annotate: annotate_failures(); break;
    case Command::TrainPredictor: train_predictor(); break;
    case Command::Evaluate: evaluate(); break;
    case Command::AnalyzeOverlap: analyze_overlap(); break;
    case Command::Report: report(); break;
  }
  record_manifest(command);
}

void Pipeline::record_manifest(Command command) {
  auto digests = [&](const std::vector<std::filesystem::path>& paths) {
    Json out = Json::object();
    for (const auto& p : paths) {
      // Artifacts are keyed relative to the run directory, external inputs by absolute path.
      auto key = std::filesystem::proximate(p, options_.out_dir).generic_string();
      if (key.starts_with("..")) key = std::filesystem::weakly_canonical(p).generic_string();
      out[key] = sha256_hex(read_file(p));
    }
    return out;
  };
  const auto manifest_path = path(artifacts::kManifest);
  Json manifest = std::filesystem::exists(manifest_path) ? Json::parse(read_file(manifest_path)) : Json::object();
  manifest["config_digest"] = sha256_hex(to_json(config_).dump());
  manifest["prompt_version"] = prompts_.version();
  manifest["commands"][std::string(to_string(command))] = Json{{"inputs", digests(inputs_)}, {"outputs", digests(outputs_)}};
  atomic_write(manifest_path, manifest.dump(2) + "\n");
}

void Pipeline::sample_base() {
  const auto& records = dataset();
  const auto& targets = config_.targets;
  if (targets.empty()) throw Error(ErrorCode::InvalidConfig, "no targets configured");
  auto profiles = parallel_map(records.size() * targets.size(), config_.parallelism, [&](std::size_t i) {
    return tth::sample_base(*hub_, records[i / targets.size()], targets[i % targets.size()], config_.trials, prompts_);
  });
  write(artifacts::kBaseProfiles, jsonl_of(profiles));
}

void Pipeline::optimize_hints() {
  const auto& records = dataset();
  const auto profiles = load_profiles(require(artifacts::kBaseProfiles));
  struct Job {
    const QuestionRecord* record;
    const BaseProfile* base;
  };
  std::vector<Job> jobs;
  for (const auto& record : records) {
    for (const auto& target : config_.targets) {
      auto it = profiles.find({record.id, target});
      if (it == profiles.end()) {
        throw Error(ErrorCode::MissingUpstream, "no base profile for '" + record.id + "' on '" + target.name() + "'");
      }
      if (it->second.label != BaseLabel::Mixed) jobs.push_back({&record, &it->second});
    }
  }
  const AgentRoles roles{config_.proposer, config_.editor};
  auto results = parallel_map(jobs.size(), config_.parallelism, [&](std::size_t i) {
    const auto& job = jobs[i];
    return optimize_hint(*hub_, *job.record, *job.base, hint_type_for(job.base->label), roles, config_.r_max, prompts_);
  });
  std::vector<Json> hints;
  for (const auto& r : results) {
    if (!r.selected_hint || r.leak) continue;
    hints.push_back(Json{{"question_id", r.question_id},
                         {"model", r.model.name()},
                         {"outcome", std::string(to_string(r.outcome))},
                         {"hint", to_json(*r.selected_hint)}});
  }
  write(artifacts::kOptimization, jsonl_of(results));
  write(artifacts::kHints, to_jsonl(hints));
}

void Pipeline::build_pools() {
  std::vector<OptimizationResult> results;
  for (const auto& j : read_jsonl(require(artifacts::kOptimization))) results.push_back(optimization_result_from_json(j));
  const auto profiles = profile_list(load_profiles(require(artifacts::kBaseProfiles)));
  const auto sft = build_sft_pool(results, config_.seed);
  const auto rl = build_rl_pool(profiles, config_.targets, config_.base_correct_share, config_.seed);
  write(artifacts::kSftPool, jsonl_of(sft));
  write(artifacts::kRlPool, jsonl_of(rl.questions));
}

namespace {

/// Scores template hints against every target through verifier calls.
class TemplateScorer {
 public:
  TemplateScorer(ChatClient& client, const std::vector<QuestionRecord>& records,
                 const std::map<ProfileKey, BaseProfile>& profiles, const RunConfig& cfg, const PromptSet& prompts)
      : client_(client), profiles_(profiles), cfg_(cfg), prompts_(prompts) {
    for (const auto& r : records) records_.emplace(r.id, &r);
  }

  double score(const std::string& question_id, std::size_t template_index) {
    const auto& record = *records_.at(question_id);
    const Hint hint = make_hint({cfg_.grpo.templates.at(template_index)});
    std::vector<HintOutcome> outcomes;
    for (const auto& target : cfg_.targets) {
      auto it = profiles_.find({question_id, target});
      if (it == profiles_.end()) {
        throw Error(ErrorCode::MissingUpstream, "no base profile for '" + question_id + "' on '" + target.name() + "'");
      }
      const std::string tag = "reward:template-" + std::to_string(template_index + 1);
      ChatRequest req;
      req.model = target;
      if (!record.image_ref.empty()) req.image_ref = record.image_ref;
      req.prompt = build_hint_prompt(record, hint, prompts_);
      req.seed_tag = tag;
      req.tag = {question_id, "hinted:" + tag};
      const bool hinted = parse_mcq(client_.complete(req), record.options.size()).is_correct(record.gold_index);
      outcomes.push_back(classify_outcome(it->second.label == BaseLabel::BaseCorrect, hinted, cfg_.reward, target));
    }
    return average_reward(outcomes, cfg_.targets);
  }

  const QuestionRecord& record(const std::string& id) const { return *records_.at(id); }

 private:
  ChatClient& client_;
  const std::map<ProfileKey, BaseProfile>& profiles_;
  const RunConfig& cfg_;
  const PromptSet& prompts_;
  std::map<std::string, const QuestionRecord*> records_;
};

std::vector<GroupSampled> sample_groups(const ToyPolicyd& policy, const std::vector<PromptKey>& keys,
                                        TemplateScorer& scorer, const RunConfig& cfg, Rng& rng) {
  std::vector<std::vector<std::size_t>> candidates;
  candidates.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    candidates.push_back(sample_candidates(policy, cfg.grpo.group_size, cfg.grpo.temperature, rng));
  }
  return parallel_map(keys.size(), cfg.parallelism, [&](std::size_t i) {
    GroupSampled g;
    g.key = keys[i];
    g.candidates = candidates[i];
    g.rewards.resize(static_cast<Eigen::Index>(g.candidates.size()));
    for (std::size_t c = 0; c < g.candidates.size(); ++c) {
      g.rewards[static_cast<Eigen::Index>(c)] = scorer.score(keys[i].question_id, g.candidates[c]);
    }
    g.advantages = group_advantages(g.rewards);
    g.sampling_logits = policy.logits;
    return g;
  });
}

Json group_json(const GroupSampled& g) {
  return Json{{"question_id", g.key.question_id},
              {"model", g.key.model.name()},
              {"candidates", g.candidates},
              {"rewards", vector_json(g.rewards)},
              {"advantages", vector_json(g.advantages)},
              {"sampling_logits", vector_json(g.sampling_logits)}};
}

std::vector<PromptKey> rl_keys(const std::filesystem::path& p, const std::vector<ModelId>& targets) {
  RlPool pool;
  for (const auto& j : read_jsonl(p)) pool.questions.push_back(rl_question_from_json(j));
  if (pool.questions.empty()) throw Error(ErrorCode::EmptyPool, "RL pool is empty");
  return pool.keys(targets);
}

}  // namespace

void Pipeline::score_rewards() {
  const auto keys = rl_keys(require(artifacts::kRlPool), config_.targets);
  const auto profiles = load_profiles(require(artifacts::kBaseProfiles));
  TemplateScorer scorer(*hub_, dataset(), profiles, config_, prompts_);
  const auto policy = ToyPolicyd::uniform(config_.grpo.templates.size());
  Rng rng(config_.seed);
  std::vector<Json> rows;
  for (const auto& g : sample_groups(policy, keys, scorer, config_, rng)) rows.push_back(group_json(g));
  write(artifacts::kRewardGroups, to_jsonl(rows));
}

void Pipeline::grpo_toy() {
  const auto keys = rl_keys(require(artifacts::kRlPool), config_.targets);
  const auto profiles = load_profiles(require(artifacts::kBaseProfiles));
  TemplateScorer scorer(*hub_, dataset(), profiles, config_, prompts_);
  auto policy = ToyPolicyd::uniform(config_.grpo.templates.size());
  Rng rng(config_.seed);
  std::vector<Json> trace;
  for (std::size_t step = 0; step < config_.grpo.steps; ++step) {
    // One inner epoch: groups sampled from the step's snapshot, then applied
    // in order, so later groups see ratios away from 1.
    const auto groups = sample_groups(policy, keys, scorer, config_, rng);
    double mean_reward = 0.0;
    for (const auto& g : groups) {
      mean_reward += g.rewards.mean();
      policy = grpo_step(policy, g, config_.grpo.learning_rate, config_.grpo.clip, config_.grpo.kl);
    }
    mean_reward /= static_cast<double>(groups.size());
    trace.push_back(Json{{"step", step + 1},
                         {"mean_reward", mean_reward},
                         {"kl", kl_divergence(policy.logits, policy.reference_logits)},
                         {"probabilities", vector_json(policy.probabilities())}});
  }
  write(artifacts::kGrpoTrace, to_jsonl(trace));
  write(artifacts::kPolicy,
        Json{{"templates", config_.grpo.templates}, {"logits", vector_json(policy.logits)}}.dump(2) + "\n");
}

void Pipeline::annotate_failures() {
  const auto& records = dataset();
  const auto profiles = load_profiles(require(artifacts::kBaseProfiles));
  std::vector<std::pair<const QuestionRecord*, const BaseProfile*>> jobs;
  for (const auto& record : records) {
    for (const auto& target : config_.targets) {
      auto it = profiles.find({record.id, target});
      if (it != profiles.end() && it->second.label == BaseLabel::BaseIncorrect) jobs.emplace_back(&record, &it->second);
    }
  }
  auto annotations = parallel_map(jobs.size(), config_.parallelism, [&](std::size_t i) {
    return annotate(*hub_, *jobs[i].first, *jobs[i].second, config_.annotator, prompts_);
  });
  write(artifacts::kAnnotations, jsonl_of(annotations));
}

void Pipeline::train_predictor() {
  const auto& pc = config_.predictor;
  if (!pc.features) throw Error(ErrorCode::InvalidConfig, "[predictor] features is not set");
  if (!std::filesystem::exists(*pc.features)) {
    throw Error(ErrorCode::MissingUpstream, "feature file " + pc.features->string() + " is absent");
  }
  inputs_.push_back(*pc.features);
  const auto train_file = read_features(*pc.features);
  TrainConfig tc = pc.train;
  tc.shape.hidden_dim = train_file.hidden_dim;
  tc.shape.scalar_dim = train_file.scalar_dim;
  const auto result = train<double>(train_file.rows, pc.variant, tc);

  FeatureFile test_file;
  if (pc.test_features) {
    if (!std::filesystem::exists(*pc.test_features)) {
      throw Error(ErrorCode::MissingUpstream, "feature file " + pc.test_features->string() + " is absent");
    }
    inputs_.push_back(*pc.test_features);
    test_file = read_features(*pc.test_features);
  }
  const auto& test_rows = pc.test_features ? test_file.rows : train_file.rows;

  std::vector<Json> report;
  for (const auto& target : result.targets) {
    Json row{{"target", target.name()}, {"split", pc.test_features ? "test" : "train"}};
    if (pc.task == HeadKind::Binary) {
      row["task"] = "binary";
      row["metrics"] = to_json(evaluate_binary(result.params, test_rows, target));
      row["threshold_rule"] = "max_f1";
    } else {
      row["task"] = "mode";
      row["metrics"] = to_json(evaluate_mode(result.params, test_rows, target));
    }
    report.push_back(std::move(row));
  }
  std::vector<Json> trace;
  for (std::size_t e = 0; e < result.loss_trace.size(); ++e) trace.push_back(Json{{"epoch", e}, {"loss", result.loss_trace[e]}});
  write(artifacts::kPredictorParams, to_json(result.params).dump() + "\n");
  write(artifacts::kLossTrace, to_jsonl(trace));
  write(artifacts::kPredictorReport, to_jsonl(report));
}

void Pipeline::evaluate() {
  const auto& records = dataset();
  const auto profiles = load_profiles(require(artifacts::kBaseProfiles));
  std::vector<Strategy> strategies = options_.strategy ? std::vector<Strategy>{*options_.strategy} : config_.strategies;
  std::map<ProfileKey, Hint> hints;
  std::map<ProfileKey, FailureAnnotation> annotations;
  const bool needs_hints = std::count(strategies.begin(), strategies.end(), Strategy::TTH) > 0;
  const bool needs_annotations = std::count(strategies.begin(), strategies.end(), Strategy::CategoricalHint) > 0;
  const auto hint_path = needs_hints ? require(artifacts::kHints) : std::filesystem::path{};
  if (needs_hints) hints = load_hints(hint_path);
  if (needs_annotations) annotations = load_annotations(require(artifacts::kAnnotations));

  const auto& targets = config_.targets;
  for (Strategy s : strategies) {
    if (s == Strategy::ExternalJudge) {
      for (const auto& t : targets) {
        if (!config_.judges.count(t)) throw Error(ErrorCode::InvalidConfig, "no judge configured for '" + t.name() + "'");
      }
    }
    auto runs = parallel_map(records.size() * targets.size(), config_.parallelism, [&](std::size_t i) {
      const auto& record = records[i / targets.size()];
      const auto& target = targets[i % targets.size()];
      const ProfileKey key{record.id, target};
      StrategySpec spec{s, std::nullopt, std::nullopt};
      if (s == Strategy::ExternalJudge) spec.judge_model = config_.judges.at(target);
      if (s == Strategy::TTH) spec.hint_source = hint_path;
      StrategyInputs in;
      if (auto it = profiles.find(key); it != profiles.end()) in.base = &it->second;
      if (auto it = hints.find(key); it != hints.end()) in.hint = &it->second;
      if (auto it = annotations.find(key); it != annotations.end()) in.annotation = &it->second;
      auto run = run_strategy(*hub_, record, target, spec, in, prompts_);
      if (run.requests.size() != call_budget(s)) {
        throw Error(ErrorCode::PreconditionViolation, "strategy exceeded its call budget");
      }
      return run;
    });
    std::vector<Json> rows, calls, transcript;
    for (const auto& run : runs) {
      rows.push_back(to_json(run.row));
      calls.push_back(Json{{"question_id", run.row.question_id},
                           {"model", run.row.model.name()},
                           {"strategy", std::string(to_string(s))},
                           {"calls", run.requests.size()}});
      for (const auto& req : run.requests) {
        transcript.push_back(Json{{"question_id", req.tag.question_id},
                                  {"model", req.model.name()},
                                  {"behavior", req.tag.behavior},
                                  {"seed_tag", req.seed_tag},
                                  {"prompt", req.prompt}});
      }
    }
    const std::string base = std::string(artifacts::kEvalDir) + "/" + std::string(to_string(s));
    write(base + ".jsonl", to_jsonl(rows));
    write(base + ".calls.jsonl", to_jsonl(calls));
    write(base + ".transcript.jsonl", to_jsonl(transcript));
  }
}

void Pipeline::analyze_overlap() {
  const auto profiles = profile_list(load_profiles(require(artifacts::kBaseProfiles)));
  std::map<ProfileKey, FailureAnnotation> annotations;
  const bool have_annotations = std::filesystem::exists(path(artifacts::kAnnotations));
  if (have_annotations) annotations = load_annotations(require(artifacts::kAnnotations));

  const auto& targets = config_.targets;
  std::vector<std::set<std::string>> wrong;
  for (const auto& t : targets) wrong.push_back(incorrect_set(profiles, t, IncorrectRule::AllWrongSameAnswer));

  std::vector<Json> rows;
  std::vector<std::vector<std::string>> cells(targets.size(), std::vector<std::string>(targets.size()));
  for (std::size_t a = 0; a < targets.size(); ++a) {
    for (std::size_t b = 0; b < targets.size(); ++b) {
      const double jac = jaccard_overlap(wrong[a], wrong[b]);
      cells[a][b] = fixed(jac, 3);
      if (b <= a) continue;
      std::set<std::string> shared;
      std::set_intersection(wrong[a].begin(), wrong[a].end(), wrong[b].begin(), wrong[b].end(),
                            std::inserter(shared, shared.begin()));
      Json row{{"model_a", targets[a].name()},
               {"model_b", targets[b].name()},
               {"jaccard", jac},
               {"incorrect_a", wrong[a].size()},
               {"incorrect_b", wrong[b].size()},
               {"shared", shared.size()},
               {"agreement", nullptr}};
      if (have_annotations) {
        std::map<std::string, FailureMode> la, lb;
        for (const auto& id : shared) {
          if (auto it = annotations.find({id, targets[a]}); it != annotations.end()) la.emplace(id, it->second.mode);
          if (auto it = annotations.find({id, targets[b]}); it != annotations.end()) lb.emplace(id, it->second.mode);
        }
        if (auto agree = failure_agreement(la, lb, shared)) row["agreement"] = *agree;
      }
      rows.push_back(std::move(row));
    }
  }

  std::size_t width = 0;
  for (const auto& t : targets) width = std::max(width, t.name().size());
  std::ostringstream table;
  table << std::string(width, ' ');
  for (const auto& t : targets) table << "  " << std::string(width > t.name().size() ? width - t.name().size() : 0, ' ') << t.name();
  table << '\n';
  for (std::size_t a = 0; a < targets.size(); ++a) {
    table << targets[a].name() << std::string(width - targets[a].name().size(), ' ');
    for (std::size_t b = 0; b < targets.size(); ++b) table << "  " << std::string(width - cells[a][b].size(), ' ') << cells[a][b];
    table << '\n';
  }
  write(artifacts::kOverlap, to_jsonl(rows));
  write(artifacts::kOverlapTable, table.str());
}

void Pipeline::report() {
  std::vector<EvalOutcomeRow> rows;
  bool any = false;
  for (Strategy s : kAllStrategies) {
    const std::string name = std::string(artifacts::kEvalDir) + "/" + std::string(to_string(s)) + ".jsonl";
    if (!std::filesystem::exists(path(name))) continue;
    any = true;
    for (const auto& j : read_jsonl(require(name))) rows.push_back(eval_row_from_json(j));
  }
  if (!any) throw Error(ErrorCode::MissingUpstream, "no evaluation rows under " + path(artifacts::kEvalDir).string());
  const auto summaries = summarize(rows);
  std::vector<Json> metrics;
  for (const auto& s : summaries) metrics.push_back(to_json(s));
  write(artifacts::kMetrics, to_jsonl(metrics));
  write(artifacts::kReport, format_report_table(summaries));
}

}  // namespace tth
