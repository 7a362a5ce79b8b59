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
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tth/core/json.hpp"
#include "tth/core/types.hpp"

namespace tth {

enum class Strategy { Base, CoT, SelfRefine, ExternalJudge, TTH, CategoricalHint, UniversalTaxonomyHint };

inline constexpr Strategy kAllStrategies[] = {Strategy::Base,          Strategy::CoT,
                                              Strategy::SelfRefine,    Strategy::ExternalJudge,
                                              Strategy::TTH,           Strategy::CategoricalHint,
                                              Strategy::UniversalTaxonomyHint};

std::string_view to_string(Strategy s);
Strategy strategy_from_string(std::string_view s);

struct EvalOutcomeRow {
  std::string question_id;
  ModelId model;
  Strategy strategy = Strategy::Base;
  bool base_correct = false;
  bool final_correct = false;
};

/// A conditional rate with its denominator; `value` is absent when the
/// conditioning set is empty.
struct Rate {
  std::optional<double> value;
  std::size_t numerator = 0;
  std::size_t denominator = 0;
};

/// Throws Empty on no rows; rows must share one (model, strategy).
double overall_accuracy(std::span<const EvalOutcomeRow> rows);
/// P[final correct | base wrong].
Rate repair_rate(std::span<const EvalOutcomeRow> rows);
/// P[final wrong | base correct].
Rate harm_rate(std::span<const EvalOutcomeRow> rows);
double base_accuracy(std::span<const EvalOutcomeRow> rows);

double jaccard_overlap(const std::set<std::string>& a, const std::set<std::string>& b);

/// Fraction of `shared` ids whose labels agree; absent for an empty set.
std::optional<double> failure_agreement(const std::map<std::string, FailureMode>& labels_a,
                                        const std::map<std::string, FailureMode>& labels_b,
                                        const std::set<std::string>& shared);

struct AccuracyDecomposition {
  double accuracy = 0.0;
  double base_accuracy = 0.0;
  double harm = 0.0;    // 0 when undefined (its weight base_accuracy is then 0)
  double repair = 0.0;  // 0 when undefined (its weight 1 - base_accuracy is then 0)
  double reconstructed = 0.0;
};

/// accuracy = base_acc * (1 - harm) + (1 - base_acc) * repair; throws
/// IdentityViolation if the two sides differ by more than 1e-12.
AccuracyDecomposition decompose_accuracy(std::span<const EvalOutcomeRow> rows);

/// Harm rate implied by the identity for reported (base, accuracy, repair).
double implied_harm(double base_accuracy, double accuracy, double repair);

struct MetricsSummary {
  ModelId model;
  Strategy strategy = Strategy::Base;
  std::size_t n = 0;
  double accuracy = 0.0;
  Rate repair;
  Rate harm;
};

/// One summary per (model, strategy), ordered by model then strategy.
std::vector<MetricsSummary> summarize(std::span<const EvalOutcomeRow> rows);

/// Aligned text table: one row per model, accuracy / repair / harm columns
/// per strategy (percent, two decimals; "n/a" for absent rates).
std::string format_report_table(std::span<const MetricsSummary> summaries);

Json to_json(const EvalOutcomeRow& row);
EvalOutcomeRow eval_row_from_json(const Json& j);
Json to_json(const MetricsSummary& s);

}  // namespace tth
