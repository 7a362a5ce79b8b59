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

#include "tth/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tth/error.hpp"

namespace tth {

namespace {

void check_single_group(std::span<const EvalOutcomeRow> rows) {
  for (const auto& r : rows) {
    if (r.model != rows.front().model || r.strategy != rows.front().strategy) {
      throw Error(ErrorCode::PreconditionViolation, "rows mix several (model, strategy) pairs");
    }
  }
}

Rate conditional(std::span<const EvalOutcomeRow> rows, bool base_correct, bool final_correct) {
  check_single_group(rows);
  Rate rate;
  for (const auto& r : rows) {
    if (r.base_correct != base_correct) continue;
    ++rate.denominator;
    if (r.final_correct == final_correct) ++rate.numerator;
  }
  if (rate.denominator > 0) {
    rate.value = static_cast<double>(rate.numerator) / static_cast<double>(rate.denominator);
  }
  return rate;
}

std::string percent(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * *v);
  return buf;
}

Json rate_json(const Rate& r) {
  return Json{{"value", r.value ? Json(*r.value) : Json(nullptr)},
              {"numerator", r.numerator},
              {"denominator", r.denominator}};
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Base: return "base";
    case Strategy::CoT: return "cot";
    case Strategy::SelfRefine: return "self_refine";
    case Strategy::ExternalJudge: return "external_judge";
    case Strategy::TTH: return "tth";
    case Strategy::CategoricalHint: return "categorical_hint";
    case Strategy::UniversalTaxonomyHint: return "universal_taxonomy_hint";
  }
  return "base";
}

Strategy strategy_from_string(std::string_view s) {
  for (Strategy st : kAllStrategies) {
    if (to_string(st) == s) return st;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown strategy '" + std::string(s) + "'");
}

double overall_accuracy(std::span<const EvalOutcomeRow> rows) {
  if (rows.empty()) throw Error(ErrorCode::Empty, "no rows");
  check_single_group(rows);
  auto correct = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.final_correct; });
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

double base_accuracy(std::span<const EvalOutcomeRow> rows) {
  if (rows.empty()) throw Error(ErrorCode::Empty, "no rows");
  auto correct = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.base_correct; });
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

Rate repair_rate(std::span<const EvalOutcomeRow> rows) { return conditional(rows, false, true); }

Rate harm_rate(std::span<const EvalOutcomeRow> rows) { return conditional(rows, true, false); }

double jaccard_overlap(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::optional<double> failure_agreement(const std::map<std::string, FailureMode>& labels_a,
                                        const std::map<std::string, FailureMode>& labels_b,
                                        const std::set<std::string>& shared) {
  if (shared.empty()) return std::nullopt;
  std::size_t equal = 0;
  for (const auto& id : shared) {
    auto a = labels_a.find(id);
    auto b = labels_b.find(id);
    if (a == labels_a.end() || b == labels_b.end()) {
      throw Error(ErrorCode::MissingLabel, "no failure-mode label for '" + id + "'");
    }
    equal += a->second == b->second;
  }
  return static_cast<double>(equal) / static_cast<double>(shared.size());
}

AccuracyDecomposition decompose_accuracy(std::span<const EvalOutcomeRow> rows) {
  AccuracyDecomposition d;
  d.accuracy = overall_accuracy(rows);
  d.base_accuracy = base_accuracy(rows);
  d.harm = harm_rate(rows).value.value_or(0.0);
  d.repair = repair_rate(rows).value.value_or(0.0);
  d.reconstructed = d.base_accuracy * (1.0 - d.harm) + (1.0 - d.base_accuracy) * d.repair;
  if (std::abs(d.reconstructed - d.accuracy) > 1e-12) {
    throw Error(ErrorCode::IdentityViolation, "accuracy does not decompose into base/harm/repair");
  }
  return d;
}

double implied_harm(double base_acc, double accuracy, double repair) {
  if (base_acc <= 0.0) throw Error(ErrorCode::PreconditionViolation, "harm is undefined without base-correct rows");
  return 1.0 - (accuracy - (1.0 - base_acc) * repair) / base_acc;
}

std::vector<MetricsSummary> summarize(std::span<const EvalOutcomeRow> rows) {
  std::map<std::pair<ModelId, int>, std::vector<EvalOutcomeRow>> groups;
  for (const auto& r : rows) groups[{r.model, static_cast<int>(r.strategy)}].push_back(r);
  std::vector<MetricsSummary> out;
  for (const auto& [key, group] : groups) {
    MetricsSummary s;
    s.model = key.first;
    s.strategy = static_cast<Strategy>(key.second);
    s.n = group.size();
    s.accuracy = overall_accuracy(group);
    s.repair = repair_rate(group);
    s.harm = harm_rate(group);
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_report_table(std::span<const MetricsSummary> summaries) {
  std::vector<Strategy> strategies;
  std::vector<ModelId> models;
  for (const auto& s : summaries) {
    if (std::find(strategies.begin(), strategies.end(), s.strategy) == strategies.end()) {
      strategies.push_back(s.strategy);
    }
    if (std::find(models.begin(), models.end(), s.model) == models.end()) models.push_back(s.model);
  }
  std::sort(strategies.begin(), strategies.end());

  auto find = [&](const ModelId& m, Strategy st) -> const MetricsSummary* {
    for (const auto& s : summaries) {
      if (s.model == m && s.strategy == st) return &s;
    }
    return nullptr;
  };

  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header = {"Target Model"};
  for (const char* block : {"Acc", "Repair", "Harm"}) {
    for (Strategy st : strategies) header.push_back(std::string(block) + ":" + std::string(to_string(st)));
  }
  table.push_back(header);
  for (const auto& m : models) {
    std::vector<std::string> row = {m.name()};
    for (int block = 0; block < 3; ++block) {
      for (Strategy st : strategies) {
        const auto* s = find(m, st);
        if (!s) {
          row.push_back("-");
        } else if (block == 0) {
          row.push_back(percent(s->accuracy));
        } else {
          const Rate& r = block == 1 ? s->repair : s->harm;
          row.push_back(percent(r.value) + " (" + std::to_string(r.denominator) + ")");
        }
      }
    }
    table.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t c = 0; c < table[r].size(); ++c) {
      const auto& cell = table[r][c];
      if (c == 0) {
        out << cell << std::string(width[c] - cell.size(), ' ');
      } else {
        out << "  " << std::string(width[c] - cell.size(), ' ') << cell;
      }
    }
    out << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c == 0 ? 0 : 2);
      out << std::string(total, '-') << '\n';
    }
  }
  return out.str();
}

Json to_json(const EvalOutcomeRow& row) {
  return Json{{"question_id", row.question_id},
              {"model", row.model.name()},
              {"strategy", std::string(to_string(row.strategy))},
              {"base_correct", row.base_correct},
              {"final_correct", row.final_correct}};
}

EvalOutcomeRow eval_row_from_json(const Json& j) {
  EvalOutcomeRow r;
  r.question_id = j.at("question_id").get<std::string>();
  r.model = ModelId(j.at("model").get<std::string>());
  r.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  r.base_correct = j.at("base_correct").get<bool>();
  r.final_correct = j.at("final_correct").get<bool>();
  return r;
}

Json to_json(const MetricsSummary& s) {
  return Json{{"model", s.model.name()},
              {"strategy", std::string(to_string(s.strategy))},
              {"n", s.n},
              {"accuracy", s.accuracy},
              {"repair", rate_json(s.repair)},
              {"harm", rate_json(s.harm)}};
}

}  // namespace tth
