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

#include <algorithm>
#include <cstring>
#include <numeric>
#include <set>

#include "tth/core/encoding.hpp"
#include "tth/predictor/evaluate.hpp"
#include "tth/predictor/mlp.hpp"

namespace tth {

std::vector<TargetColumns> collect_labels(std::span<const FeatureVector> rows, std::span<const std::size_t> index,
                                          std::span<const ModelId> targets, HeadKind kind) {
  std::vector<TargetColumns> out;
  out.reserve(targets.size());
  for (const auto& t : targets) {
    TargetColumns tc{t, {}, {}};
    for (std::size_t c = 0; c < index.size(); ++c) {
      const auto& fv = rows[index[c]];
      auto it = fv.labels.find(t);
      if (it == fv.labels.end()) {
        throw Error(ErrorCode::MissingLabels, "'" + fv.question_id + "' has no label for '" + t.name() + "'");
      }
      if (kind == HeadKind::Mode && !it->second.mode) {
        throw Error(ErrorCode::MissingLabels, "'" + fv.question_id + "' has no failure mode for '" + t.name() + "'");
      }
      tc.columns.push_back(static_cast<Eigen::Index>(c));
      tc.classes.push_back(kind == HeadKind::Binary ? (it->second.error ? 1u : 0u) : index_of(*it->second.mode));
    }
    out.push_back(std::move(tc));
  }
  return out;
}

std::vector<double> inverse_frequency_weights(std::span<const std::size_t> counts) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  std::vector<double> w(counts.size(), 0.0);
  std::size_t present = 0;
  double sum = 0.0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) continue;
    w[c] = static_cast<double>(total) / static_cast<double>(counts[c]);
    sum += w[c];
    ++present;
  }
  if (present == 0) throw Error(ErrorCode::EmptyDataset, "no class counts");
  for (auto& x : w) x *= static_cast<double>(present) / sum;
  return w;
}

std::vector<ModelId> variant_targets(std::span<const FeatureVector> rows, const PredictorVariant& variant) {
  if (variant.kind == PredictorVariant::Kind::Individual) {
    if (!variant.target) throw Error(ErrorCode::InvalidConfig, "individual predictor needs a target");
    return {*variant.target};
  }
  std::set<ModelId> targets;
  for (const auto& fv : rows) {
    for (const auto& [t, label] : fv.labels) targets.insert(t);
  }
  if (targets.empty()) throw Error(ErrorCode::MissingLabels, "training rows carry no labels");
  return {targets.begin(), targets.end()};
}

namespace {

template <typename Derived>
Json tensor_json(const Eigen::MatrixBase<Derived>& m) {
  std::string bytes(static_cast<std::size_t>(m.size()) * sizeof(double), '\0');
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r, ++k) {
      const double v = m(r, c);
      std::memcpy(bytes.data() + static_cast<std::size_t>(k) * sizeof(double), &v, sizeof(double));
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"f64", base64_encode(bytes)}};
}

Eigen::MatrixXd tensor_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const std::string bytes = base64_decode(j.at("f64").get<std::string>());
  if (rows < 0 || cols < 0 || bytes.size() != static_cast<std::size_t>(rows * cols) * sizeof(double)) {
    throw Error(ErrorCode::MalformedWire, "tensor payload does not match its shape");
  }
  Eigen::MatrixXd m(rows, cols);
  std::memcpy(m.data(), bytes.data(), bytes.size());
  return m;
}

Json dense_json(const Dense<double>& d) { return Json{{"W", tensor_json(d.W)}, {"b", tensor_json(d.b)}}; }

Dense<double> dense_from_json(const Json& j) {
  Dense<double> d;
  d.W = tensor_from_json(j.at("W"));
  Eigen::MatrixXd b = tensor_from_json(j.at("b"));
  if (b.cols() != 1) throw Error(ErrorCode::MalformedWire, "bias is not a column");
  d.b = b.col(0);
  return d;
}

Json heads_json(const std::map<ModelId, Head<double>>& heads) {
  Json out = Json::object();
  for (const auto& [t, h] : heads) out[t.name()] = Json{{"hidden", dense_json(h.hidden)}, {"out", dense_json(h.out)}};
  return out;
}

std::map<ModelId, Head<double>> heads_from_json(const Json& j) {
  std::map<ModelId, Head<double>> out;
  for (const auto& [name, h] : j.items()) {
    out.emplace(ModelId(name), Head<double>{dense_from_json(h.at("hidden")), dense_from_json(h.at("out"))});
  }
  return out;
}

}  // namespace

Json to_json(const MlpParamsd& p) {
  const auto& s = p.shape;
  return Json{{"shape",
               {{"hidden_dim", s.hidden_dim},
                {"hidden_width", s.hidden_width},
                {"hidden_embed", s.hidden_embed},
                {"scalar_dim", s.scalar_dim},
                {"scalar_embed", s.scalar_embed},
                {"head_width", s.head_width},
                {"mode_count", s.mode_count}}},
              {"encoder",
               {{"hidden1", dense_json(p.encoder.hidden1)},
                {"hidden2", dense_json(p.encoder.hidden2)},
                {"scalar", dense_json(p.encoder.scalar)}}},
              {"binary_heads", heads_json(p.binary_heads)},
              {"mode_heads", heads_json(p.mode_heads)},
              {"class_weights", tensor_json(p.class_weights)}};
}

MlpParamsd mlp_params_from_json(const Json& j) {
  MlpParamsd p;
  try {
    const auto& s = j.at("shape");
    p.shape.hidden_dim = s.at("hidden_dim").get<std::size_t>();
    p.shape.hidden_width = s.at("hidden_width").get<std::size_t>();
    p.shape.hidden_embed = s.at("hidden_embed").get<std::size_t>();
    p.shape.scalar_dim = s.at("scalar_dim").get<std::size_t>();
    p.shape.scalar_embed = s.at("scalar_embed").get<std::size_t>();
    p.shape.head_width = s.at("head_width").get<std::size_t>();
    p.shape.mode_count = s.at("mode_count").get<std::size_t>();
    const auto& e = j.at("encoder");
    p.encoder.hidden1 = dense_from_json(e.at("hidden1"));
    p.encoder.hidden2 = dense_from_json(e.at("hidden2"));
    p.encoder.scalar = dense_from_json(e.at("scalar"));
    p.binary_heads = heads_from_json(j.at("binary_heads"));
    p.mode_heads = heads_from_json(j.at("mode_heads"));
    p.class_weights = tensor_from_json(j.at("class_weights")).col(0);
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::MalformedWire, std::string("predictor params: ") + ex.what());
  }
  validate(p);
  return p;
}

std::optional<double> auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::DimensionMismatch, "scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] != 0) {
        rank_sum += midrank;
        ++pos;
      }
    }
    i = j;
  }
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) return std::nullopt;
  const double p = static_cast<double>(pos);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

ThresholdChoice max_f1(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::DimensionMismatch, "scores and labels differ in length");
  if (scores.empty()) throw Error(ErrorCode::Empty, "no scores");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const auto total_pos =
      static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](int y) { return y != 0; }));

  auto choice = [&](double threshold, std::size_t tp, std::size_t predicted) {
    ThresholdChoice c;
    c.threshold = threshold;
    c.precision = predicted == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(predicted);
    c.recall = total_pos == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(total_pos);
    c.f1 = tp == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(predicted + total_pos);
    return c;
  };

  // Walk thresholds from high to low; each distinct score block admits
  // all of its members at once.
  ThresholdChoice best = choice(scores[order.front()] + 1.0, 0, 0);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      tp += labels[order[j]] != 0;
      ++j;
    }
    const double threshold =
        j < order.size() ? 0.5 * (scores[order[j - 1]] + scores[order[j]]) : scores[order.back()] - 1.0;
    const auto c = choice(threshold, tp, j);
    if (c.f1 > best.f1) best = c;
    i = j;
  }
  return best;
}

BinaryReport binary_report(std::span<const double> scores, std::span<const int> labels) {
  BinaryReport r;
  r.n = scores.size();
  r.positives = static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](int y) { return y != 0; }));
  r.auroc = auroc(scores, labels);
  r.at_max_f1 = max_f1(scores, labels);
  return r;
}

ModeReport mode_report(const Eigen::MatrixXd& scores, std::span<const std::size_t> labels) {
  const auto n = static_cast<std::size_t>(scores.cols());
  if (n != labels.size()) throw Error(ErrorCode::DimensionMismatch, "scores and labels differ in length");
  if (n == 0) throw Error(ErrorCode::Empty, "no samples");
  const auto k = static_cast<std::size_t>(scores.rows());
  std::vector<std::size_t> tp(k, 0), predicted(k, 0), support(k, 0);
  ModeReport r;
  r.n = n;
  std::size_t top1 = 0, top2 = 0;
  for (std::size_t c = 0; c < n; ++c) {
    const auto y = labels[c];
    if (y >= k) throw Error(ErrorCode::DimensionMismatch, "label index beyond the class count");
    const auto col = scores.col(static_cast<Eigen::Index>(c));
    // Rank of the true class: number of classes scored strictly higher,
    // with ties broken toward the lower index.
    std::size_t above = 0;
    Eigen::Index argmax = 0;
    for (Eigen::Index j = 0; j < col.size(); ++j) {
      if (col[j] > col[argmax]) argmax = j;
      const auto ju = static_cast<std::size_t>(j);
      if (col[j] > col[static_cast<Eigen::Index>(y)] || (col[j] == col[static_cast<Eigen::Index>(y)] && ju < y)) ++above;
    }
    top1 += above == 0;
    top2 += above <= 1;
    ++support[y];
    ++predicted[static_cast<std::size_t>(argmax)];
    tp[y] += static_cast<std::size_t>(argmax) == y;
  }
  r.top1 = static_cast<double>(top1) / static_cast<double>(n);
  r.top2 = static_cast<double>(top2) / static_cast<double>(n);

  double macro = 0.0, weighted = 0.0, recall_sum = 0.0;
  std::size_t seen = 0, present = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const double f1 = support[j] + predicted[j] == 0
                          ? 0.0
                          : 2.0 * static_cast<double>(tp[j]) / static_cast<double>(support[j] + predicted[j]);
    if (support[j] + predicted[j] > 0) {
      macro += f1;
      ++seen;
    }
    weighted += f1 * static_cast<double>(support[j]);
    if (support[j] > 0) {
      recall_sum += static_cast<double>(tp[j]) / static_cast<double>(support[j]);
      ++present;
    }
  }
  r.macro_f1 = macro / static_cast<double>(seen);
  r.weighted_f1 = weighted / static_cast<double>(n);
  r.balanced_accuracy = recall_sum / static_cast<double>(present);
  return r;
}

Json to_json(const BinaryReport& r) {
  return Json{{"n", r.n},
              {"positives", r.positives},
              {"auroc", r.auroc ? Json(*r.auroc) : Json(nullptr)},
              {"max_f1", r.at_max_f1.f1},
              {"threshold", r.at_max_f1.threshold},
              {"precision_at_max_f1", r.at_max_f1.precision},
              {"recall_at_max_f1", r.at_max_f1.recall}};
}

Json to_json(const ModeReport& r) {
  return Json{{"n", r.n},
              {"top1", r.top1},
              {"top2", r.top2},
              {"macro_f1", r.macro_f1},
              {"weighted_f1", r.weighted_f1},
              {"balanced_accuracy", r.balanced_accuracy}};
}

}  // namespace tth
