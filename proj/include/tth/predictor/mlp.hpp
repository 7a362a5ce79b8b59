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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tth/core/random.hpp"
#include "tth/core/types.hpp"
#include "tth/error.hpp"
#include "tth/predictor/features.hpp"

namespace tth {

/// Layer widths. The defaults are the reference architecture; tests shrink
/// the input widths to keep finite differences cheap.
struct PredictorShape {
  std::size_t hidden_dim = kHiddenStateDim;
  std::size_t hidden_width = 256;
  std::size_t hidden_embed = 64;
  std::size_t scalar_dim = kScalarFeatureDim;
  std::size_t scalar_embed = 32;
  std::size_t head_width = 64;
  std::size_t mode_count = kFailureModeCount;

  std::size_t embed_width() const { return hidden_embed + scalar_embed; }
  bool operator==(const PredictorShape&) const = default;
};

enum class HeadKind { Binary, Mode };

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ColumnX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// y = W x + b
template <typename Scalar>
struct Dense {
  MatrixX<Scalar> W;
  ColumnX<Scalar> b;

  static Dense zeros(std::size_t out, std::size_t in) {
    return {MatrixX<Scalar>::Zero(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in)),
            ColumnX<Scalar>::Zero(static_cast<Eigen::Index>(out))};
  }
};

template <typename Scalar>
struct Encoder {
  Dense<Scalar> hidden1;  // hidden_dim -> hidden_width
  Dense<Scalar> hidden2;  // hidden_width -> hidden_embed
  Dense<Scalar> scalar;   // scalar_dim -> scalar_embed
};

template <typename Scalar>
struct Head {
  Dense<Scalar> hidden;  // embed_width -> head_width
  Dense<Scalar> out;     // head_width -> 1 or mode_count
};

/// Encoder shared by every head; heads are keyed by target model.
template <typename Scalar>
struct MlpParams {
  PredictorShape shape;
  Encoder<Scalar> encoder;
  std::map<ModelId, Head<Scalar>> binary_heads;
  std::map<ModelId, Head<Scalar>> mode_heads;
  ColumnX<Scalar> class_weights = ColumnX<Scalar>::Ones(kFailureModeCount);

  std::map<ModelId, Head<Scalar>>& heads(HeadKind kind) {
    return kind == HeadKind::Binary ? binary_heads : mode_heads;
  }
  const std::map<ModelId, Head<Scalar>>& heads(HeadKind kind) const {
    return kind == HeadKind::Binary ? binary_heads : mode_heads;
  }
};

using MlpParamsd = MlpParams<double>;
using MlpParamsf = MlpParams<float>;

/// Calls fn(a_tensor, b_tensor) on matching tensors of two parameter sets
/// with the same heads, in a fixed order.
template <typename A, typename B, typename Fn>
void visit_tensors(A& a, B& b, Fn&& fn) {
  auto dense = [&](auto& x, auto& y) {
    fn(x.W, y.W);
    fn(x.b, y.b);
  };
  dense(a.encoder.hidden1, b.encoder.hidden1);
  dense(a.encoder.hidden2, b.encoder.hidden2);
  dense(a.encoder.scalar, b.encoder.scalar);
  for (HeadKind kind : {HeadKind::Binary, HeadKind::Mode}) {
    auto& ha = a.heads(kind);
    auto& hb = b.heads(kind);
    if (ha.size() != hb.size()) throw Error(ErrorCode::DimensionMismatch, "parameter sets have different heads");
    auto ib = hb.begin();
    for (auto ia = ha.begin(); ia != ha.end(); ++ia, ++ib) {
      if (ia->first != ib->first) throw Error(ErrorCode::DimensionMismatch, "parameter sets have different heads");
      dense(ia->second.hidden, ib->second.hidden);
      dense(ia->second.out, ib->second.out);
    }
  }
}

template <typename Scalar>
MlpParams<Scalar> zeros_like(const MlpParams<Scalar>& p) {
  MlpParams<Scalar> z = p;
  visit_tensors(z, p, [](auto& x, const auto&) { x.setZero(); });
  return z;
}

template <typename Scalar>
std::size_t parameter_count(const MlpParams<Scalar>& p) {
  std::size_t n = 0;
  visit_tensors(p, p, [&](const auto& x, const auto&) { n += static_cast<std::size_t>(x.size()); });
  return n;
}

/// Throws InvalidConfig when a tensor disagrees with the shape or holds a
/// non-finite value.
template <typename Scalar>
void validate(const MlpParams<Scalar>& p) {
  const auto& s = p.shape;
  auto check = [](const Dense<Scalar>& d, std::size_t out, std::size_t in, const char* what) {
    if (static_cast<std::size_t>(d.W.rows()) != out || static_cast<std::size_t>(d.W.cols()) != in ||
        static_cast<std::size_t>(d.b.size()) != out) {
      throw Error(ErrorCode::InvalidConfig, std::string("layer ") + what + " has the wrong shape");
    }
    if (!d.W.allFinite() || !d.b.allFinite()) {
      throw Error(ErrorCode::InvalidConfig, std::string("layer ") + what + " holds non-finite values");
    }
  };
  check(p.encoder.hidden1, s.hidden_width, s.hidden_dim, "hidden1");
  check(p.encoder.hidden2, s.hidden_embed, s.hidden_width, "hidden2");
  check(p.encoder.scalar, s.scalar_embed, s.scalar_dim, "scalar");
  for (const auto& [t, h] : p.binary_heads) {
    check(h.hidden, s.head_width, s.embed_width(), "binary.hidden");
    check(h.out, 1, s.head_width, "binary.out");
  }
  for (const auto& [t, h] : p.mode_heads) {
    check(h.hidden, s.head_width, s.embed_width(), "mode.hidden");
    check(h.out, s.mode_count, s.head_width, "mode.out");
  }
  if (static_cast<std::size_t>(p.class_weights.size()) != s.mode_count || !p.class_weights.allFinite()) {
    throw Error(ErrorCode::InvalidConfig, "class weights do not match the mode count");
  }
}

/// He-normal weights, zero biases. Draw order: encoder, then heads in
/// target order, so equal seeds and targets give equal parameters.
template <typename Scalar>
MlpParams<Scalar> init_params(const PredictorShape& shape, std::span<const ModelId> targets, HeadKind kind,
                              std::uint64_t seed) {
  Rng rng(seed);
  auto layer = [&](std::size_t out, std::size_t in) {
    auto d = Dense<Scalar>::zeros(out, in);
    const double scale = std::sqrt(2.0 / static_cast<double>(in));
    for (Eigen::Index c = 0; c < d.W.cols(); ++c) {
      for (Eigen::Index r = 0; r < d.W.rows(); ++r) d.W(r, c) = static_cast<Scalar>(scale * rng.normal());
    }
    return d;
  };
  MlpParams<Scalar> p;
  p.shape = shape;
  p.encoder.hidden1 = layer(shape.hidden_width, shape.hidden_dim);
  p.encoder.hidden2 = layer(shape.hidden_embed, shape.hidden_width);
  p.encoder.scalar = layer(shape.scalar_embed, shape.scalar_dim);
  p.class_weights = ColumnX<Scalar>::Ones(static_cast<Eigen::Index>(shape.mode_count));
  const std::size_t out = kind == HeadKind::Binary ? 1 : shape.mode_count;
  for (const auto& t : targets) {
    Head<Scalar> h{layer(shape.head_width, shape.embed_width()), layer(out, shape.head_width)};
    p.heads(kind).emplace(t, std::move(h));
  }
  return p;
}

/// Column-major batch: one sample per column.
template <typename Scalar>
struct Batch {
  MatrixX<Scalar> hidden;
  MatrixX<Scalar> scalars;

  Eigen::Index size() const { return hidden.cols(); }
};

template <typename Scalar>
Batch<Scalar> make_batch(std::span<const FeatureVector> rows, std::span<const std::size_t> index,
                         const PredictorShape& shape) {
  Batch<Scalar> b;
  b.hidden.resize(static_cast<Eigen::Index>(shape.hidden_dim), static_cast<Eigen::Index>(index.size()));
  b.scalars.resize(static_cast<Eigen::Index>(shape.scalar_dim), static_cast<Eigen::Index>(index.size()));
  for (std::size_t c = 0; c < index.size(); ++c) {
    const auto& fv = rows[index[c]];
    validate(fv, shape.hidden_dim, shape.scalar_dim);
    b.hidden.col(static_cast<Eigen::Index>(c)) = fv.hidden.cast<Scalar>();
    b.scalars.col(static_cast<Eigen::Index>(c)) = fv.scalars.cast<Scalar>();
  }
  return b;
}

template <typename Scalar>
Batch<Scalar> make_batch(std::span<const FeatureVector> rows, const PredictorShape& shape) {
  std::vector<std::size_t> all(rows.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return make_batch<Scalar>(rows, all, shape);
}

namespace detail {

template <typename Derived>
auto relu(const Eigen::MatrixBase<Derived>& x) {
  return x.cwiseMax(typename Derived::Scalar(0));
}

template <typename Derived>
auto relu_mask(const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  return (z.array() > Scalar(0)).template cast<Scalar>().matrix();
}

template <typename Scalar>
MatrixX<Scalar> affine(const Dense<Scalar>& d, const MatrixX<Scalar>& x) {
  MatrixX<Scalar> z = d.W * x;
  z.colwise() += d.b;
  return z;
}

template <typename Scalar>
MatrixX<Scalar> column_softmax(const MatrixX<Scalar>& logits) {
  MatrixX<Scalar> p = logits;
  for (Eigen::Index c = 0; c < p.cols(); ++c) {
    auto col = p.col(c);
    col = (col.array() - col.maxCoeff()).exp().matrix();
    col /= col.sum();
  }
  return p;
}

template <typename Scalar>
Scalar softplus(Scalar z) {
  return z > Scalar(0) ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

template <typename Scalar>
struct EncoderCache {
  MatrixX<Scalar> z1, a1, z2, zs, embed;
};

template <typename Scalar>
EncoderCache<Scalar> encode(const Encoder<Scalar>& enc, const Batch<Scalar>& batch, const PredictorShape& shape) {
  EncoderCache<Scalar> c;
  c.z1 = affine(enc.hidden1, batch.hidden);
  c.a1 = relu(c.z1);
  c.z2 = affine(enc.hidden2, c.a1);
  c.zs = affine(enc.scalar, batch.scalars);
  c.embed.resize(static_cast<Eigen::Index>(shape.embed_width()), batch.size());
  c.embed.topRows(c.z2.rows()) = relu(c.z2);
  c.embed.bottomRows(c.zs.rows()) = relu(c.zs);
  return c;
}

template <typename Scalar>
void check_batch(const MlpParams<Scalar>& p, const Batch<Scalar>& batch) {
  if (static_cast<std::size_t>(batch.hidden.rows()) != p.shape.hidden_dim ||
      static_cast<std::size_t>(batch.scalars.rows()) != p.shape.scalar_dim ||
      batch.hidden.cols() != batch.scalars.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "batch does not match the predictor shape");
  }
}

template <typename Scalar>
const Head<Scalar>& find_head(const MlpParams<Scalar>& p, HeadKind kind, const ModelId& target) {
  auto it = p.heads(kind).find(target);
  if (it == p.heads(kind).end()) {
    throw Error(ErrorCode::MissingTarget, "no " + std::string(kind == HeadKind::Binary ? "binary" : "mode") +
                                              " head for '" + target.name() + "'");
  }
  return it->second;
}

}  // namespace detail

/// Head outputs for a batch. Binary: `logits` is 1 x n and `probabilities`
/// holds the sigmoid. Mode: both are mode_count x n, with column softmax.
template <typename Scalar>
struct HeadOutput {
  MatrixX<Scalar> logits;
  MatrixX<Scalar> probabilities;
};

template <typename Scalar>
HeadOutput<Scalar> forward(const MlpParams<Scalar>& p, const Batch<Scalar>& batch, HeadKind kind,
                           const ModelId& target) {
  detail::check_batch(p, batch);
  const auto& head = detail::find_head(p, kind, target);
  const auto enc = detail::encode(p.encoder, batch, p.shape);
  const MatrixX<Scalar> a3 = detail::relu(detail::affine(head.hidden, enc.embed));
  HeadOutput<Scalar> out;
  out.logits = detail::affine(head.out, a3);
  if (kind == HeadKind::Binary) {
    out.probabilities = out.logits.unaryExpr([](Scalar z) { return detail::sigmoid(z); });
  } else {
    out.probabilities = detail::column_softmax(out.logits);
  }
  return out;
}

/// Single-sample convenience wrapper.
template <typename Scalar>
HeadOutput<Scalar> forward(const MlpParams<Scalar>& p, const FeatureVector& fv, HeadKind kind,
                           const ModelId& target) {
  const std::size_t zero = 0;
  return forward(p, make_batch<Scalar>(std::span<const FeatureVector>(&fv, 1), std::span(&zero, 1), p.shape),
                 kind, target);
}

/// Labels of one target over a batch: `columns` selects the batch columns
/// that carry a label, `classes` holds 0/1 (Binary) or the mode index.
struct TargetColumns {
  ModelId target;
  std::vector<Eigen::Index> columns;
  std::vector<std::size_t> classes;
};

/// Summed per-target loss. Binary: mean cross-entropy. Mode: mean of
/// class_weights[y] * -log p_y. Fills `grad` (same heads as `p`) when given.
template <typename Scalar>
Scalar loss_and_gradient(const MlpParams<Scalar>& p, const Batch<Scalar>& batch, HeadKind kind,
                         std::span<const TargetColumns> labels, MlpParams<Scalar>* grad) {
  detail::check_batch(p, batch);
  const auto enc = detail::encode(p.encoder, batch, p.shape);
  MatrixX<Scalar> d_embed;
  if (grad) {
    *grad = zeros_like(p);
    d_embed = MatrixX<Scalar>::Zero(enc.embed.rows(), enc.embed.cols());
  }
  Scalar total(0);
  for (const auto& t : labels) {
    if (t.columns.empty()) continue;
    const auto& head = detail::find_head(p, kind, t.target);
    const MatrixX<Scalar> e = enc.embed(Eigen::all, t.columns);
    const MatrixX<Scalar> z3 = detail::affine(head.hidden, e);
    const MatrixX<Scalar> a3 = detail::relu(z3);
    const MatrixX<Scalar> o = detail::affine(head.out, a3);
    const auto n = static_cast<Scalar>(t.columns.size());

    MatrixX<Scalar> d_o(o.rows(), o.cols());
    Scalar loss(0);
    if (kind == HeadKind::Binary) {
      for (Eigen::Index c = 0; c < o.cols(); ++c) {
        const Scalar y = static_cast<Scalar>(t.classes[static_cast<std::size_t>(c)]);
        loss += detail::softplus(o(0, c)) - y * o(0, c);
        d_o(0, c) = (detail::sigmoid(o(0, c)) - y) / n;
      }
    } else {
      const MatrixX<Scalar> prob = detail::column_softmax(o);
      for (Eigen::Index c = 0; c < o.cols(); ++c) {
        const auto y = static_cast<Eigen::Index>(t.classes[static_cast<std::size_t>(c)]);
        const Scalar w = p.class_weights[y];
        const Scalar m = o.col(c).maxCoeff();
        const Scalar lse = m + std::log((o.col(c).array() - m).exp().sum());
        loss += w * (lse - o(y, c));
        d_o.col(c) = w * prob.col(c) / n;
        d_o(y, c) -= w / n;
      }
    }
    total += loss / n;
    if (!grad) continue;

    auto& g = grad->heads(kind).at(t.target);
    g.out.W = d_o * a3.transpose();
    g.out.b = d_o.rowwise().sum();
    const MatrixX<Scalar> d_z3 = (head.out.W.transpose() * d_o).cwiseProduct(detail::relu_mask(z3));
    g.hidden.W = d_z3 * e.transpose();
    g.hidden.b = d_z3.rowwise().sum();
    const MatrixX<Scalar> d_e = head.hidden.W.transpose() * d_z3;
    for (std::size_t c = 0; c < t.columns.size(); ++c) d_embed.col(t.columns[c]) += d_e.col(static_cast<Eigen::Index>(c));
  }
  if (!grad) return total;

  const auto h2 = static_cast<Eigen::Index>(p.shape.hidden_embed);
  const auto se = static_cast<Eigen::Index>(p.shape.scalar_embed);
  auto& ge = grad->encoder;
  const MatrixX<Scalar> d_z2 = d_embed.topRows(h2).cwiseProduct(detail::relu_mask(enc.z2));
  ge.hidden2.W = d_z2 * enc.a1.transpose();
  ge.hidden2.b = d_z2.rowwise().sum();
  const MatrixX<Scalar> d_z1 = (p.encoder.hidden2.W.transpose() * d_z2).cwiseProduct(detail::relu_mask(enc.z1));
  ge.hidden1.W = d_z1 * batch.hidden.transpose();
  ge.hidden1.b = d_z1.rowwise().sum();
  const MatrixX<Scalar> d_zs = d_embed.bottomRows(se).cwiseProduct(detail::relu_mask(enc.zs));
  ge.scalar.W = d_zs * batch.scalars.transpose();
  ge.scalar.b = d_zs.rowwise().sum();
  return total;
}

/// Gathers per-target labels for the rows named by `index`. Throws
/// MissingLabels when a row lacks a label (or, for Mode, a failure mode)
/// for a requested target.
std::vector<TargetColumns> collect_labels(std::span<const FeatureVector> rows, std::span<const std::size_t> index,
                                          std::span<const ModelId> targets, HeadKind kind);

/// w_c = N / count_c over the classes present, scaled so the present
/// weights average 1; absent classes get 0.
std::vector<double> inverse_frequency_weights(std::span<const std::size_t> counts);

struct PredictorVariant {
  enum class Kind { Individual, SharedBackbone } kind = Kind::SharedBackbone;
  /// Individual only.
  std::optional<ModelId> target;

  static PredictorVariant individual(ModelId t) { return {Kind::Individual, std::move(t)}; }
  static PredictorVariant shared() { return {Kind::SharedBackbone, std::nullopt}; }
};

struct TrainConfig {
  HeadKind task = HeadKind::Binary;
  PredictorShape shape;
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  double learning_rate = 0.01;
  double momentum = 0.9;
  bool class_weighting = true;
  std::uint64_t seed = 0;
};

template <typename Scalar>
struct TrainResult {
  MlpParams<Scalar> params;
  std::vector<ModelId> targets;
  /// Full-dataset loss before training, then after each epoch.
  std::vector<double> loss_trace;
};

/// Targets a variant trains on: the named one, or every target labelled
/// anywhere in the dataset.
std::vector<ModelId> variant_targets(std::span<const FeatureVector> rows, const PredictorVariant& variant);

/// Mini-batch gradient descent with momentum. `init` overrides the seeded
/// initialization; it must have heads for exactly the trained targets.
template <typename Scalar>
TrainResult<Scalar> train(std::span<const FeatureVector> rows, const PredictorVariant& variant,
                          const TrainConfig& cfg, std::optional<MlpParams<Scalar>> init = std::nullopt) {
  if (rows.empty()) throw Error(ErrorCode::EmptyDataset, "no training rows");
  if (cfg.batch_size == 0 || cfg.learning_rate <= 0.0 || cfg.momentum < 0.0 || cfg.momentum >= 1.0) {
    throw Error(ErrorCode::InvalidConfig, "invalid training hyperparameters");
  }
  TrainResult<Scalar> result;
  result.targets = variant_targets(rows, variant);

  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto all_labels = collect_labels(rows, order, result.targets, cfg.task);

  result.params = init ? std::move(*init) : init_params<Scalar>(cfg.shape, result.targets, cfg.task, cfg.seed);
  auto& params = result.params;
  validate(params);
  if (params.heads(cfg.task).size() != result.targets.size()) {
    throw Error(ErrorCode::InvalidConfig, "initial parameters have the wrong heads");
  }
  if (cfg.task == HeadKind::Mode && cfg.class_weighting) {
    std::vector<std::size_t> counts(params.shape.mode_count, 0);
    for (const auto& t : all_labels) {
      for (auto c : t.classes) ++counts.at(c);
    }
    const auto w = inverse_frequency_weights(counts);
    for (std::size_t c = 0; c < w.size(); ++c) params.class_weights[static_cast<Eigen::Index>(c)] = static_cast<Scalar>(w[c]);
  }

  const auto full = make_batch<Scalar>(rows, order, params.shape);
  auto full_loss = [&] { return static_cast<double>(loss_and_gradient<Scalar>(params, full, cfg.task, all_labels, nullptr)); };
  result.loss_trace.push_back(full_loss());

  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  MlpParams<Scalar> velocity = zeros_like(params);
  MlpParams<Scalar> grad;
  const auto lr = static_cast<Scalar>(cfg.learning_rate);
  const auto mu = static_cast<Scalar>(cfg.momentum);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::span<const std::size_t> idx(order.data() + start, std::min(cfg.batch_size, order.size() - start));
      const auto batch = make_batch<Scalar>(rows, idx, params.shape);
      const auto labels = collect_labels(rows, idx, result.targets, cfg.task);
      loss_and_gradient<Scalar>(params, batch, cfg.task, labels, &grad);
      visit_tensors(velocity, grad, [&](auto& v, const auto& g) { v = mu * v - lr * g; });
      visit_tensors(params, velocity, [](auto& x, const auto& v) { x += v; });
    }
    result.loss_trace.push_back(full_loss());
  }
  return result;
}

Json to_json(const MlpParamsd& params);
MlpParamsd mlp_params_from_json(const Json& j);

}  // namespace tth
