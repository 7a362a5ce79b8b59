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

#include "tth/predictor/features.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <set>

#include "tth/core/encoding.hpp"
#include "tth/error.hpp"

namespace tth {

namespace {

static_assert(std::endian::native == std::endian::little, "feature files assume a little-endian host");

constexpr char kMagic[4] = {'T', 'T', 'H', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kNoMode = 0xff;

class Writer {
 public:
  template <typename T>
  void put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void put_string(const std::string& s) {
    put(static_cast<std::uint32_t>(s.size()));
    out_ += s;
  }
  void put_floats(const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) put(static_cast<float>(v[i]));
  }
  void raw(const char* p, std::size_t n) { out_.append(p, n); }
  const std::string& bytes() const { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& data) : data_(data) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string get_string() {
    auto n = get<std::uint32_t>();
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  Eigen::VectorXd get_floats(std::size_t n) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = get<float>();
    return v;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw Error(ErrorCode::MalformedWire, "truncated feature file");
  }
  const std::string& data_;
  std::size_t pos_ = 0;
};

std::vector<ModelId> label_targets(const FeatureFile& file) {
  std::set<ModelId> targets;
  for (const auto& row : file.rows) {
    for (const auto& [model, label] : row.labels) targets.insert(model);
  }
  return {targets.begin(), targets.end()};
}

std::string floats_base64(const Eigen::VectorXd& v) {
  std::string bytes(static_cast<std::size_t>(v.size()) * sizeof(float), '\0');
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    float f = static_cast<float>(v[i]);
    std::memcpy(bytes.data() + static_cast<std::size_t>(i) * sizeof(float), &f, sizeof(float));
  }
  return base64_encode(bytes);
}

Eigen::VectorXd floats_from_base64(const std::string& text) {
  const std::string bytes = base64_decode(text);
  if (bytes.size() % sizeof(float) != 0) throw Error(ErrorCode::MalformedWire, "float array has a partial entry");
  Eigen::VectorXd v(static_cast<Eigen::Index>(bytes.size() / sizeof(float)));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    float f;
    std::memcpy(&f, bytes.data() + static_cast<std::size_t>(i) * sizeof(float), sizeof(float));
    v[i] = f;
  }
  return v;
}

}  // namespace

void validate(const FeatureVector& fv, std::size_t hidden_dim, std::size_t scalar_dim) {
  if (static_cast<std::size_t>(fv.hidden.size()) != hidden_dim ||
      static_cast<std::size_t>(fv.scalars.size()) != scalar_dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "features of '" + fv.question_id + "' have shape " + std::to_string(fv.hidden.size()) + "/" +
                    std::to_string(fv.scalars.size()) + ", expected " + std::to_string(hidden_dim) + "/" +
                    std::to_string(scalar_dim));
  }
  if (!fv.hidden.allFinite() || !fv.scalars.allFinite()) {
    throw Error(ErrorCode::InvalidRecord, "features of '" + fv.question_id + "' contain non-finite entries");
  }
}

void write_features_binary(const std::filesystem::path& path, const FeatureFile& file) {
  const auto targets = label_targets(file);
  Writer w;
  w.raw(kMagic, 4);
  w.put(kVersion);
  w.put(static_cast<std::uint32_t>(file.hidden_dim));
  w.put(static_cast<std::uint32_t>(file.scalar_dim));
  w.put(static_cast<std::uint64_t>(file.rows.size()));
  w.put(static_cast<std::uint32_t>(targets.size()));
  for (const auto& t : targets) w.put_string(t.name());
  for (const auto& row : file.rows) {
    validate(row, file.hidden_dim, file.scalar_dim);
    w.put_string(row.question_id);
    w.put_floats(row.hidden);
    w.put_floats(row.scalars);
    for (const auto& t : targets) {
      auto it = row.labels.find(t);
      std::uint8_t flags = 0;
      std::uint8_t mode = kNoMode;
      if (it != row.labels.end()) {
        flags = 1 | (it->second.error ? 2 : 0);
        if (it->second.mode) mode = static_cast<std::uint8_t>(index_of(*it->second.mode));
      }
      w.put(flags);
      w.put(mode);
    }
  }
  atomic_write(path, w.bytes());
}

FeatureFile read_features_binary(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  Reader r(data);
  char magic[4];
  for (char& c : magic) c = r.get<char>();
  if (std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorCode::MalformedWire, "not a feature file: " + path.string());
  if (auto version = r.get<std::uint32_t>(); version != kVersion) {
    throw Error(ErrorCode::MalformedWire, "unsupported feature file version " + std::to_string(version));
  }
  FeatureFile file;
  file.hidden_dim = r.get<std::uint32_t>();
  file.scalar_dim = r.get<std::uint32_t>();
  const auto count = r.get<std::uint64_t>();
  std::vector<ModelId> targets(r.get<std::uint32_t>());
  for (auto& t : targets) t = ModelId(r.get_string());
  file.rows.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    FeatureVector fv;
    fv.question_id = r.get_string();
    fv.hidden = r.get_floats(file.hidden_dim);
    fv.scalars = r.get_floats(file.scalar_dim);
    for (const auto& t : targets) {
      const auto flags = r.get<std::uint8_t>();
      const auto mode = r.get<std::uint8_t>();
      if (!(flags & 1)) continue;
      TargetLabel label;
      label.error = (flags & 2) != 0;
      if (mode != kNoMode) {
        if (mode >= kFailureModeCount) throw Error(ErrorCode::MalformedWire, "failure-mode index out of range");
        label.mode = kAllFailureModes[mode];
      }
      fv.labels.emplace(t, label);
    }
    validate(fv, file.hidden_dim, file.scalar_dim);
    file.rows.push_back(std::move(fv));
  }
  if (!r.done()) throw Error(ErrorCode::MalformedWire, "trailing bytes in feature file");
  return file;
}

Json to_json(const TargetLabel& label) {
  Json j{{"error", label.error}};
  if (label.mode) j["mode"] = std::string(to_string(*label.mode));
  return j;
}

TargetLabel target_label_from_json(const Json& j) {
  TargetLabel label;
  label.error = j.at("error").get<bool>();
  if (j.contains("mode") && !j["mode"].is_null()) {
    auto name = j["mode"].get<std::string>();
    label.mode = failure_mode_from_string(name);
    if (!label.mode) throw Error(ErrorCode::InvalidRecord, "unknown failure mode '" + name + "'");
  }
  return label;
}

void write_features_jsonl(const std::filesystem::path& path, const FeatureFile& file) {
  std::vector<Json> rows;
  rows.reserve(file.rows.size());
  for (const auto& row : file.rows) {
    validate(row, file.hidden_dim, file.scalar_dim);
    Json labels = Json::object();
    for (const auto& [model, label] : row.labels) labels[model.name()] = to_json(label);
    rows.push_back(Json{{"question_id", row.question_id},
                        {"hidden", floats_base64(row.hidden)},
                        {"scalars", floats_base64(row.scalars)},
                        {"labels", labels}});
  }
  atomic_write(path, to_jsonl(rows));
}

FeatureFile read_features_jsonl(const std::filesystem::path& path) {
  FeatureFile file;
  bool first = true;
  for (const auto& j : read_jsonl(path)) {
    FeatureVector fv;
    try {
      fv.question_id = j.at("question_id").get<std::string>();
      fv.hidden = floats_from_base64(j.at("hidden").get<std::string>());
      fv.scalars = floats_from_base64(j.at("scalars").get<std::string>());
      if (j.contains("labels")) {
        for (const auto& [name, label] : j["labels"].items()) {
          fv.labels.emplace(ModelId(name), target_label_from_json(label));
        }
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::MalformedWire, std::string("feature row: ") + e.what());
    }
    if (first) {
      file.hidden_dim = static_cast<std::size_t>(fv.hidden.size());
      file.scalar_dim = static_cast<std::size_t>(fv.scalars.size());
      first = false;
    }
    validate(fv, file.hidden_dim, file.scalar_dim);
    file.rows.push_back(std::move(fv));
  }
  return file;
}

FeatureFile read_features(const std::filesystem::path& path) {
  if (path.extension() == ".jsonl") return read_features_jsonl(path);
  return read_features_binary(path);
}

}  // namespace tth
