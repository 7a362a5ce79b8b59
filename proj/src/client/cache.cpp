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

#include "tth/client/cache.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>

#include "tth/core/encoding.hpp"
#include "tth/core/json.hpp"
#include "tth/error.hpp"

namespace tth {

namespace {

void append_field(std::string& buf, std::string_view field) {
  buf += std::to_string(field.size());
  buf += ':';
  buf += field;
  buf += ';';
}

std::string format_real(double v) {
  std::array<char, 32> out{};
  std::snprintf(out.data(), out.size(), "%.17g", v);
  return out.data();
}

std::string utc_now() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> out{};
  std::strftime(out.data(), out.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return out.data();
}

}  // namespace

std::string cache_key(const ChatRequest& request) {
  std::string buf;
  append_field(buf, request.model.name());
  append_field(buf, request.prompt);
  append_field(buf, request.image_ref.value_or(""));
  append_field(buf, request.image_ref ? "1" : "0");
  append_field(buf, format_real(request.temperature));
  append_field(buf, format_real(request.top_p));
  append_field(buf, request.seed_tag);

  return sha256_hex(buf);
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(*dir_);
}

std::filesystem::path ResponseCache::path_for(const std::string& key) const {
  return *dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<std::string> ResponseCache::get(const std::string& key) {
  std::lock_guard lock(mu_);
  if (auto it = memory_.find(key); it != memory_.end()) return it->second;
  if (!dir_) return std::nullopt;
  auto path = path_for(key);
  if (!std::filesystem::exists(path)) return std::nullopt;
  Json entry = Json::parse(read_file(path));
  auto value = entry.at("value").get<std::string>();
  memory_.emplace(key, value);
  return value;
}

bool ResponseCache::put(const std::string& key, const std::string& value) {
  std::lock_guard lock(mu_);
  if (memory_.contains(key)) return false;
  if (dir_) {
    auto path = path_for(key);
    if (std::filesystem::exists(path)) {
      memory_.emplace(key, Json::parse(read_file(path)).at("value").get<std::string>());
      return false;
    }
    Json entry = {{"key", key}, {"value", value}, {"created_at", utc_now()}};
    atomic_write(path, entry.dump());
  }
  memory_.emplace(key, value);
  ++writes_;
  return true;
}

std::size_t ResponseCache::writes() const {
  std::lock_guard lock(mu_);
  return writes_;
}

}  // namespace tth
