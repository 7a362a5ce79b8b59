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

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "tth/client/client.hpp"

namespace tth {

/// Hex SHA-256 over (model, prompt, image_ref, temperature, top_p, seed_tag).
std::string cache_key(const ChatRequest& request);

struct CacheEntry {
  std::string key;
  std::string value;
  std::string created_at;
};

/// Write-once response cache. With a directory it persists one JSON file per
/// key, written via temp-file-then-rename.
class ResponseCache {
 public:
  ResponseCache() = default;
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& key);
  /// Returns false (and keeps the old value) if the key already exists.
  bool put(const std::string& key, const std::string& value);

  std::size_t writes() const;

 private:
  std::filesystem::path path_for(const std::string& key) const;

  std::optional<std::filesystem::path> dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::string> memory_;
  std::size_t writes_ = 0;
};

}  // namespace tth
