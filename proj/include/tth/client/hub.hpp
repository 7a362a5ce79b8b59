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
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <vector>

#include "tth/client/cache.hpp"
#include "tth/client/client.hpp"
#include "tth/client/retry.hpp"

namespace tth {

struct CallRecord {
  std::string model;
  std::string question_id;
  std::string behavior;
  std::string seed_tag;
  bool cache_hit = false;
};

/// Routes requests to per-model backends through retry and the response
/// cache, bounds in-flight requests per model and logs every call.
class ClientHub final : public ChatClient {
 public:
  explicit ClientHub(std::shared_ptr<ResponseCache> cache = std::make_shared<ResponseCache>(),
                     RetryPolicy retry = {}, std::size_t parallelism = 8);

  void register_model(const std::string& model, std::shared_ptr<ChatClient> backend);
  bool has_model(const std::string& model) const;

  std::string complete(const ChatRequest& request) override;

  std::vector<CallRecord> call_log() const;
  std::size_t remote_calls() const;
  void clear_log();

 private:
  using Semaphore = std::counting_semaphore<1024>;

  struct Backend {
    std::shared_ptr<ChatClient> client;
    std::unique_ptr<Semaphore> slots;
  };

  std::shared_ptr<ResponseCache> cache_;
  RetryPolicy retry_;
  std::size_t parallelism_;
  mutable std::mutex mu_;
  std::map<std::string, Backend> backends_;
  std::vector<CallRecord> log_;
  std::size_t remote_calls_ = 0;
};

}  // namespace tth
