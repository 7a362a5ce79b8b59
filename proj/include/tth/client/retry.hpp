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

#include <chrono>
#include <functional>
#include <memory>

#include "tth/client/client.hpp"

namespace tth {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_delay{500};
  double multiplier = 2.0;
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to sleep_for

  std::chrono::milliseconds delay_before(int attempt) const;
};

/// Retries Transport errors with exponential backoff; everything else
/// propagates on the first failure.
class RetryingClient final : public ChatClient {
 public:
  RetryingClient(std::shared_ptr<ChatClient> inner, RetryPolicy policy = {});
  std::string complete(const ChatRequest& request) override;

 private:
  std::shared_ptr<ChatClient> inner_;
  RetryPolicy policy_;
};

}  // namespace tth
