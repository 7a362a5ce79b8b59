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

#include "tth/client/retry.hpp"

#include <cmath>
#include <thread>

#include "tth/error.hpp"

namespace tth {

std::chrono::milliseconds RetryPolicy::delay_before(int attempt) const {
  if (attempt <= 1) return std::chrono::milliseconds{0};
  double scale = std::pow(multiplier, attempt - 2);
  return std::chrono::milliseconds{
      static_cast<std::chrono::milliseconds::rep>(static_cast<double>(initial_delay.count()) * scale)};
}

RetryingClient::RetryingClient(std::shared_ptr<ChatClient> inner, RetryPolicy policy)
    : inner_(std::move(inner)), policy_(std::move(policy)) {
  if (policy_.max_attempts < 1) throw Error(ErrorCode::InvalidConfig, "max_attempts must be >= 1");
  if (!policy_.sleep) policy_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::string RetryingClient::complete(const ChatRequest& request) {
  for (int attempt = 1;; ++attempt) {
    auto delay = policy_.delay_before(attempt);
    if (delay.count() > 0) policy_.sleep(delay);
    try {
      return inner_->complete(request);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Transport || attempt >= policy_.max_attempts) throw;
    }
  }
}

}  // namespace tth
