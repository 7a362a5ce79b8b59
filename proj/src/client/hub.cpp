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

#include "tth/client/hub.hpp"

#include "tth/error.hpp"

namespace tth {

ClientHub::ClientHub(std::shared_ptr<ResponseCache> cache, RetryPolicy retry,
                     std::size_t parallelism)
    : cache_(std::move(cache)), retry_(std::move(retry)), parallelism_(parallelism) {
  if (parallelism_ == 0 || parallelism_ > 1024) {
    throw Error(ErrorCode::InvalidConfig, "parallelism must lie in [1, 1024]");
  }
}

void ClientHub::register_model(const std::string& model, std::shared_ptr<ChatClient> backend) {
  std::lock_guard lock(mu_);
  auto retrying = std::make_shared<RetryingClient>(std::move(backend), retry_);
  backends_[model] = Backend{std::move(retrying),
                             std::make_unique<Semaphore>(static_cast<std::ptrdiff_t>(parallelism_))};
}

bool ClientHub::has_model(const std::string& model) const {
  std::lock_guard lock(mu_);
  return backends_.contains(model);
}

std::string ClientHub::complete(const ChatRequest& request) {
  validate(request);
  ChatClient* client = nullptr;
  Semaphore* slots = nullptr;
  {
    std::lock_guard lock(mu_);
    auto it = backends_.find(request.model.name());
    if (it == backends_.end()) {
      throw Error(ErrorCode::Unconfigured, "no client for model '" + request.model.name() + "'");
    }
    client = it->second.client.get();
    slots = it->second.slots.get();
  }

  CallRecord record{request.model.name(), request.tag.question_id, request.tag.behavior,
                    request.seed_tag, false};
  const auto key = cache_key(request);
  std::string response;
  if (auto cached = cache_->get(key)) {
    record.cache_hit = true;
    response = std::move(*cached);
  } else {
    slots->acquire();
    try {
      response = client->complete(request);
    } catch (...) {
      slots->release();
      throw;
    }
    slots->release();
    if (!cache_->put(key, response)) response = cache_->get(key).value_or(response);
    std::lock_guard lock(mu_);
    ++remote_calls_;
  }
  std::lock_guard lock(mu_);
  log_.push_back(std::move(record));
  return response;
}

std::vector<CallRecord> ClientHub::call_log() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::size_t ClientHub::remote_calls() const {
  std::lock_guard lock(mu_);
  return remote_calls_;
}

void ClientHub::clear_log() {
  std::lock_guard lock(mu_);
  log_.clear();
  remote_calls_ = 0;
}

}  // namespace tth
