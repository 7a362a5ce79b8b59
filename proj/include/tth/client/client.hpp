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

#include <functional>
#include <optional>
#include <string>

#include "tth/core/types.hpp"

namespace tth {

/// Routing metadata. Never sent to a remote endpoint and not part of the
/// cache key; scripted clients use it to look up their answers.
struct RequestTag {
  std::string question_id;
  std::string behavior;
};

struct ChatRequest {
  ModelId model;
  std::optional<std::string> image_ref;
  std::string prompt;
  double temperature = 0.0;
  double top_p = 1.0;
  std::string seed_tag;
  RequestTag tag;
};

/// Throws PreconditionViolation on an empty prompt or non-finite sampling
/// parameters.
void validate(const ChatRequest& request);

/// Every model role (target, proposer, editor, annotator, judge) is reached
/// through this interface.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

class FunctionClient final : public ChatClient {
 public:
  using Fn = std::function<std::string(const ChatRequest&)>;
  explicit FunctionClient(Fn fn) : fn_(std::move(fn)) {}
  std::string complete(const ChatRequest& request) override { return fn_(request); }

 private:
  Fn fn_;
};

}  // namespace tth
