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
#include <map>
#include <string>

#include "tth/client/client.hpp"
#include "tth/core/json.hpp"

namespace tth {

/// An OpenAI-compatible chat-completions endpoint. The API key is read
/// from the environment variable named by `api_key_env` at call time.
struct EndpointConfig {
  std::string name;
  std::string base_url;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string api_key_env;
  std::map<std::string, std::string> model_names;  // ModelId -> API model name
  std::chrono::seconds timeout{120};
};

/// Request body for one chat completion; images become image_url parts
/// (local files are inlined as base64 data URIs).
Json build_chat_body(const ChatRequest& request, const std::string& api_model);
/// Concatenated text of choices[0].message.content.
std::string extract_chat_text(const Json& response);

class HttpChatClient final : public ChatClient {
 public:
  explicit HttpChatClient(EndpointConfig config);
  std::string complete(const ChatRequest& request) override;

 private:
  EndpointConfig config_;
};

}  // namespace tth
