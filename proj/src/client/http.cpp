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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "tth/client/http.hpp"

#include <cstdlib>
#include <filesystem>

#include "tth/core/encoding.hpp"
#include "tth/error.hpp"

namespace tth {

namespace {

std::string mime_for(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".png") return "image/png";
  if (ext == ".gif") return "image/gif";
  if (ext == ".webp") return "image/webp";
  return "image/jpeg";
}

std::string image_url(const std::string& ref) {
  if (ref.starts_with("http://") || ref.starts_with("https://") || ref.starts_with("data:")) {
    return ref;
  }
  return "data:" + mime_for(ref) + ";base64," + base64_encode(read_file(ref));
}

}  // namespace

Json build_chat_body(const ChatRequest& request, const std::string& api_model) {
  Json content = Json::array();
  content.push_back({{"type", "text"}, {"text", request.prompt}});
  if (request.image_ref && !request.image_ref->empty()) {
    content.push_back({{"type", "image_url"}, {"image_url", {{"url", image_url(*request.image_ref)}}}});
  }
  return Json{
      {"model", api_model},
      {"messages", Json::array({Json{{"role", "user"}, {"content", content}}})},
      {"temperature", request.temperature},
      {"top_p", request.top_p},
  };
}

std::string extract_chat_text(const Json& response) {
  const auto& content = response.at("choices").at(0).at("message").at("content");
  if (content.is_string()) return content.get<std::string>();
  if (content.is_null()) return {};
  std::string text;
  for (const auto& part : content) {
    if (part.value("type", "") == "text") text += part.value("text", "");
  }
  return text;
}

HttpChatClient::HttpChatClient(EndpointConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) throw Error(ErrorCode::InvalidConfig, "endpoint without base_url");
}

std::string HttpChatClient::complete(const ChatRequest& request) {
  auto it = config_.model_names.find(request.model.name());
  const std::string api_model = it == config_.model_names.end() ? request.model.name() : it->second;

  httplib::Client http(config_.base_url);
  http.set_connection_timeout(config_.timeout);
  http.set_read_timeout(config_.timeout);
  http.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr) {
      throw Error(ErrorCode::Unconfigured, "environment variable " + config_.api_key_env + " is unset");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  auto result = http.Post(config_.path, headers, build_chat_body(request, api_model).dump(),
                          "application/json");
  if (!result) {
    throw Error(ErrorCode::Transport, config_.name + ": " + httplib::to_string(result.error()));
  }
  if (result->status == 429 || result->status >= 500) {
    throw Error(ErrorCode::Transport, config_.name + ": HTTP " + std::to_string(result->status));
  }
  if (result->status == 401 || result->status == 403) {
    throw Error(ErrorCode::Unconfigured, config_.name + ": credentials rejected");
  }
  if (result->status != 200) {
    throw Error(ErrorCode::Transport,
                config_.name + ": HTTP " + std::to_string(result->status) + ": " + result->body);
  }
  Json body = Json::parse(result->body, nullptr, false);
  if (body.is_discarded()) throw Error(ErrorCode::Transport, config_.name + ": non-JSON response");
  try {
    return extract_chat_text(body);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Transport, config_.name + ": unexpected response shape: " + e.what());
  }
}

}  // namespace tth
