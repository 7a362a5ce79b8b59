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

#include "tth/client/client.hpp"

#include <cmath>

#include "tth/error.hpp"

namespace tth {

void validate(const ChatRequest& request) {
  if (request.model.empty()) throw Error(ErrorCode::PreconditionViolation, "request without model");
  if (request.prompt.empty()) throw Error(ErrorCode::PreconditionViolation, "empty prompt");
  if (!std::isfinite(request.temperature) || request.temperature < 0.0) {
    throw Error(ErrorCode::PreconditionViolation, "temperature must be finite and >= 0");
  }
  if (!std::isfinite(request.top_p) || request.top_p <= 0.0 || request.top_p > 1.0) {
    throw Error(ErrorCode::PreconditionViolation, "top_p must lie in (0, 1]");
  }
}

}  // namespace tth
