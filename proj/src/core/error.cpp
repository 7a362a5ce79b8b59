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

#include "tth/error.hpp"

namespace tth {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidRecord: return "InvalidRecord";
    case ErrorCode::MalformedWire: return "MalformedWire";
    case ErrorCode::WrongShape: return "WrongShape";
    case ErrorCode::TooManyItems: return "TooManyItems";
    case ErrorCode::Transport: return "Transport";
    case ErrorCode::Unconfigured: return "Unconfigured";
    case ErrorCode::ScriptMiss: return "ScriptMiss";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::MissingTarget: return "MissingTarget";
    case ErrorCode::GroupTooSmall: return "GroupTooSmall";
    case ErrorCode::IndexOutOfPool: return "IndexOutOfPool";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::MissingLabels: return "MissingLabels";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::IdentityViolation: return "IdentityViolation";
    case ErrorCode::MissingBaseProfile: return "MissingBaseProfile";
    case ErrorCode::MissingUpstream: return "MissingUpstream";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace tth
