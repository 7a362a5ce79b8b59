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

#include "tth/core/prompt.hpp"

#include "tth/core/json.hpp"
#include "tth/error.hpp"
#include "builtin_prompts.hpp"

namespace tth {

namespace {

std::string strip_final_newline(std::string text) {
  if (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

}  // namespace

std::string render_template(std::string_view text, const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto open = text.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      return out;
    }
    auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, "unterminated placeholder in template");
    }
    out.append(text.substr(pos, open - pos));
    std::string key(text.substr(open + 2, close - open - 2));
    auto it = values.find(key);
    if (it == values.end()) throw Error(ErrorCode::InvalidConfig, "no value for placeholder {{" + key + "}}");
    out += it->second;
    pos = close + 2;
  }
}

const PromptSet& PromptSet::builtin() {
  static const PromptSet set = [] {
    PromptSet s;
    s.version_ = std::string(detail::kBuiltinPromptVersion);
    for (const auto& [name, text] : detail::builtin_prompts()) {
      s.templates_.emplace(std::string(name), strip_final_newline(std::string(text)));
    }
    return s;
  }();
  return set;
}

PromptSet PromptSet::load(const std::filesystem::path& dir) {
  PromptSet s = builtin();
  s.version_ = dir.filename().string();
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".txt") continue;
    s.templates_[entry.path().stem().string()] = strip_final_newline(read_file(entry.path()));
  }
  return s;
}

const std::string& PromptSet::get(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) throw Error(ErrorCode::InvalidConfig, "unknown prompt template '" + std::string(name) + "'");
  return it->second;
}

std::string PromptSet::render(std::string_view name, const std::map<std::string, std::string>& values) const {
  return render_template(get(name), values);
}

std::string format_options(const QuestionRecord& record) {
  std::string out;
  for (std::size_t i = 0; i < record.options.size(); ++i) {
    if (i > 0) out += '\n';
    out += option_letter(i) + ". " + record.options[i];
  }
  return out;
}

std::string base_prompt(const QuestionRecord& record, const PromptSet& prompts) {
  return prompts.render("base", {{"question", record.question}, {"options", format_options(record)}});
}

std::string cot_prompt(const QuestionRecord& record, const PromptSet& prompts) {
  return base_prompt(record, prompts) + "\n" + std::string(kCotSuffix);
}

}  // namespace tth
