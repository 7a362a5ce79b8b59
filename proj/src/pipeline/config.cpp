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

#include "tth/pipeline/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "tth/core/json.hpp"
#include "tth/error.hpp"

namespace tth {

namespace {

class TomlParser {
 public:
  explicit TomlParser(std::string_view text) : s_(text) {}

  TomlDocument parse() {
    TomlDocument doc;
    doc[""];
    std::string section;
    std::set<std::string> seen_sections;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        ++pos_;
        section = parse_section_name();
        if (!seen_sections.insert(section).second) fail("duplicate section [" + section + "]");
        doc[section];
      } else {
        std::string key = parse_key();
        skip_inline_space();
        expect('=');
        skip_inline_space();
        TomlValue value = parse_value();
        if (!doc[section].emplace(key, std::move(value)).second) fail("duplicate key '" + key + "'");
      }
      end_of_line();
    }
    return doc;
  }

 private:
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) line += s_[i] == '\n';
    throw Error(ErrorCode::InvalidConfig, "config line " + std::to_string(line) + ": " + what);
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_inline_space() {
    while (peek() == ' ' || peek() == '\t') ++pos_;
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++pos_;
    }
  }

  // Whitespace, newlines and comments.
  void skip_blank_lines() {
    while (!eof()) {
      skip_inline_space();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void end_of_line() {
    skip_inline_space();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (!eof() && peek() != '\n') fail("unexpected trailing characters");
  }

  static bool bare_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string parse_key() {
    if (peek() == '"') return parse_basic_string();
    if (peek() == '\'') return parse_literal_string();
    std::string key;
    while (bare_char(peek())) key += s_[pos_++];
    if (key.empty()) fail("expected a key");
    return key;
  }

  std::string parse_section_name() {
    std::string name;
    while (true) {
      skip_inline_space();
      if (!name.empty()) name += '.';
      name += parse_key();
      skip_inline_space();
      if (peek() == '.') {
        ++pos_;
        continue;
      }
      expect(']');
      return name;
    }
  }

  std::string parse_basic_string() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = s_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (eof()) fail("unterminated escape");
      switch (char e = s_[pos_++]) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
  }

  std::string parse_literal_string() {
    expect('\'');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = s_[pos_++];
      if (c == '\'') return out;
      out += c;
    }
  }

  TomlScalar parse_scalar() {
    const char c = peek();
    if (c == '"') return parse_basic_string();
    if (c == '\'') return parse_literal_string();
    std::string token;
    while (!eof() && (bare_char(peek()) || peek() == '.' || peek() == '+')) token += s_[pos_++];
    if (token == "true") return true;
    if (token == "false") return false;
    if (token.empty()) fail("expected a value");
    std::string digits;
    for (char ch : token) {
      if (ch != '_') digits += ch;
    }
    const bool is_float = digits.find_first_of(".eE") != std::string::npos || digits == "inf" || digits == "nan";
    if (!is_float) {
      std::int64_t v = 0;
      const char* begin = digits.data() + (digits[0] == '+' ? 1 : 0);
      auto [ptr, ec] = std::from_chars(begin, digits.data() + digits.size(), v);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) fail("invalid integer '" + token + "'");
      return v;
    }
    try {
      std::size_t used = 0;
      double v = std::stod(digits, &used);
      if (used != digits.size() || !std::isfinite(v)) fail("invalid number '" + token + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("invalid number '" + token + "'");
    }
  }

  TomlValue parse_value() {
    if (peek() != '[') {
      return std::visit([](auto&& v) -> TomlValue { return v; }, parse_scalar());
    }
    ++pos_;
    std::vector<TomlScalar> items;
    while (true) {
      skip_blank_lines();
      if (peek() == ']') {
        ++pos_;
        return items;
      }
      items.push_back(parse_scalar());
      skip_blank_lines();
      if (peek() == ',') {
        ++pos_;
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

class Section {
 public:
  Section(const TomlDocument& doc, const std::string& name) : name_(name) {
    if (auto it = doc.find(name); it != doc.end()) values_ = &it->second;
  }

  bool present() const { return values_ != nullptr; }

  std::optional<std::string> string(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (auto s = std::get_if<std::string>(v)) return *s;
    bad(key, "a string");
  }

  std::optional<double> number(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (auto d = std::get_if<double>(v)) return *d;
    if (auto i = std::get_if<std::int64_t>(v)) return static_cast<double>(*i);
    bad(key, "a number");
  }

  std::optional<std::int64_t> integer(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (auto i = std::get_if<std::int64_t>(v)) return *i;
    bad(key, "an integer");
  }

  std::optional<std::size_t> count(const std::string& key) {
    auto v = integer(key);
    if (!v) return std::nullopt;
    if (*v < 0) bad(key, "a non-negative integer");
    return static_cast<std::size_t>(*v);
  }

  std::optional<bool> boolean(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (auto b = std::get_if<bool>(v)) return *b;
    bad(key, "a boolean");
  }

  std::optional<std::vector<std::string>> strings(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (auto arr = std::get_if<std::vector<TomlScalar>>(v)) {
      std::vector<std::string> out;
      for (const auto& item : *arr) {
        auto s = std::get_if<std::string>(&item);
        if (!s) bad(key, "an array of strings");
        out.push_back(*s);
      }
      return out;
    }
    bad(key, "an array of strings");
  }

  /// Every key of the section as a string value.
  std::map<std::string, std::string> string_map() {
    std::map<std::string, std::string> out;
    if (!values_) return out;
    for (const auto& [k, v] : *values_) {
      used_.insert(k);
      auto s = std::get_if<std::string>(&v);
      if (!s) bad(k, "a string");
      out.emplace(k, *s);
    }
    return out;
  }

  void reject_unknown() const {
    if (!values_) return;
    for (const auto& [k, v] : *values_) {
      if (!used_.count(k)) {
        throw Error(ErrorCode::InvalidConfig, "unknown key '" + k + "' in [" + name_ + "]");
      }
    }
  }

 private:
  const TomlValue* find(const std::string& key) {
    if (!values_) return nullptr;
    auto it = values_->find(key);
    if (it == values_->end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  [[noreturn]] void bad(const std::string& key, const char* what) const {
    throw Error(ErrorCode::InvalidConfig, "[" + name_ + "] " + key + " must be " + what);
  }

  std::string name_;
  const std::map<std::string, TomlValue>* values_ = nullptr;
  std::set<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

HeadKind head_kind_from_string(const std::string& s) {
  if (s == "binary") return HeadKind::Binary;
  if (s == "mode") return HeadKind::Mode;
  throw Error(ErrorCode::InvalidConfig, "predictor task must be 'binary' or 'mode', got '" + s + "'");
}

}  // namespace

TomlDocument parse_toml(std::string_view text) { return TomlParser(text).parse(); }

const std::vector<std::string>& default_hint_templates() {
  static const std::vector<std::string> templates = {
      "Look again at the part of the image the question names before choosing.",
      "Rule out each option that contradicts something visible in the image.",
      "Count the relevant objects one by one instead of estimating.",
      "Check the positions of the objects relative to each other.",
      "Decide using only what the image shows, not what is usual.",
  };
  return templates;
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
  const TomlDocument doc = parse_toml(text);
  static const std::set<std::string> known = {"", "run", "reward", "grpo", "judges", "predictor", "evaluate"};
  for (const auto& [name, values] : doc) {
    if (!known.count(name) && !name.starts_with("endpoint.")) {
      throw Error(ErrorCode::InvalidConfig, "unknown section [" + name + "]");
    }
  }
  if (!doc.at("").empty()) throw Error(ErrorCode::InvalidConfig, "keys must live inside a section");

  RunConfig cfg;
  cfg.grpo.templates = default_hint_templates();

  Section run(doc, "run");
  if (auto v = run.string("dataset")) cfg.dataset = resolve(base_dir, *v);
  if (auto v = run.strings("targets")) {
    cfg.targets.clear();
    for (const auto& t : *v) cfg.targets.emplace_back(t);
  }
  if (auto v = run.string("proposer")) cfg.proposer = ModelId(*v);
  if (auto v = run.string("editor")) cfg.editor = ModelId(*v);
  if (auto v = run.string("annotator")) cfg.annotator = ModelId(*v);
  if (auto v = run.count("r_max")) cfg.r_max = *v;
  if (auto v = run.count("trials")) cfg.trials = *v;
  if (auto v = run.number("base_correct_share")) cfg.base_correct_share = *v;
  if (auto v = run.count("parallelism")) cfg.parallelism = *v;
  if (auto v = run.string("cache_dir")) cfg.cache_dir = resolve(base_dir, *v);
  if (auto v = run.string("prompts_dir")) cfg.prompts_dir = resolve(base_dir, *v);
  if (auto v = run.integer("seed")) cfg.seed = static_cast<std::uint64_t>(*v);
  run.reject_unknown();

  Section reward(doc, "reward");
  if (auto v = reward.number("repair")) cfg.reward.repair_score = *v;
  if (auto v = reward.number("noop")) cfg.reward.noop_score = *v;
  if (auto v = reward.number("harm")) cfg.reward.harm_score = *v;
  if (auto v = reward.number("unrepaired")) cfg.reward.unrepaired_score = *v;
  reward.reject_unknown();

  Section grpo(doc, "grpo");
  if (auto v = grpo.count("group_size")) cfg.grpo.group_size = *v;
  if (auto v = grpo.number("temperature")) cfg.grpo.temperature = *v;
  if (auto v = grpo.number("clip")) cfg.grpo.clip = *v;
  if (auto v = grpo.number("kl")) cfg.grpo.kl = *v;
  if (auto v = grpo.number("learning_rate")) cfg.grpo.learning_rate = *v;
  if (auto v = grpo.count("steps")) cfg.grpo.steps = *v;
  if (auto v = grpo.strings("templates")) cfg.grpo.templates = *v;
  grpo.reject_unknown();

  Section judges(doc, "judges");
  for (const auto& [target, judge] : judges.string_map()) cfg.judges.emplace(ModelId(target), ModelId(judge));

  Section evaluate(doc, "evaluate");
  if (auto v = evaluate.strings("strategies")) {
    cfg.strategies.clear();
    for (const auto& s : *v) cfg.strategies.push_back(strategy_from_string(s));
  }
  evaluate.reject_unknown();

  Section predictor(doc, "predictor");
  auto& pc = cfg.predictor;
  if (auto v = predictor.string("features")) pc.features = resolve(base_dir, *v);
  if (auto v = predictor.string("test_features")) pc.test_features = resolve(base_dir, *v);
  if (auto v = predictor.string("task")) pc.task = head_kind_from_string(*v);
  pc.train.task = pc.task;
  if (auto v = predictor.string("variant")) {
    if (*v == "shared") {
      pc.variant = PredictorVariant::shared();
    } else if (*v == "individual") {
      auto target = predictor.string("target");
      if (!target) throw Error(ErrorCode::InvalidConfig, "[predictor] variant 'individual' needs a target");
      pc.variant = PredictorVariant::individual(ModelId(*target));
    } else {
      throw Error(ErrorCode::InvalidConfig, "[predictor] variant must be 'shared' or 'individual'");
    }
  }
  if (auto v = predictor.count("hidden_dim")) pc.train.shape.hidden_dim = *v;
  if (auto v = predictor.count("scalar_dim")) pc.train.shape.scalar_dim = *v;
  if (auto v = predictor.count("epochs")) pc.train.epochs = *v;
  if (auto v = predictor.count("batch_size")) pc.train.batch_size = *v;
  if (auto v = predictor.number("learning_rate")) pc.train.learning_rate = *v;
  if (auto v = predictor.number("momentum")) pc.train.momentum = *v;
  if (auto v = predictor.boolean("class_weighting")) pc.train.class_weighting = *v;
  pc.train.seed = cfg.seed;
  predictor.reject_unknown();

  for (const auto& [name, values] : doc) {
    if (!name.starts_with("endpoint.") || name.ends_with(".models")) continue;
    Section ep(doc, name);
    EndpointConfig e;
    e.name = name.substr(std::string("endpoint.").size());
    auto url = ep.string("base_url");
    if (!url) throw Error(ErrorCode::InvalidConfig, "[" + name + "] needs base_url");
    e.base_url = *url;
    if (auto v = ep.string("path")) e.path = *v;
    if (auto v = ep.string("api_key_env")) e.api_key_env = *v;
    if (auto v = ep.integer("timeout_seconds")) e.timeout = std::chrono::seconds(*v);
    if (auto v = ep.strings("models")) {
      for (const auto& m : *v) e.model_names.emplace(m, m);
    }
    ep.reject_unknown();
    // [endpoint.NAME.models] maps ModelId -> API model name.
    Section names(doc, name + ".models");
    for (const auto& [id, api] : names.string_map()) e.model_names[id] = api;
    cfg.endpoints.push_back(std::move(e));
  }

  validate(cfg);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, "cannot read config " + path.string());
  }
  return parse_run_config(text, path.parent_path());
}

void validate(const RunConfig& cfg) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  try {
    validate(cfg.reward);
  } catch (const Error& e) {
    bad(e.what());
  }
  if (cfg.r_max == 0) bad("r_max must be >= 1");
  if (cfg.trials == 0) bad("trials must be >= 1");
  if (cfg.parallelism == 0) bad("parallelism must be >= 1");
  if (!(cfg.base_correct_share >= 0.0 && cfg.base_correct_share <= 1.0)) bad("base_correct_share must lie in [0, 1]");
  if (cfg.grpo.group_size < 2) bad("grpo group_size must be >= 2");
  if (!(cfg.grpo.temperature > 0.0)) bad("grpo temperature must be > 0");
  if (!(cfg.grpo.clip > 0.0 && cfg.grpo.clip < 1.0)) bad("grpo clip must lie in (0, 1)");
  if (!(cfg.grpo.kl >= 0.0)) bad("grpo kl must be >= 0");
  if (!(cfg.grpo.learning_rate > 0.0)) bad("grpo learning_rate must be > 0");
  if (cfg.grpo.templates.size() < 2) bad("grpo needs at least two hint templates");
  std::set<ModelId> seen;
  for (const auto& t : cfg.targets) {
    if (!seen.insert(t).second) bad("duplicate target '" + t.name() + "'");
  }
  if (cfg.strategies.empty()) bad("no strategies to evaluate");
}

Json to_json(const RunConfig& cfg) {
  Json targets = Json::array();
  for (const auto& t : cfg.targets) targets.push_back(t.name());
  Json judges = Json::object();
  for (const auto& [t, j] : cfg.judges) judges[t.name()] = j.name();
  Json strategies = Json::array();
  for (auto s : cfg.strategies) strategies.push_back(std::string(to_string(s)));
  return Json{{"targets", targets},
              {"proposer", cfg.proposer.name()},
              {"editor", cfg.editor.name()},
              {"annotator", cfg.annotator.name()},
              {"r_max", cfg.r_max},
              {"trials", cfg.trials},
              {"reward",
               {{"repair", cfg.reward.repair_score},
                {"noop", cfg.reward.noop_score},
                {"harm", cfg.reward.harm_score},
                {"unrepaired", cfg.reward.unrepaired_score}}},
              {"grpo",
               {{"group_size", cfg.grpo.group_size},
                {"temperature", cfg.grpo.temperature},
                {"clip", cfg.grpo.clip},
                {"kl", cfg.grpo.kl},
                {"learning_rate", cfg.grpo.learning_rate},
                {"steps", cfg.grpo.steps},
                {"templates", cfg.grpo.templates}}},
              {"base_correct_share", cfg.base_correct_share},
              {"seed", cfg.seed},
              {"strategies", strategies},
              {"judges", judges}};
}

}  // namespace tth
