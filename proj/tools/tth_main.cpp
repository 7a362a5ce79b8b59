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

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tth/error.hpp"
#include "tth/pipeline/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::string dataset;
  std::string targets;
  std::string strategy;
  std::string out = "out";
  std::string cache;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> parallelism;
  std::string mock;
};

std::vector<tth::ModelId> split_targets(const std::string& list) {
  std::vector<tth::ModelId> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.emplace_back(item.substr(b, e - b + 1));
  }
  return out;
}

int run(const std::string& command, const Flags& f) {
  tth::RunConfig cfg = f.config.empty() ? tth::parse_run_config("") : tth::load_run_config(f.config);
  if (!f.dataset.empty()) cfg.dataset = f.dataset;
  if (!f.targets.empty()) cfg.targets = split_targets(f.targets);
  if (!f.cache.empty()) cfg.cache_dir = f.cache;
  if (f.seed) {
    cfg.seed = *f.seed;
    cfg.predictor.train.seed = *f.seed;
  }
  if (f.parallelism) cfg.parallelism = *f.parallelism;
  tth::validate(cfg);

  tth::RunOptions opts;
  opts.out_dir = f.out;
  if (!f.mock.empty()) opts.mock = f.mock;
  if (!f.strategy.empty()) opts.strategy = tth::strategy_from_string(f.strategy);

  tth::Pipeline pipeline(std::move(cfg), std::move(opts));
  pipeline.run(tth::command_from_string(command));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Test-time hinting pipeline"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, "Run config (TOML subset)");
  app.add_option("--dataset", flags.dataset, "Question dataset (JSON-lines)");
  app.add_option("--targets", flags.targets, "Comma-separated target model ids");
  app.add_option("--strategy", flags.strategy, "Evaluate a single strategy");
  app.add_option("--out", flags.out, "Artifact directory")->capture_default_str();
  app.add_option("--cache", flags.cache, "Response cache directory");
  app.add_option("--seed", flags.seed, "Random seed");
  app.add_option("--parallelism", flags.parallelism, "In-flight requests per model")->check(CLI::PositiveNumber);
  app.add_option("--mock", flags.mock, "Scripted fixture; no endpoint is contacted");
  app.fallthrough();

  std::string command;
  for (tth::Command c : tth::kAllCommands) {
    const std::string name(tth::to_string(c));
    app.add_subcommand(name, "Run the " + name + " stage")->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(command, flags);
  } catch (const tth::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tth::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
