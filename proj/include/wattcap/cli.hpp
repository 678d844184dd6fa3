/*
 * Copyright (c) the wattcap authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WATTCAP_CLI_HPP_
#define WATTCAP_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wattcap/core.hpp"

namespace wattcap::cli {

// Exit codes: 0 ok, 1 bad input (files, formats, scenario fields), 2 data
// problems (insufficient or degenerate training data), 3 runtime failures
// (non-terminating simulation).
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitRuntime = 3;

struct TrainArgs {
  std::string utils_path;
  std::string power_path;
  Tick tolerance = 0;
  std::string solver = "closed";
  std::uint64_t seed = 0;
  std::string out_path;
};

struct SimulateArgs {
  std::string scenario_path;
  std::string model_path;
  std::string out_dir;
};

struct ReportArgs {
  std::vector<std::string> inputs;  // metrics.json files from simulate runs
  std::string out_path;
};

// Parse logs, join on timestamps, fit on a 75% split and report held-out
// MAPE plus the error distribution at 5/10/15/20%; writes the model document.
int run_train(const TrainArgs& args, std::ostream& out, std::ostream& err);

// Run a scenario end to end and write events.jsonl, actions.jsonl,
// metrics.json and the per-tick CSV tables into out_dir.
int run_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);

// Merge two or more metrics documents into one comparison CSV (execution
// time per workload and peak power per server, one column per input).
int run_report(const ReportArgs& args, std::ostream& out, std::ostream& err);

}  // namespace wattcap::cli

#endif  // WATTCAP_CLI_HPP_
