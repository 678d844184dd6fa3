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

#include "wattcap/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "wattcap/powermodel.hpp"
#include "wattcap/simulator.hpp"
#include "wattcap/trace.hpp"

namespace wattcap::cli {

namespace {

using nlohmann::json;

// Shortest exact decimal representation, same as the JSON documents use.
std::string fmt(double v) { return json(v).dump(); }

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

}  // namespace

int run_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<UtilizationSample> utils;
  std::vector<PowerSample> power;
  try {
    auto in = open_input(args.utils_path);
    utils = parse_utilization_csv(in);
  } catch (const Error& e) {
    err << "error: " << args.utils_path << ": " << e.what() << '\n';
    return kExitInput;
  }
  try {
    auto in = open_input(args.power_path);
    power = parse_power_csv(in);
  } catch (const Error& e) {
    err << "error: " << args.power_path << ": " << e.what() << '\n';
    return kExitInput;
  }

  JoinResult joined = join_by_timestamp(utils, power, args.tolerance);
  out << "joined records: " << joined.records.size() << " (dropped " << joined.dropped
      << ")\n";

  FitConfig config;
  try {
    config.solver = solver_from_string(args.solver);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  config.seed = args.seed;

  auto [train, test] = holdout_split(joined.records, 0.25, args.seed);
  PowerModel model;
  try {
    model = fit(train, config);
  } catch (const InsufficientData& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const SingularDesign& e) {
    err << "error: " << e.what() << " (retry with --solver gd)\n";
    return kExitData;
  }

  try {
    save_model(model, args.out_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  out << "model written to " << args.out_path << '\n';

  if (!test.empty()) {
    auto [predicted, actual] = predict_vs_actual(model, test);
    try {
      out << "held-out MAPE: " << fmt(mape(predicted, actual)) << "%\n";
      auto fractions = error_distribution(predicted, actual, {5.0, 10.0, 15.0, 20.0});
      out << "error distribution: <5%: " << fmt(fractions[0]) << "  <10%: " << fmt(fractions[1])
          << "  <15%: " << fmt(fractions[2]) << "  <20%: " << fmt(fractions[3]) << '\n';
    } catch (const ZeroActual&) {
      err << "warning: held-out split contains zero-power labels; skipping MAPE\n";
    }
  } else {
    err << "warning: held-out split is empty; skipping MAPE\n";
  }
  return kExitOk;
}

namespace {

void write_run_outputs(const std::string& out_dir, const RunResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream events(fs::path(out_dir) / "events.jsonl");
    for (const auto& event : result.events) {
      json j = event;
      events << j.dump() << '\n';
    }
  }
  {
    std::ofstream actions(fs::path(out_dir) / "actions.jsonl");
    write_action_log(result.actions, actions);
  }
  {
    json j = result.metrics;
    j["actions"] = result.actions;
    std::ofstream metrics(fs::path(out_dir) / "metrics.json");
    metrics << j.dump(2) << '\n';
  }
  {
    std::ofstream csv(fs::path(out_dir) / "server_power.csv");
    csv << "tick,server,watts_true,watts_measured,freq_factor\n";
    for (const auto& event : result.events) {
      if (event.kind != EventKind::PowerReading) continue;
      csv << event.tick << ',' << event.str.at("server") << ','
          << fmt(event.num.at("watts_true")) << ',' << fmt(event.num.at("watts_measured"))
          << ',' << fmt(event.num.at("freq_factor")) << '\n';
    }
  }
  {
    std::ofstream csv(fs::path(out_dir) / "workloads.csv");
    csv << "workload,execution_time\n";
    for (const auto& [id, ticks] : result.metrics.workload_execution_time)
      csv << id << ',' << ticks << '\n';
  }
  {
    std::ofstream csv(fs::path(out_dir) / "container_power.csv");
    csv << "tick,container,watts\n";
    for (const auto& [id, series] : result.metrics.container_power_series)
      for (std::size_t t = 0; t < series.size(); ++t)
        csv << t << ',' << id << ',' << fmt(series[t]) << '\n';
  }
}

}  // namespace

int run_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    scenario = load_scenario(args.scenario_path);
  } catch (const Error& e) {
    err << "error: " << args.scenario_path << ": " << e.what() << '\n';
    return kExitInput;
  }

  ModelSet models;
  try {
    models = ModelSet(load_model(args.model_path));
  } catch (const Error& e) {
    err << "error: " << args.model_path << ": " << e.what() << '\n';
    return kExitInput;
  }

  RunResult result;
  try {
    result = run(scenario, models);
  } catch (const NonTermination& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const NoCapacity& e) {
    err << "error: " << args.scenario_path << ": " << e.what() << '\n';
    return kExitInput;
  }

  write_run_outputs(args.out_dir, result);
  out << "label: " << result.metrics.label << '\n';
  out << "cap actions: " << result.actions.size() << '\n';
  for (const auto& [id, ticks] : result.metrics.workload_execution_time)
    out << "workload " << id << ": " << ticks << " s\n";
  for (const auto& [id, watts] : result.metrics.server_peak_power)
    out << "server " << id << " peak: " << fmt(watts) << " W\n";
  out << "results written to " << args.out_dir << '\n';
  return kExitOk;
}

int run_report(const ReportArgs& args, std::ostream& out, std::ostream& err) {
  if (args.inputs.size() < 2) {
    err << "error: report needs at least two metrics files\n";
    return kExitInput;
  }

  std::vector<MetricsReport> reports;
  for (const auto& path : args.inputs) {
    try {
      auto in = open_input(path);
      json j;
      in >> j;
      reports.push_back(j.get<MetricsReport>());
    } catch (const std::exception& e) {
      err << "error: " << path << ": " << e.what() << '\n';
      return kExitInput;
    }
  }

  auto workload_ids = [](const MetricsReport& r) {
    std::set<std::string> ids;
    for (const auto& [id, t] : r.workload_execution_time) ids.insert(id);
    return ids;
  };
  auto server_ids = [](const MetricsReport& r) {
    std::set<std::string> ids;
    for (const auto& [id, w] : r.server_peak_power) ids.insert(id);
    return ids;
  };
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (workload_ids(reports[i]) != workload_ids(reports[0]) ||
        server_ids(reports[i]) != server_ids(reports[0])) {
      err << "error: " << args.inputs[i] << " does not share workload/server identifiers with "
          << args.inputs[0] << '\n';
      return kExitInput;
    }
  }

  std::vector<std::string> labels;
  for (const auto& r : reports) labels.push_back(r.label);
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (labels[k] == labels[i]) labels[i] += "#" + std::to_string(i);

  std::ofstream csv(args.out_path);
  if (!csv) {
    err << "error: cannot write " << args.out_path << '\n';
    return kExitInput;
  }
  csv << "kind,id";
  for (const auto& label : labels) csv << ',' << label;
  csv << '\n';
  for (const auto& id : workload_ids(reports[0])) {
    csv << "workload_time," << id;
    for (const auto& r : reports) csv << ',' << r.workload_execution_time.at(id);
    csv << '\n';
  }
  for (const auto& id : server_ids(reports[0])) {
    csv << "server_peak," << id;
    for (const auto& r : reports) csv << ',' << fmt(r.server_peak_power.at(id));
    csv << '\n';
  }
  out << "comparison written to " << args.out_path << '\n';
  return kExitOk;
}

}  // namespace wattcap::cli
