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

#include <iostream>

#include <CLI11.hpp>

#include "wattcap/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"power-aware container scheduling: model training and cluster simulation"};
  app.require_subcommand(1);

  wattcap::cli::TrainArgs train_args;
  auto* train = app.add_subcommand("train", "fit a power model from utilization and power logs");
  train->add_option("--utils", train_args.utils_path, "utilization CSV")->required();
  train->add_option("--power", train_args.power_path, "power meter CSV")->required();
  train->add_option("--tolerance", train_args.tolerance, "join tolerance in seconds");
  train->add_option("--solver", train_args.solver, "closed or gd")
      ->check(CLI::IsMember({"closed", "gd"}));
  train->add_option("--seed", train_args.seed, "split/training seed");
  train->add_option("--out", train_args.out_path, "output model file")->required();

  wattcap::cli::SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "run a cluster scenario");
  simulate->add_option("--scenario", sim_args.scenario_path, "scenario document")->required();
  simulate->add_option("--model", sim_args.model_path, "trained model document")->required();
  simulate->add_option("--out-dir", sim_args.out_dir, "output directory")->required();

  wattcap::cli::ReportArgs report_args;
  auto* report = app.add_subcommand("report", "compare metrics from several runs");
  report->add_option("--inputs", report_args.inputs, "metrics.json files")->required();
  report->add_option("--out", report_args.out_path, "comparison CSV")->required();

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) return wattcap::cli::run_train(train_args, std::cout, std::cerr);
  if (simulate->parsed()) return wattcap::cli::run_simulate(sim_args, std::cout, std::cerr);
  return wattcap::cli::run_report(report_args, std::cout, std::cerr);
}
