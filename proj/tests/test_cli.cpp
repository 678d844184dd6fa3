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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "test_util.hpp"
#include "wattcap/cli.hpp"
#include "wattcap/powermodel.hpp"
#include "wattcap/simulator.hpp"
#include "wattcap/trace.hpp"

#include <sys/wait.h>
#include <unistd.h>

using namespace wattcap;
using namespace wattcap::cli;
using testutil::make_container;
using testutil::make_model;
using testutil::make_server;
using testutil::make_workload;
using testutil::scenario_skeleton;

namespace fs = std::filesystem;

namespace {

constexpr Bytes kGiB = 1ull << 30;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("wattcap_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

// Noiseless single-container logs generated from the usual ground truth;
// cumulative counters are built so the derived rates match the intended
// features.
void write_training_logs(const std::string& utils_path, const std::string& power_path,
                         int seconds) {
  testutil::TrueParams p;
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> cpu(0.0, 300.0);
  std::uniform_real_distribution<double> ram(0.0, 100.0);
  std::uniform_real_distribution<double> disk(0.0, 5e7);
  std::uniform_real_distribution<double> net(0.0, 2e7);

  std::ofstream utils(utils_path);
  std::ofstream power(power_path);
  utils << "timestamp,container_id,cpu_pct,mem_pct,mem_used,mem_limit,net_rx,net_tx,"
           "blk_read,blk_write,pids\n";
  power << "timestamp,watts\n";

  unsigned long long blk = 0, net_rx = 0;
  for (int t = 0; t <= seconds; ++t) {
    double c = cpu(rng), r = ram(rng);
    auto dr = static_cast<unsigned long long>(disk(rng));
    auto nr = static_cast<unsigned long long>(net(rng));
    blk += dr;
    net_rx += nr;
    utils << t << ",c1," << c << ',' << r << ",1024,4096," << net_rx << ",0," << blk
          << ",0,10\n";
    double label = p.p_static + p.a * c + p.b * r + p.c * static_cast<double>(dr) +
                   p.d * static_cast<double>(nr);
    power << t << ',' << label << '\n';
  }
}

Scenario demo_scenario(CappingMode mode, const std::string& name = "demo",
                       double cap = 120.0) {
  Scenario s = scenario_skeleton(mode, 25, 5);
  s.name = name;
  s.cluster.servers = {make_server("s1", 12, 64 * kGiB, cap, 30.0)};
  s.cluster.pending = {make_container("c1", 3, kGiB, "w1"),
                       make_container("c2", 3, kGiB, "w2"),
                       make_container("c3", 3, kGiB, "w3")};
  s.workloads = {make_workload("w1", 150.0, 3), make_workload("w2", 150.0, 3),
                 make_workload("w3", 150.0, 3)};
  return s;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int simulate(const std::string& scenario, const std::string& model, const std::string& dir) {
  std::ostringstream out, err;
  int rc = run_simulate({scenario, model, dir}, out, err);
  INFO(err.str());
  return rc;
}

}  // namespace

TEST_CASE("train fits a model from synthetic logs with near-zero error") {
  TempDir dir("train");
  write_training_logs(dir.file("utils.csv"), dir.file("power.csv"), 400);

  TrainArgs args;
  args.utils_path = dir.file("utils.csv");
  args.power_path = dir.file("power.csv");
  args.out_path = dir.file("model.json");
  std::ostringstream out, err;
  int rc = run_train(args, out, err);
  INFO(err.str());
  CHECK(rc == kExitOk);
  CHECK(fs::exists(dir.file("model.json")));

  // printed held-out MAPE is essentially zero on noiseless logs
  std::string text = out.str();
  auto pos = text.find("held-out MAPE: ");
  REQUIRE(pos != std::string::npos);
  double printed_mape = std::stod(text.substr(pos + 15));
  CHECK(printed_mape < 0.1);

  PowerModel m = load_model(dir.file("model.json"));
  CHECK(m.p_static == doctest::Approx(30.0));
  CHECK(m.coeff_cpu == doctest::Approx(0.08));
}

TEST_CASE("train output is byte-identical for identical inputs and seed") {
  TempDir dir("train_idem");
  write_training_logs(dir.file("utils.csv"), dir.file("power.csv"), 100);
  TrainArgs args;
  args.utils_path = dir.file("utils.csv");
  args.power_path = dir.file("power.csv");
  args.solver = "gd";
  args.seed = 11;
  std::ostringstream out, err;
  args.out_path = dir.file("a.json");
  REQUIRE(run_train(args, out, err) == kExitOk);
  args.out_path = dir.file("b.json");
  REQUIRE(run_train(args, out, err) == kExitOk);
  CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));
}

TEST_CASE("train reports missing files as input errors") {
  TempDir dir("train_missing");
  write_training_logs(dir.file("utils.csv"), dir.file("power.csv"), 20);

  TrainArgs args;
  args.utils_path = dir.file("utils.csv");
  args.power_path = dir.file("nope.csv");
  args.out_path = dir.file("model.json");
  std::ostringstream out, err;
  CHECK(run_train(args, out, err) == kExitInput);
  CHECK(err.str().find("nope.csv") != std::string::npos);
}

TEST_CASE("train distinguishes data problems from input problems") {
  TempDir dir("train_data");
  // only 4 joinable rows -> InsufficientData
  write_training_logs(dir.file("utils.csv"), dir.file("power.csv"), 4);
  TrainArgs args;
  args.utils_path = dir.file("utils.csv");
  args.power_path = dir.file("power.csv");
  args.out_path = dir.file("model.json");
  std::ostringstream out, err;
  CHECK(run_train(args, out, err) == kExitData);

  // constant features -> SingularDesign for the closed-form solver
  {
    std::ofstream utils(dir.file("flat.csv"));
    std::ofstream power(dir.file("flat_power.csv"));
    utils << kUtilizationHeader << '\n';
    power << kPowerHeader << '\n';
    for (int t = 0; t <= 40; ++t) {
      utils << t << ",c1,100,50,1024,4096,0,0,0,0,10\n";
      power << t << ",38\n";
    }
  }
  args.utils_path = dir.file("flat.csv");
  args.power_path = dir.file("flat_power.csv");
  std::ostringstream out2, err2;
  CHECK(run_train(args, out2, err2) == kExitData);
  CHECK(err2.str().find("gd") != std::string::npos);
}

TEST_CASE("train rejects malformed rows with the line number") {
  TempDir dir("train_malformed");
  {
    std::ofstream utils(dir.file("utils.csv"));
    utils << kUtilizationHeader << '\n';
    utils << "0,c1,100,50,1024,4096,0,0,0,0,10\n";
    utils << "1,c1,not_a_number,50,1024,4096,0,0,0,0,10\n";
  }
  {
    std::ofstream power(dir.file("power.csv"));
    power << kPowerHeader << "\n0,38\n1,38\n";
  }
  TrainArgs args;
  args.utils_path = dir.file("utils.csv");
  args.power_path = dir.file("power.csv");
  args.out_path = dir.file("model.json");
  std::ostringstream out, err;
  CHECK(run_train(args, out, err) == kExitInput);
  CHECK(err.str().find("line 3") != std::string::npos);
  CHECK(err.str().find("utils.csv") != std::string::npos);
}

TEST_CASE("simulate with no capping writes outputs and records zero cap actions") {
  TempDir dir("sim_none");
  save_scenario(demo_scenario(CappingMode::None), dir.file("scenario.json"));
  save_model(make_model(30.0, 0.08, 0.04, 1e-8, 2e-8), dir.file("model.json"));

  CHECK(simulate(dir.file("scenario.json"), dir.file("model.json"), dir.file("out")) ==
        kExitOk);
  CHECK(fs::exists(dir.path / "out" / "events.jsonl"));
  CHECK(fs::exists(dir.path / "out" / "metrics.json"));
  CHECK(fs::exists(dir.path / "out" / "server_power.csv"));
  CHECK(fs::exists(dir.path / "out" / "workloads.csv"));
  CHECK(slurp(dir.file("out/actions.jsonl")).empty());
}

TEST_CASE("simulate is byte-identical across runs with the same seed") {
  TempDir dir("sim_det");
  // cap 95 forces a fallback placement and capping episodes; noise feeds rng
  Scenario s = demo_scenario(CappingMode::Targeted, "demo", 95.0);
  s.oracle.noise_rel = 0.015;
  s.oracle.noise_abs = 0.3;
  save_scenario(s, dir.file("scenario.json"));
  save_model(make_model(30.0, 0.08, 0.04, 1e-8, 2e-8), dir.file("model.json"));

  CHECK(simulate(dir.file("scenario.json"), dir.file("model.json"), dir.file("a")) == kExitOk);
  CHECK(simulate(dir.file("scenario.json"), dir.file("model.json"), dir.file("b")) == kExitOk);
  CHECK(slurp(dir.file("a/events.jsonl")) == slurp(dir.file("b/events.jsonl")));
  CHECK(slurp(dir.file("a/metrics.json")) == slurp(dir.file("b/metrics.json")));
  CHECK_FALSE(slurp(dir.file("a/events.jsonl")).empty());
}

TEST_CASE("a cap below static power pins the candidate at one core and still exits cleanly") {
  TempDir dir("sim_floor");
  Scenario s = scenario_skeleton(CappingMode::Targeted, 10, 1);
  s.name = "floor";
  s.cluster.servers = {make_server("s1", 8, 64 * kGiB, 10.0, 30.0)};  // cap < static
  s.cluster.pending = {make_container("c1", 2, kGiB, "w1")};
  s.workloads = {make_workload("w1", 100.0, 2)};
  save_scenario(s, dir.file("scenario.json"));
  save_model(make_model(30.0, 0.08, 0.04, 1e-8, 2e-8), dir.file("model.json"));

  CHECK(simulate(dir.file("scenario.json"), dir.file("model.json"), dir.file("out")) ==
        kExitOk);
  std::string actions = slurp(dir.file("out/actions.jsonl"));
  CHECK(actions.find("\"new_cores\":1") != std::string::npos);   // reduced to the floor
  CHECK(actions.find("no_action") != std::string::npos);         // then capping failure
  CHECK(actions.find("one-core floor") != std::string::npos);
}

TEST_CASE("simulate rejects malformed scenarios with a field path") {
  TempDir dir("sim_bad");
  {
    std::ofstream f(dir.file("scenario.json"));
    f << R"({"mode":"targeted","oracle":{"p_static":30,"coefficients":{"a":1,"b":0,"c":0,"d":0}},)"
      << R"("servers":[{"id":"s1","total_cores":4,"total_memory":1024}],)"
      << R"("containers":[],"workloads":[]})";
  }
  save_model(make_model(30.0, 0.08, 0.04, 0.0, 0.0), dir.file("model.json"));
  std::ostringstream out, err;
  CHECK(run_simulate({dir.file("scenario.json"), dir.file("model.json"), dir.file("out")}, out,
                     err) == kExitInput);
  CHECK(err.str().find("servers[0].power_cap") != std::string::npos);
}

TEST_CASE("report merges runs into one comparison table") {
  TempDir dir("report");
  save_model(make_model(30.0, 0.08, 0.04, 1e-8, 2e-8), dir.file("model.json"));
  save_scenario(demo_scenario(CappingMode::None), dir.file("none.json"));
  save_scenario(demo_scenario(CappingMode::Targeted), dir.file("targeted.json"));
  save_scenario(demo_scenario(CappingMode::FreqScale), dir.file("freqscale.json"));
  REQUIRE(simulate(dir.file("none.json"), dir.file("model.json"), dir.file("none")) == 0);
  REQUIRE(simulate(dir.file("targeted.json"), dir.file("model.json"), dir.file("targeted")) ==
          0);
  REQUIRE(simulate(dir.file("freqscale.json"), dir.file("model.json"),
                   dir.file("freqscale")) == 0);

  ReportArgs args;
  args.inputs = {dir.file("none/metrics.json"), dir.file("targeted/metrics.json"),
                 dir.file("freqscale/metrics.json")};
  args.out_path = dir.file("compare.csv");
  std::ostringstream out, err;
  CHECK(run_report(args, out, err) == kExitOk);

  std::string csv = slurp(dir.file("compare.csv"));
  // columns follow input order
  CHECK(csv.find("kind,id,demo/none,demo/targeted,demo/freqscale") == 0);
  CHECK(csv.find("workload_time,w1,") != std::string::npos);
  CHECK(csv.find("server_peak,s1,") != std::string::npos);
}

TEST_CASE("report rejects runs from different scenarios") {
  TempDir dir("report_mismatch");
  save_model(make_model(30.0, 0.08, 0.04, 1e-8, 2e-8), dir.file("model.json"));
  save_scenario(demo_scenario(CappingMode::None), dir.file("a.json"));

  Scenario other = demo_scenario(CappingMode::None, "other");
  other.cluster.pending.pop_back();
  other.workloads.pop_back();
  save_scenario(other, dir.file("b.json"));

  REQUIRE(simulate(dir.file("a.json"), dir.file("model.json"), dir.file("a")) == 0);
  REQUIRE(simulate(dir.file("b.json"), dir.file("model.json"), dir.file("b")) == 0);

  ReportArgs args;
  args.inputs = {dir.file("a/metrics.json"), dir.file("b/metrics.json")};
  args.out_path = dir.file("compare.csv");
  std::ostringstream out, err;
  CHECK(run_report(args, out, err) == kExitInput);
}

TEST_CASE("the installed binary wires the subcommands") {
  TempDir dir("binary");
  std::string bin = WATTCAP_CLI_BIN;
  int rc = std::system((bin + " train --utils /nonexistent.csv --power /nonexistent.csv "
                              "--out " +
                        dir.file("m.json") + " >/dev/null 2>&1")
                           .c_str());
  CHECK(WEXITSTATUS(rc) == kExitInput);

  save_scenario(demo_scenario(CappingMode::None), dir.file("scenario.json"));
  save_model(make_model(30.0, 0.08, 0.04, 1e-8, 2e-8), dir.file("model.json"));
  rc = std::system((bin + " simulate --scenario " + dir.file("scenario.json") + " --model " +
                    dir.file("model.json") + " --out-dir " + dir.file("out") +
                    " >/dev/null 2>&1")
                       .c_str());
  CHECK(WEXITSTATUS(rc) == kExitOk);
  CHECK(fs::exists(dir.path / "out" / "metrics.json"));
}
