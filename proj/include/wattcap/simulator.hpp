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

#ifndef WATTCAP_SIMULATOR_HPP_
#define WATTCAP_SIMULATOR_HPP_

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wattcap/core.hpp"
#include "wattcap/powermodel.hpp"
#include "wattcap/scheduler.hpp"

namespace wattcap {

// How the cluster reacts to power cap violations.
//   None      - detect only, never act (the no-cap baseline).
//   Targeted  - migrate or deallocate cores of the one violating container.
//   FreqScale - lower the whole server's frequency factor, degrading every
//               container on it (the hardware-capping analogue).
enum class CappingMode { None, Targeted, FreqScale };

std::string to_string(CappingMode m);
CappingMode capping_mode_from_string(const std::string& s);

struct ClassCoefficients {
  double a = 0.0;  // W per percent CPU
  double b = 0.0;  // W per percent RAM
  double c = 0.0;  // W per byte/s disk
  double d = 0.0;  // W per byte/s net

  bool operator==(const ClassCoefficients&) const = default;
};

// Ground truth of the simulated cluster. True server power is the static term
// plus the per-class linear combination of each container's features; the
// measured reading adds Gaussian meter noise with sigma = noise_rel * true +
// noise_abs. With noise zeroed, measured equals true exactly.
struct OracleCoefficients {
  Watts p_static = 0.0;  // default server static power
  ClassCoefficients default_coeffs;
  std::map<std::string, ClassCoefficients> class_coeffs;
  double noise_rel = 0.015;
  Watts noise_abs = 0.3;
  std::uint64_t seed = 0;

  const ClassCoefficients& coeffs_for(const std::string& class_name) const;

  bool operator==(const OracleCoefficients&) const = default;
};

struct SimConfig {
  // tick length is fixed at one second
  Tick detection_interval = 300;
  double migration_fixed = 5.0;         // s
  double migration_rate = 104857600.0;  // bytes/s
  double dealloc_delay = 0.18;          // s, independent of container size
  CappingMode mode = CappingMode::None;
  double freq_step = 0.1;
  double min_freq_factor = 0.1;
  bool compensation = true;

  bool operator==(const SimConfig&) const = default;
};

struct Scenario {
  std::string name;
  ClusterSpec cluster;
  std::vector<WorkloadSpec> workloads;
  SimConfig config;
  OracleCoefficients oracle;

  bool operator==(const Scenario&) const = default;
};

// Time a container stays frozen while being checkpointed and moved.
double migration_time(Bytes image_size, const SimConfig& cfg);

// True and measured power of one server given the current per-container
// features. The frequency factor scales the dynamic term only (it is 1.0
// unless the FreqScale baseline lowered it).
std::pair<Watts, Watts> oracle_power(const ServerState& server,
                                     const std::map<std::string, FeatureVector>& features,
                                     const OracleCoefficients& oracle, std::mt19937_64& rng);

// True power of a single container under the oracle.
Watts oracle_container_power(const OracleCoefficients& oracle, const std::string& class_name,
                             const FeatureVector& f, double freq_factor);

struct RunResult {
  MetricsReport metrics;
  std::vector<SimEvent> events;
  CapActionLog actions;
};

// Drives the whole scenario: places pending containers, advances one-second
// ticks until every workload completes, runs violation detection at the
// configured cadence and applies the configured capping response. The event
// stream is totally ordered by (tick, seq) and identical across runs with the
// same seed.
// Throws NonTermination when a workload makes no progress for
// 10 * detection_interval ticks.
RunResult run(const Scenario& scenario, const ModelSet& models);

// Builds a model set whose consolidated model mirrors the oracle exactly
// (useful when a scenario should be driven by perfect estimates).
ModelSet oracle_model_set(const OracleCoefficients& oracle, Watts server_p_static);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

void to_json(nlohmann::json& j, const Scenario& s);
void from_json(const nlohmann::json& j, Scenario& s);

}  // namespace wattcap

#endif  // WATTCAP_SIMULATOR_HPP_
