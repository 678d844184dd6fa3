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

#ifndef WATTCAP_CORE_HPP_
#define WATTCAP_CORE_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace wattcap {

using Watts = double;
using Bytes = std::uint64_t;
using Tick = std::int64_t;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedRow : Error {
  MalformedRow(int line, const std::string& what);
  int line_no;
};

struct NegativeCounter : Error {
  NegativeCounter(int line, const std::string& what);
  int line_no;
};

struct NegativePower : Error {
  NegativePower(int line, const std::string& what);
  int line_no;
};

struct CounterRegression : Error {
  using Error::Error;
};

struct InsufficientData : Error {
  using Error::Error;
};

struct SingularDesign : Error {
  using Error::Error;
};

struct EmptyInput : Error {
  using Error::Error;
};

struct ZeroActual : Error {
  using Error::Error;
};

struct MissingStats : Error {
  explicit MissingStats(const std::string& container);
  std::string container_id;
};

struct NoCapacity : Error {
  explicit NoCapacity(const std::string& container);
  std::string container_id;
};

struct NonTermination : Error {
  using Error::Error;
};

// Raised by document loaders; `path` points at the offending field,
// e.g. "servers[1].total_cores".
struct DocumentError : Error {
  DocumentError(const std::string& path, const std::string& what);
  std::string path;
};

// ---------------------------------------------------------------------------
// Trace samples
// ---------------------------------------------------------------------------

// One row of a container utilization log. Percentages follow the docker-stats
// convention: cpu_pct is summed across cores (0..100 per allocated core),
// byte counters are cumulative since container start.
struct UtilizationSample {
  Tick timestamp = 0;  // seconds since scenario start
  std::string container_id;
  double cpu_pct = 0.0;
  double mem_pct = 0.0;
  Bytes mem_used = 0;
  Bytes mem_limit = 0;
  Bytes net_rx = 0;
  Bytes net_tx = 0;
  Bytes blk_read = 0;
  Bytes blk_write = 0;
  int pids = 0;  // collected but not used by the power model

  bool operator==(const UtilizationSample&) const = default;
};

// One reading of the server-wide power meter.
struct PowerSample {
  Tick timestamp = 0;
  Watts watts = 0.0;

  bool operator==(const PowerSample&) const = default;
};

// The four utilization factors feeding the linear power model.
// ucpu/uram are instantaneous percentages, udisk/unet are rates derived by
// first-differencing cumulative counters.
struct FeatureVector {
  double ucpu = 0.0;   // percent, summed across cores
  double uram = 0.0;   // percent of allocated memory
  double udisk = 0.0;  // bytes/s
  double unet = 0.0;   // bytes/s

  bool operator==(const FeatureVector&) const = default;
};

// A utilization sample matched with a power reading and reduced to features.
// container_power is only present in simulation, where the ground truth
// oracle exposes it.
struct JoinedRecord {
  Tick timestamp = 0;
  std::string container_id;
  FeatureVector features;
  Watts server_power = 0.0;  // label
  std::optional<Watts> container_power;

  bool operator==(const JoinedRecord&) const = default;
};

// ---------------------------------------------------------------------------
// Power model
// ---------------------------------------------------------------------------

struct FeatureScale {
  double mean = 0.0;
  double std = 1.0;

  bool operator==(const FeatureScale&) const = default;
};

// Learned linear model: server power = p_static + coeff . features.
// Coefficients are always stored in raw feature space, so the dynamic term is
// exactly zero on an all-zero feature vector; feature_scale records the
// standardization used during gradient-descent training (identity for the
// closed-form solver).
struct PowerModel {
  Watts p_static = 0.0;
  double coeff_cpu = 0.0;   // W per percent
  double coeff_ram = 0.0;   // W per percent
  double coeff_disk = 0.0;  // W per byte/s
  double coeff_net = 0.0;   // W per byte/s
  std::array<FeatureScale, 4> feature_scale{};

  // solver metadata
  std::string solver = "closed";
  double learning_rate = 0.01;
  int epochs = 2000;
  std::uint64_t seed = 0;

  bool operator==(const PowerModel&) const = default;
};

// ---------------------------------------------------------------------------
// Cluster state
// ---------------------------------------------------------------------------

// Synthetic stand-in for a benchmark that executes to completion. Work is a
// shared pool per workload id: every container attached to the workload
// drains it at min(alloc_cores * freq_factor, max_parallelism) core-seconds
// per tick, which is what makes core compensation on a sibling container
// restore aggregate throughput.
struct WorkloadSpec {
  std::string id;
  double total_cpu_work = 0.0;  // core-seconds
  int max_parallelism = 1;      // per-container ceiling
  double mem_profile = 0.0;     // percent of allocation used while running
  double disk_rate = 0.0;       // bytes/s while running
  double net_rate = 0.0;        // bytes/s while running
  bool done = false;

  bool operator==(const WorkloadSpec&) const = default;
};

struct ContainerState {
  std::string id;
  std::string class_name;  // power-model key; empty selects the consolidated model
  int alloc_cores = 1;
  Bytes alloc_memory = 0;
  Bytes image_size = 0;  // drives migration time
  std::string workload_id;
  Watts pc = 0.0;      // last estimated power
  Tick placed_at = 0;  // identifies the newest-placed candidate

  bool operator==(const ContainerState&) const = default;
};

struct ServerState {
  std::string id;
  int total_cores = 0;
  Bytes total_memory = 0;
  Watts power_cap = 0.0;
  Watts p_static = 0.0;  // measured idle draw, also the oracle's static term
  std::vector<ContainerState> containers;
  Watts ps = 0.0;            // last computed total power
  double freq_factor = 1.0;  // stays 1.0 unless the frequency-scaling baseline is active

  int used_cores() const;
  Bytes used_memory() const;
  int free_cores() const { return total_cores - used_cores(); }
  Bytes free_memory() const;

  bool operator==(const ServerState&) const = default;
};

struct ClusterSpec {
  std::vector<ServerState> servers;
  std::vector<ContainerState> pending;
  Tick detection_interval = 300;
  std::uint64_t rng_seed = 0;

  bool operator==(const ClusterSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Simulation output
// ---------------------------------------------------------------------------

enum class EventKind {
  Placed,
  ViolationDetected,
  Migrated,
  CoreReduced,
  Compensated,
  Finished,
  PowerReading,
};

std::string to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& s);

// One entry of the simulation event stream, totally ordered by (tick, seq)
// and identical across runs with the same seed. The payload layout depends on
// the kind; see simulator.cpp.
struct SimEvent {
  Tick tick = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::PowerReading;

  // Payload is kept as flat string->value maps so event lines serialize
  // byte-identically across runs.
  std::map<std::string, double> num;
  std::map<std::string, std::string> str;

  bool operator==(const SimEvent&) const = default;
};

struct MetricsReport {
  std::string label;  // scenario name + capping mode, used by report comparison
  std::map<std::string, Tick> workload_execution_time;
  std::map<std::string, Watts> server_peak_power;           // true watts
  std::map<std::string, Tick> server_violation_ticks;       // ticks with true power > cap
  Tick violation_ticks_total = 0;
  std::map<std::string, std::vector<Watts>> container_power_series;  // true watts per tick

  bool operator==(const MetricsReport&) const = default;
};

// ---------------------------------------------------------------------------
// Serialization (one human-readable structured format: JSON)
// ---------------------------------------------------------------------------

void to_json(nlohmann::json& j, const UtilizationSample& v);
void from_json(const nlohmann::json& j, UtilizationSample& v);
void to_json(nlohmann::json& j, const PowerSample& v);
void from_json(const nlohmann::json& j, PowerSample& v);
void to_json(nlohmann::json& j, const FeatureVector& v);
void from_json(const nlohmann::json& j, FeatureVector& v);
void to_json(nlohmann::json& j, const JoinedRecord& v);
void from_json(const nlohmann::json& j, JoinedRecord& v);
void to_json(nlohmann::json& j, const FeatureScale& v);
void from_json(const nlohmann::json& j, FeatureScale& v);
void to_json(nlohmann::json& j, const PowerModel& v);
void from_json(const nlohmann::json& j, PowerModel& v);
void to_json(nlohmann::json& j, const WorkloadSpec& v);
void from_json(const nlohmann::json& j, WorkloadSpec& v);
void to_json(nlohmann::json& j, const ContainerState& v);
void from_json(const nlohmann::json& j, ContainerState& v);
void to_json(nlohmann::json& j, const ServerState& v);
void from_json(const nlohmann::json& j, ServerState& v);
void to_json(nlohmann::json& j, const ClusterSpec& v);
void from_json(const nlohmann::json& j, ClusterSpec& v);
void to_json(nlohmann::json& j, const SimEvent& v);
void from_json(const nlohmann::json& j, SimEvent& v);
void to_json(nlohmann::json& j, const MetricsReport& v);
void from_json(const nlohmann::json& j, MetricsReport& v);

}  // namespace wattcap

#endif  // WATTCAP_CORE_HPP_
