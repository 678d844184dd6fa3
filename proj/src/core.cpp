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

#include "wattcap/core.hpp"

#include <json.hpp>

namespace wattcap {

using nlohmann::json;

MalformedRow::MalformedRow(int line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_no(line) {}

NegativeCounter::NegativeCounter(int line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_no(line) {}

NegativePower::NegativePower(int line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_no(line) {}

MissingStats::MissingStats(const std::string& container)
    : Error("no recent stats for container " + container), container_id(container) {}

NoCapacity::NoCapacity(const std::string& container)
    : Error("no server has enough cores/memory for container " + container),
      container_id(container) {}

DocumentError::DocumentError(const std::string& p, const std::string& what)
    : Error("at " + p + ": " + what), path(p) {}

int ServerState::used_cores() const {
  int used = 0;
  for (const auto& c : containers) used += c.alloc_cores;
  return used;
}

Bytes ServerState::used_memory() const {
  Bytes used = 0;
  for (const auto& c : containers) used += c.alloc_memory;
  return used;
}

Bytes ServerState::free_memory() const {
  Bytes used = used_memory();
  return used > total_memory ? 0 : total_memory - used;
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Placed: return "placed";
    case EventKind::ViolationDetected: return "violation_detected";
    case EventKind::Migrated: return "migrated";
    case EventKind::CoreReduced: return "core_reduced";
    case EventKind::Compensated: return "compensated";
    case EventKind::Finished: return "finished";
    case EventKind::PowerReading: return "power_reading";
  }
  return "unknown";
}

EventKind event_kind_from_string(const std::string& s) {
  if (s == "placed") return EventKind::Placed;
  if (s == "violation_detected") return EventKind::ViolationDetected;
  if (s == "migrated") return EventKind::Migrated;
  if (s == "core_reduced") return EventKind::CoreReduced;
  if (s == "compensated") return EventKind::Compensated;
  if (s == "finished") return EventKind::Finished;
  if (s == "power_reading") return EventKind::PowerReading;
  throw DocumentError("kind", "unknown event kind '" + s + "'");
}

void to_json(json& j, const UtilizationSample& v) {
  j = json{{"timestamp", v.timestamp}, {"container_id", v.container_id},
           {"cpu_pct", v.cpu_pct},     {"mem_pct", v.mem_pct},
           {"mem_used", v.mem_used},   {"mem_limit", v.mem_limit},
           {"net_rx", v.net_rx},       {"net_tx", v.net_tx},
           {"blk_read", v.blk_read},   {"blk_write", v.blk_write},
           {"pids", v.pids}};
}

void from_json(const json& j, UtilizationSample& v) {
  j.at("timestamp").get_to(v.timestamp);
  j.at("container_id").get_to(v.container_id);
  j.at("cpu_pct").get_to(v.cpu_pct);
  j.at("mem_pct").get_to(v.mem_pct);
  j.at("mem_used").get_to(v.mem_used);
  j.at("mem_limit").get_to(v.mem_limit);
  j.at("net_rx").get_to(v.net_rx);
  j.at("net_tx").get_to(v.net_tx);
  j.at("blk_read").get_to(v.blk_read);
  j.at("blk_write").get_to(v.blk_write);
  j.at("pids").get_to(v.pids);
}

void to_json(json& j, const PowerSample& v) {
  j = json{{"timestamp", v.timestamp}, {"watts", v.watts}};
}

void from_json(const json& j, PowerSample& v) {
  j.at("timestamp").get_to(v.timestamp);
  j.at("watts").get_to(v.watts);
}

void to_json(json& j, const FeatureVector& v) {
  j = json{{"ucpu", v.ucpu}, {"uram", v.uram}, {"udisk", v.udisk}, {"unet", v.unet}};
}

void from_json(const json& j, FeatureVector& v) {
  j.at("ucpu").get_to(v.ucpu);
  j.at("uram").get_to(v.uram);
  j.at("udisk").get_to(v.udisk);
  j.at("unet").get_to(v.unet);
}

void to_json(json& j, const JoinedRecord& v) {
  j = json{{"timestamp", v.timestamp},
           {"container_id", v.container_id},
           {"features", v.features},
           {"server_power", v.server_power}};
  if (v.container_power) j["container_power"] = *v.container_power;
}

void from_json(const json& j, JoinedRecord& v) {
  j.at("timestamp").get_to(v.timestamp);
  j.at("container_id").get_to(v.container_id);
  j.at("features").get_to(v.features);
  j.at("server_power").get_to(v.server_power);
  if (j.contains("container_power")) v.container_power = j.at("container_power").get<double>();
  else v.container_power.reset();
}

void to_json(json& j, const FeatureScale& v) {
  j = json{{"mean", v.mean}, {"std", v.std}};
}

void from_json(const json& j, FeatureScale& v) {
  j.at("mean").get_to(v.mean);
  j.at("std").get_to(v.std);
}

void to_json(json& j, const PowerModel& v) {
  j = json{{"p_static", v.p_static},
           {"coeff_cpu", v.coeff_cpu},
           {"coeff_ram", v.coeff_ram},
           {"coeff_disk", v.coeff_disk},
           {"coeff_net", v.coeff_net},
           {"feature_scale", v.feature_scale},
           {"solver", v.solver},
           {"learning_rate", v.learning_rate},
           {"epochs", v.epochs},
           {"seed", v.seed}};
}

void from_json(const json& j, PowerModel& v) {
  j.at("p_static").get_to(v.p_static);
  j.at("coeff_cpu").get_to(v.coeff_cpu);
  j.at("coeff_ram").get_to(v.coeff_ram);
  j.at("coeff_disk").get_to(v.coeff_disk);
  j.at("coeff_net").get_to(v.coeff_net);
  j.at("feature_scale").get_to(v.feature_scale);
  j.at("solver").get_to(v.solver);
  j.at("learning_rate").get_to(v.learning_rate);
  j.at("epochs").get_to(v.epochs);
  j.at("seed").get_to(v.seed);
}

void to_json(json& j, const WorkloadSpec& v) {
  j = json{{"id", v.id},
           {"total_cpu_work", v.total_cpu_work},
           {"max_parallelism", v.max_parallelism},
           {"mem_profile", v.mem_profile},
           {"disk_rate", v.disk_rate},
           {"net_rate", v.net_rate},
           {"done", v.done}};
}

void from_json(const json& j, WorkloadSpec& v) {
  j.at("id").get_to(v.id);
  j.at("total_cpu_work").get_to(v.total_cpu_work);
  j.at("max_parallelism").get_to(v.max_parallelism);
  j.at("mem_profile").get_to(v.mem_profile);
  j.at("disk_rate").get_to(v.disk_rate);
  j.at("net_rate").get_to(v.net_rate);
  j.at("done").get_to(v.done);
}

void to_json(json& j, const ContainerState& v) {
  j = json{{"id", v.id},
           {"class", v.class_name},
           {"alloc_cores", v.alloc_cores},
           {"alloc_memory", v.alloc_memory},
           {"image_size", v.image_size},
           {"workload", v.workload_id},
           {"pc", v.pc},
           {"placed_at", v.placed_at}};
}

void from_json(const json& j, ContainerState& v) {
  j.at("id").get_to(v.id);
  v.class_name = j.value("class", std::string{});
  j.at("alloc_cores").get_to(v.alloc_cores);
  j.at("alloc_memory").get_to(v.alloc_memory);
  v.image_size = j.value("image_size", Bytes{0});
  j.at("workload").get_to(v.workload_id);
  v.pc = j.value("pc", 0.0);
  v.placed_at = j.value("placed_at", Tick{0});
}

void to_json(json& j, const ServerState& v) {
  j = json{{"id", v.id},
           {"total_cores", v.total_cores},
           {"total_memory", v.total_memory},
           {"power_cap", v.power_cap},
           {"p_static", v.p_static},
           {"containers", v.containers},
           {"ps", v.ps},
           {"freq_factor", v.freq_factor}};
}

void from_json(const json& j, ServerState& v) {
  j.at("id").get_to(v.id);
  j.at("total_cores").get_to(v.total_cores);
  j.at("total_memory").get_to(v.total_memory);
  j.at("power_cap").get_to(v.power_cap);
  j.at("p_static").get_to(v.p_static);
  v.containers = j.value("containers", std::vector<ContainerState>{});
  v.ps = j.value("ps", 0.0);
  v.freq_factor = j.value("freq_factor", 1.0);
}

void to_json(json& j, const ClusterSpec& v) {
  j = json{{"servers", v.servers},
           {"pending", v.pending},
           {"detection_interval", v.detection_interval},
           {"rng_seed", v.rng_seed}};
}

void from_json(const json& j, ClusterSpec& v) {
  j.at("servers").get_to(v.servers);
  v.pending = j.value("pending", std::vector<ContainerState>{});
  v.detection_interval = j.value("detection_interval", Tick{300});
  v.rng_seed = j.value("rng_seed", std::uint64_t{0});
}

void to_json(json& j, const SimEvent& v) {
  j = json{{"tick", v.tick}, {"seq", v.seq}, {"kind", to_string(v.kind)}};
  for (const auto& [k, val] : v.num) j[k] = val;
  for (const auto& [k, val] : v.str) j[k] = val;
}

void from_json(const json& j, SimEvent& v) {
  v = SimEvent{};
  j.at("tick").get_to(v.tick);
  j.at("seq").get_to(v.seq);
  v.kind = event_kind_from_string(j.at("kind").get<std::string>());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "tick" || it.key() == "seq" || it.key() == "kind") continue;
    if (it->is_string()) v.str[it.key()] = it->get<std::string>();
    else v.num[it.key()] = it->get<double>();
  }
}

void to_json(json& j, const MetricsReport& v) {
  j = json{{"label", v.label},
           {"workload_execution_time", v.workload_execution_time},
           {"server_peak_power", v.server_peak_power},
           {"server_violation_ticks", v.server_violation_ticks},
           {"violation_ticks_total", v.violation_ticks_total},
           {"container_power_series", v.container_power_series}};
}

void from_json(const json& j, MetricsReport& v) {
  j.at("label").get_to(v.label);
  j.at("workload_execution_time").get_to(v.workload_execution_time);
  j.at("server_peak_power").get_to(v.server_peak_power);
  j.at("server_violation_ticks").get_to(v.server_violation_ticks);
  j.at("violation_ticks_total").get_to(v.violation_ticks_total);
  v.container_power_series =
      j.value("container_power_series", std::map<std::string, std::vector<Watts>>{});
}

}  // namespace wattcap
