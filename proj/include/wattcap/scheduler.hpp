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

#ifndef WATTCAP_SCHEDULER_HPP_
#define WATTCAP_SCHEDULER_HPP_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "wattcap/core.hpp"
#include "wattcap/powermodel.hpp"

namespace wattcap {

// ---------------------------------------------------------------------------
// Cap action log
// ---------------------------------------------------------------------------

struct MigrateAction {
  std::string container_id;
  std::string from_server;
  std::string to_server;
  Watts dest_ps = 0.0;  // destination power at decision time
  Watts pc = 0.0;       // candidate's predicted power at decision time

  bool operator==(const MigrateAction&) const = default;
};

struct ReduceCoresAction {
  std::string container_id;
  std::string server_id;
  int new_cores = 0;

  bool operator==(const ReduceCoresAction&) const = default;
};

struct CompensateAction {
  std::string container_id;
  std::string server_id;
  int new_cores = 0;

  bool operator==(const CompensateAction&) const = default;
};

struct NoActionEntry {
  std::string reason;
  std::string container_id;
  std::string server_id;

  bool operator==(const NoActionEntry&) const = default;
};

struct CapAction {
  Tick tick = 0;
  std::variant<MigrateAction, ReduceCoresAction, CompensateAction, NoActionEntry> action;

  bool operator==(const CapAction&) const = default;
};

using CapActionLog = std::vector<CapAction>;

void to_json(nlohmann::json& j, const CapAction& a);
void from_json(const nlohmann::json& j, CapAction& a);

// One compact JSON object per line, suitable for golden-file comparison.
void write_action_log(const CapActionLog& log, std::ostream& out);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Expected steady-state power of a container before it has produced stats:
// the model evaluated on the workload's profile at full allocation.
Watts profile_power(const ModelSet& models, const ContainerState& container,
                    const WorkloadSpec& workload);

using PlacementMap = std::map<std::string, std::string>;  // container id -> server id

// Power-capped first-fit placement. Containers are taken in list order; each
// goes to the first server (index order) where the tentative power ps + pc
// stays strictly below the cap and cores/memory fit. When no server passes
// the cap test, the container falls back to the feasible server with minimum
// ps (ties to the lowest index) and a NoAction entry records that
// power-capped placement was not possible.
// Requires pc to be set on every pending container (see profile_power).
// Throws NoCapacity when no server can physically host the container.
PlacementMap place_containers(std::vector<ServerState>& servers,
                              std::vector<ContainerState> pending, Tick tick,
                              CapActionLog& log);

struct Violation {
  std::size_t server_index = 0;
  std::string candidate_id;       // newest-placed container on the server
  Watts predicted_watts = 0.0;    // model-estimated total server power
};

// Estimates every container's power from its latest stats, refreshes pc/ps
// bookkeeping, and flags servers whose estimated total exceeds the cap
// (strictly). The candidate on a flagged server is the most recently placed
// container. Servers with no containers are never flagged.
// Throws MissingStats if a hosted container has no entry in the window.
std::vector<Violation> detect_violations(
    std::vector<ServerState>& servers, const ModelSet& models,
    const std::map<std::string, FeatureVector>& stats_window);

// Environment supplied by the caller for capping episodes. probe_power lets
// one settle tick elapse and returns the flagged server's refreshed power
// reading; stats returns a container's current features; now returns the
// current tick for action stamping.
struct CappingEnv {
  std::function<Watts()> probe_power;
  std::function<FeatureVector(const std::string&)> stats;
  std::function<Tick()> now;
};

struct CapOutcome {
  bool success = false;
  bool migrated = false;
  int cores_removed = 0;
};

// Applies power capping to a flagged server: first tries to migrate the
// candidate to a server where ps + pc stays strictly below that server's cap
// and capacity fits; otherwise reduces the candidate's cores one at a time,
// probing the server power after each reduction settles, until the power is
// within the cap or the one-core floor is reached (failure). Containers other
// than the candidate are never touched.
CapOutcome apply_power_cap(std::vector<ServerState>& servers, std::size_t flagged_index,
                           const std::string& candidate_id, Watts flagged_power,
                           const ModelSet& models, const CappingEnv& env, CapActionLog& log);

// Grants one core per removed core to a sibling container of the same
// workload on another server, as long as that server has a free core and its
// estimated power stays strictly below its cap after the grant. Partial or
// zero compensation is legal. Returns the number of cores granted.
int compensate(std::vector<ServerState>& servers, const std::string& workload_id,
               const std::string& reduced_id, int cores_removed, const ModelSet& models,
               const CappingEnv& env, CapActionLog& log);

}  // namespace wattcap

#endif  // WATTCAP_SCHEDULER_HPP_
