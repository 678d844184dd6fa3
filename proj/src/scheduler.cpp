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

#include "wattcap/scheduler.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

namespace wattcap {

using nlohmann::json;

void to_json(json& j, const CapAction& a) {
  j = json{{"tick", a.tick}};
  if (const auto* m = std::get_if<MigrateAction>(&a.action)) {
    j["kind"] = "migrate";
    j["container"] = m->container_id;
    j["from"] = m->from_server;
    j["to"] = m->to_server;
    j["dest_ps"] = m->dest_ps;
    j["pc"] = m->pc;
  } else if (const auto* r = std::get_if<ReduceCoresAction>(&a.action)) {
    j["kind"] = "reduce_cores";
    j["container"] = r->container_id;
    j["server"] = r->server_id;
    j["new_cores"] = r->new_cores;
  } else if (const auto* c = std::get_if<CompensateAction>(&a.action)) {
    j["kind"] = "compensate";
    j["container"] = c->container_id;
    j["server"] = c->server_id;
    j["new_cores"] = c->new_cores;
  } else {
    const auto& n = std::get<NoActionEntry>(a.action);
    j["kind"] = "no_action";
    j["reason"] = n.reason;
    if (!n.container_id.empty()) j["container"] = n.container_id;
    if (!n.server_id.empty()) j["server"] = n.server_id;
  }
}

void from_json(const json& j, CapAction& a) {
  a.tick = j.at("tick").get<Tick>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "migrate") {
    MigrateAction m;
    j.at("container").get_to(m.container_id);
    j.at("from").get_to(m.from_server);
    j.at("to").get_to(m.to_server);
    m.dest_ps = j.value("dest_ps", 0.0);
    m.pc = j.value("pc", 0.0);
    a.action = m;
  } else if (kind == "reduce_cores") {
    ReduceCoresAction r;
    j.at("container").get_to(r.container_id);
    j.at("server").get_to(r.server_id);
    j.at("new_cores").get_to(r.new_cores);
    a.action = r;
  } else if (kind == "compensate") {
    CompensateAction c;
    j.at("container").get_to(c.container_id);
    j.at("server").get_to(c.server_id);
    j.at("new_cores").get_to(c.new_cores);
    a.action = c;
  } else if (kind == "no_action") {
    NoActionEntry n;
    j.at("reason").get_to(n.reason);
    n.container_id = j.value("container", std::string{});
    n.server_id = j.value("server", std::string{});
    a.action = n;
  } else {
    throw DocumentError("kind", "unknown action kind '" + kind + "'");
  }
}

void write_action_log(const CapActionLog& log, std::ostream& out) {
  for (const auto& action : log) {
    json j = action;
    out << j.dump() << '\n';
  }
}

Watts profile_power(const ModelSet& models, const ContainerState& container,
                    const WorkloadSpec& workload) {
  FeatureVector f;
  f.ucpu = 100.0 * std::min(container.alloc_cores, workload.max_parallelism);
  f.uram = workload.mem_profile;
  f.udisk = workload.disk_rate;
  f.unet = workload.net_rate;
  return predict_container_power(models.model_for(container.class_name), f);
}

PlacementMap place_containers(std::vector<ServerState>& servers,
                              std::vector<ContainerState> pending, Tick tick,
                              CapActionLog& log) {
  PlacementMap placement;
  for (auto& container : pending) {
    container.placed_at = tick;

    auto fits = [&container](const ServerState& s) {
      return s.free_cores() >= container.alloc_cores &&
             s.free_memory() >= container.alloc_memory;
    };

    bool placed = false;
    for (auto& server : servers) {
      const Watts tentative = server.ps + container.pc;
      if (tentative < server.power_cap && fits(server)) {
        placement[container.id] = server.id;
        server.ps = tentative;
        server.containers.push_back(container);
        placed = true;
        break;
      }
    }
    if (placed) continue;

    // No server passes the cap test: fall back to the feasible server with
    // the lowest current power.
    ServerState* fallback = nullptr;
    for (auto& server : servers) {
      if (!fits(server)) continue;
      if (!fallback || server.ps < fallback->ps) fallback = &server;
    }
    if (!fallback) throw NoCapacity(container.id);

    log.push_back(CapAction{
        tick, NoActionEntry{"power-capped placement not possible", container.id, fallback->id}});
    placement[container.id] = fallback->id;
    fallback->ps += container.pc;
    fallback->containers.push_back(container);
  }
  return placement;
}

std::vector<Violation> detect_violations(
    std::vector<ServerState>& servers, const ModelSet& models,
    const std::map<std::string, FeatureVector>& stats_window) {
  std::vector<Violation> violations;
  for (std::size_t i = 0; i < servers.size(); ++i) {
    auto& server = servers[i];
    Watts total = server.p_static;
    for (auto& container : server.containers) {
      auto it = stats_window.find(container.id);
      if (it == stats_window.end()) throw MissingStats(container.id);
      container.pc =
          predict_container_power(models.model_for(container.class_name), it->second);
      total += container.pc;
    }
    server.ps = total;
    if (server.containers.empty() || total <= server.power_cap) continue;

    // Newest-placed container takes the blame; ties resolve to the most
    // recently appended one.
    const ContainerState* candidate = &server.containers.front();
    for (const auto& container : server.containers)
      if (container.placed_at >= candidate->placed_at) candidate = &container;
    violations.push_back(Violation{i, candidate->id, total});
  }
  return violations;
}

namespace {

Watts recompute_ps(ServerState& server) {
  Watts total = server.p_static;
  for (const auto& c : server.containers) total += c.pc;
  server.ps = total;
  return total;
}

}  // namespace

CapOutcome apply_power_cap(std::vector<ServerState>& servers, std::size_t flagged_index,
                           const std::string& candidate_id, Watts flagged_power,
                           const ModelSet& models, const CappingEnv& env, CapActionLog& log) {
  ServerState& flagged = servers[flagged_index];
  auto candidate_it =
      std::find_if(flagged.containers.begin(), flagged.containers.end(),
                   [&candidate_id](const ContainerState& c) { return c.id == candidate_id; });
  if (candidate_it == flagged.containers.end())
    throw Error("apply_power_cap: candidate " + candidate_id + " not on server " + flagged.id);

  // Migration first: any other server that keeps ps + pc strictly below its
  // own cap and has room receives the candidate.
  for (std::size_t j = 0; j < servers.size(); ++j) {
    if (j == flagged_index) continue;
    ServerState& dest = servers[j];
    if (dest.ps + candidate_it->pc < dest.power_cap &&
        dest.free_cores() >= candidate_it->alloc_cores &&
        dest.free_memory() >= candidate_it->alloc_memory) {
      log.push_back(CapAction{env.now(), MigrateAction{candidate_id, flagged.id, dest.id,
                                                       dest.ps, candidate_it->pc}});
      ContainerState moved = std::move(*candidate_it);
      flagged.containers.erase(candidate_it);
      moved.placed_at = env.now();
      dest.ps += moved.pc;
      dest.containers.push_back(std::move(moved));
      recompute_ps(flagged);
      return CapOutcome{true, true, 0};
    }
  }

  // Otherwise deallocate cores one per settle tick until the cap holds or the
  // one-core floor stops us.
  CapOutcome outcome;
  Watts power = flagged_power;
  while (power > flagged.power_cap) {
    if (candidate_it->alloc_cores <= 1) {
      log.push_back(CapAction{
          env.now(),
          NoActionEntry{"cap still exceeded at one-core floor", candidate_id, flagged.id}});
      return outcome;
    }
    candidate_it->alloc_cores -= 1;
    ++outcome.cores_removed;
    log.push_back(CapAction{
        env.now(), ReduceCoresAction{candidate_id, flagged.id, candidate_it->alloc_cores}});
    power = env.probe_power();
    candidate_it->pc = predict_container_power(models.model_for(candidate_it->class_name),
                                               env.stats(candidate_id));
    recompute_ps(flagged);
  }
  outcome.success = true;
  return outcome;
}

int compensate(std::vector<ServerState>& servers, const std::string& workload_id,
               const std::string& reduced_id, int cores_removed, const ModelSet& models,
               const CappingEnv& env, CapActionLog& log) {
  const ServerState* reduced_host = nullptr;
  for (const auto& server : servers)
    for (const auto& c : server.containers)
      if (c.id == reduced_id) reduced_host = &server;

  int granted = 0;
  for (int i = 0; i < cores_removed; ++i) {
    bool found = false;
    for (auto& server : servers) {
      if (reduced_host && server.id == reduced_host->id) continue;
      if (server.free_cores() < 1) continue;
      for (auto& sibling : server.containers) {
        if (sibling.workload_id != workload_id || sibling.id == reduced_id) continue;
        const PowerModel& model = models.model_for(sibling.class_name);
        FeatureVector f = env.stats(sibling.id);
        FeatureVector bumped = f;
        bumped.ucpu += 100.0;
        const Watts delta =
            predict_container_power(model, bumped) - predict_container_power(model, f);
        if (server.ps + delta >= server.power_cap) continue;
        sibling.alloc_cores += 1;
        sibling.pc += delta;
        server.ps += delta;
        ++granted;
        log.push_back(CapAction{
            env.now(), CompensateAction{sibling.id, server.id, sibling.alloc_cores}});
        found = true;
        break;
      }
      if (found) break;
    }
    if (!found) break;
  }
  return granted;
}

}  // namespace wattcap
