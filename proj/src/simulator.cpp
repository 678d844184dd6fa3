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

#include "wattcap/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

namespace wattcap {

using nlohmann::json;

std::string to_string(CappingMode m) {
  switch (m) {
    case CappingMode::None: return "none";
    case CappingMode::Targeted: return "targeted";
    case CappingMode::FreqScale: return "freqscale";
  }
  return "none";
}

CappingMode capping_mode_from_string(const std::string& s) {
  if (s == "none") return CappingMode::None;
  if (s == "targeted") return CappingMode::Targeted;
  if (s == "freqscale") return CappingMode::FreqScale;
  throw DocumentError("mode", "unknown capping mode '" + s +
                                  "' (expected none, targeted or freqscale)");
}

const ClassCoefficients& OracleCoefficients::coeffs_for(const std::string& class_name) const {
  auto it = class_coeffs.find(class_name);
  return it == class_coeffs.end() ? default_coeffs : it->second;
}

double migration_time(Bytes image_size, const SimConfig& cfg) {
  return cfg.migration_fixed + static_cast<double>(image_size) / cfg.migration_rate;
}

Watts oracle_container_power(const OracleCoefficients& oracle, const std::string& class_name,
                             const FeatureVector& f, double freq_factor) {
  const ClassCoefficients& k = oracle.coeffs_for(class_name);
  return freq_factor * (k.a * f.ucpu + k.b * f.uram + k.c * f.udisk + k.d * f.unet);
}

std::pair<Watts, Watts> oracle_power(const ServerState& server,
                                     const std::map<std::string, FeatureVector>& features,
                                     const OracleCoefficients& oracle, std::mt19937_64& rng) {
  Watts true_watts = server.p_static;
  for (const auto& container : server.containers) {
    auto it = features.find(container.id);
    if (it == features.end()) continue;
    true_watts +=
        oracle_container_power(oracle, container.class_name, it->second, server.freq_factor);
  }
  Watts measured = true_watts;
  const double sigma = oracle.noise_rel * true_watts + oracle.noise_abs;
  if (sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma);
    measured = std::max(0.0, true_watts + noise(rng));
  }
  return {true_watts, measured};
}

ModelSet oracle_model_set(const OracleCoefficients& oracle, Watts server_p_static) {
  PowerModel model;
  model.p_static = server_p_static;
  model.coeff_cpu = oracle.default_coeffs.a;
  model.coeff_ram = oracle.default_coeffs.b;
  model.coeff_disk = oracle.default_coeffs.c;
  model.coeff_net = oracle.default_coeffs.d;
  ModelSet models(model);
  for (const auto& [name, k] : oracle.class_coeffs) {
    PowerModel m = model;
    m.coeff_cpu = k.a;
    m.coeff_ram = k.b;
    m.coeff_disk = k.c;
    m.coeff_net = k.d;
    models.set_class_model(name, m);
  }
  return models;
}

// ---------------------------------------------------------------------------
// World
// ---------------------------------------------------------------------------

namespace {

class World {
 public:
  World(const Scenario& scenario, const ModelSet& models)
      : scn_(scenario), models_(models), rng_(scenario.oracle.seed) {
    for (auto& w : scn_.workloads) workload_index_[w.id] = &w;
  }

  RunResult run() {
    setup();
    while (!all_done()) {
      advance_one_tick();
      if (scn_.config.detection_interval > 0 && tick_ % scn_.config.detection_interval == 0)
        detect_and_respond();
    }
    finalize();
    return RunResult{std::move(metrics_), std::move(events_), std::move(actions_)};
  }

 private:
  std::vector<ServerState>& servers() { return scn_.cluster.servers; }

  WorkloadSpec& workload(const std::string& id) { return *workload_index_.at(id); }

  bool all_done() const {
    return std::all_of(scn_.workloads.begin(), scn_.workloads.end(),
                       [](const WorkloadSpec& w) { return w.done; });
  }

  SimEvent& emit(EventKind kind) {
    SimEvent e;
    e.tick = tick_;
    e.seq = seq_++;
    e.kind = kind;
    events_.push_back(std::move(e));
    return events_.back();
  }

  void setup() {
    // Power profile of every pending container, then power-capped placement.
    std::vector<ContainerState> pending = scn_.cluster.pending;
    for (auto& c : pending)
      c.pc = profile_power(models_, c, workload(c.workload_id));
    PlacementMap placement = place_containers(servers(), pending, 0, actions_);
    for (const auto& c : pending) {
      auto& e = emit(EventKind::Placed);
      e.str["container"] = c.id;
      e.str["server"] = placement.at(c.id);
      e.num["pc"] = c.pc;
    }

    for (const auto& server : servers())
      for (const auto& c : server.containers) features_[c.id] = FeatureVector{};

    for (auto& w : scn_.workloads) {
      last_progress_[w.id] = 0;
      if (w.total_cpu_work <= 0.0 && !w.done) {
        w.done = true;
        finish_tick_[w.id] = 0;
        auto& e = emit(EventKind::Finished);
        e.str["workload"] = w.id;
        e.num["execution_time"] = 0.0;
      } else if (w.done) {
        finish_tick_[w.id] = 0;
      }
    }

    sample_power();
  }

  // Fraction of the tick (tick-1, tick] during which a container is not
  // frozen by a pending migration or deallocation delay.
  double available_fraction(const std::string& container_id) const {
    auto it = freeze_until_.find(container_id);
    if (it == freeze_until_.end()) return 1.0;
    const double t = static_cast<double>(tick_);
    return std::clamp(t - std::max(t - 1.0, it->second), 0.0, 1.0);
  }

  void advance_one_tick() {
    ++tick_;

    for (auto& server : servers()) {
      for (auto& container : server.containers) {
        WorkloadSpec& w = workload(container.workload_id);
        FeatureVector f;
        if (!w.done) {
          const double avail = available_fraction(container.id);
          const double rate = std::min(container.alloc_cores * server.freq_factor,
                                       static_cast<double>(w.max_parallelism));
          const double consumed = std::min(rate * avail, w.total_cpu_work);
          w.total_cpu_work -= consumed;
          if (consumed > 0.0) last_progress_[w.id] = tick_;
          f.ucpu = 100.0 * consumed;
          f.uram = avail > 0.0 ? w.mem_profile : 0.0;
          f.udisk = w.disk_rate * avail;
          f.unet = w.net_rate * avail;
          if (w.total_cpu_work <= 0.0) {
            w.total_cpu_work = 0.0;
            w.done = true;
            finish_tick_[w.id] = tick_;
            auto& e = emit(EventKind::Finished);
            e.str["workload"] = w.id;
            e.num["execution_time"] = static_cast<double>(tick_);
          }
        }
        features_[container.id] = f;
      }
    }

    sample_power();

    for (const auto& w : scn_.workloads) {
      if (w.done) continue;
      if (tick_ - last_progress_.at(w.id) > 10 * scn_.config.detection_interval)
        throw NonTermination("workload " + w.id + " made no progress for " +
                             std::to_string(10 * scn_.config.detection_interval) + " ticks");
    }
  }

  void sample_power() {
    for (auto& server : servers()) {
      auto [true_watts, measured] = oracle_power(server, features_, scn_.oracle, rng_);
      last_true_[server.id] = true_watts;
      last_measured_[server.id] = measured;

      auto& e = emit(EventKind::PowerReading);
      e.str["server"] = server.id;
      e.num["watts_true"] = true_watts;
      e.num["watts_measured"] = measured;
      e.num["freq_factor"] = server.freq_factor;

      auto& peak = metrics_.server_peak_power[server.id];
      peak = std::max(peak, true_watts);
      metrics_.server_violation_ticks.try_emplace(server.id, 0);
      if (true_watts > server.power_cap) {
        ++metrics_.server_violation_ticks[server.id];
        ++metrics_.violation_ticks_total;
      }
      for (const auto& container : server.containers)
        metrics_.container_power_series[container.id].push_back(oracle_container_power(
            scn_.oracle, container.class_name, features_.at(container.id),
            server.freq_factor));
    }
  }

  // Turns action-log entries appended since the last flush into events,
  // applying migration and deallocation freeze times as they appear.
  void flush_actions() {
    for (; action_watermark_ < actions_.size(); ++action_watermark_) {
      const CapAction& action = actions_[action_watermark_];
      if (const auto* m = std::get_if<MigrateAction>(&action.action)) {
        const double duration = migration_time(find_container(m->container_id).image_size,
                                               scn_.config);
        freeze_until_[m->container_id] =
            std::max(freeze_until_[m->container_id], static_cast<double>(tick_) + duration);
        auto& e = emit(EventKind::Migrated);
        e.str["container"] = m->container_id;
        e.str["from"] = m->from_server;
        e.str["to"] = m->to_server;
        e.num["duration_s"] = duration;
        e.num["dest_ps"] = m->dest_ps;
        e.num["pc"] = m->pc;
      } else if (const auto* r = std::get_if<ReduceCoresAction>(&action.action)) {
        freeze_until_[r->container_id] =
            std::max(freeze_until_[r->container_id],
                     static_cast<double>(tick_) + scn_.config.dealloc_delay);
        auto& e = emit(EventKind::CoreReduced);
        e.str["container"] = r->container_id;
        e.str["server"] = r->server_id;
        e.num["new_cores"] = r->new_cores;
      } else if (const auto* c = std::get_if<CompensateAction>(&action.action)) {
        auto& e = emit(EventKind::Compensated);
        e.str["container"] = c->container_id;
        e.str["server"] = c->server_id;
        e.num["new_cores"] = c->new_cores;
      }
      // NoAction entries stay in the action log only.
    }
  }

  ContainerState& find_container(const std::string& id) {
    for (auto& server : servers())
      for (auto& c : server.containers)
        if (c.id == id) return c;
    throw Error("container " + id + " not found in cluster");
  }

  static const ContainerState* newest_placed(const ServerState& server) {
    const ContainerState* newest = nullptr;
    for (const auto& c : server.containers)
      if (!newest || c.placed_at >= newest->placed_at) newest = &c;
    return newest;
  }

  void detect_and_respond() {
    std::vector<Violation> violations = detect_violations(servers(), models_, features_);
    for (const auto& v : violations) {
      auto& e = emit(EventKind::ViolationDetected);
      e.str["server"] = servers()[v.server_index].id;
      e.str["candidate"] = v.candidate_id;
      e.num["predicted_watts"] = v.predicted_watts;
    }
    if (scn_.config.mode == CappingMode::Targeted) {
      for (const auto& v : violations) respond_targeted(v.server_index);
    } else if (scn_.config.mode == CappingMode::FreqScale) {
      for (const auto& v : violations) respond_freqscale(v.server_index);
    }
  }

  CappingEnv make_env(std::size_t server_index) {
    return CappingEnv{
        [this, server_index]() {
          flush_actions();
          advance_one_tick();
          return last_measured_.at(servers()[server_index].id);
        },
        [this](const std::string& id) { return features_.at(id); },
        [this]() { return tick_; },
    };
  }

  void respond_targeted(std::size_t server_index) {
    ServerState& server = servers()[server_index];
    // Earlier episodes this round may have shifted containers; re-validate.
    if (server.containers.empty() || server.ps <= server.power_cap) return;
    const ContainerState* candidate = newest_placed(server);
    const std::string candidate_id = candidate->id;
    const std::string workload_id = candidate->workload_id;

    CappingEnv env = make_env(server_index);
    CapOutcome outcome = apply_power_cap(servers(), server_index, candidate_id, server.ps,
                                         models_, env, actions_);
    flush_actions();
    if (outcome.success && outcome.cores_removed > 0 && scn_.config.compensation) {
      compensate(servers(), workload_id, candidate_id, outcome.cores_removed, models_, env,
                 actions_);
      flush_actions();
    }
  }

  void respond_freqscale(std::size_t server_index) {
    ServerState& server = servers()[server_index];
    if (server.ps <= server.power_cap) return;
    Watts measured = last_measured_.at(server.id);
    while (measured > server.power_cap &&
           server.freq_factor > scn_.config.min_freq_factor + 1e-12) {
      server.freq_factor =
          std::max(scn_.config.min_freq_factor, server.freq_factor - scn_.config.freq_step);
      advance_one_tick();
      measured = last_measured_.at(server.id);
    }
  }

  void finalize() {
    metrics_.label = scn_.name.empty() ? to_string(scn_.config.mode)
                                       : scn_.name + "/" + to_string(scn_.config.mode);
    for (const auto& w : scn_.workloads)
      metrics_.workload_execution_time[w.id] = finish_tick_.at(w.id);
  }

  Scenario scn_;
  ModelSet models_;
  std::map<std::string, WorkloadSpec*> workload_index_;
  std::mt19937_64 rng_;

  Tick tick_ = 0;
  std::uint64_t seq_ = 0;
  std::map<std::string, FeatureVector> features_;
  std::map<std::string, double> freeze_until_;
  std::map<std::string, Watts> last_true_;
  std::map<std::string, Watts> last_measured_;
  std::map<std::string, Tick> last_progress_;
  std::map<std::string, Tick> finish_tick_;

  MetricsReport metrics_;
  std::vector<SimEvent> events_;
  CapActionLog actions_;
  std::size_t action_watermark_ = 0;
};

}  // namespace

RunResult run(const Scenario& scenario, const ModelSet& models) {
  World world(scenario, models);
  return world.run();
}

// ---------------------------------------------------------------------------
// Scenario document
// ---------------------------------------------------------------------------

namespace {

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw DocumentError(path.empty() ? "(root)" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end())
    throw DocumentError(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string field_path(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

double get_num(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw DocumentError(field_path(path, key), "expected a number");
  return v.get<double>();
}

double opt_num(const json& j, const char* key, const std::string& path, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw DocumentError(field_path(path, key), "expected a number");
  return v.get<double>();
}

std::string get_str(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) throw DocumentError(field_path(path, key), "expected a string");
  return v.get<std::string>();
}

ClassCoefficients parse_coeffs(const json& j, const std::string& path) {
  ClassCoefficients k;
  k.a = get_num(j, "a", path);
  k.b = get_num(j, "b", path);
  k.c = get_num(j, "c", path);
  k.d = get_num(j, "d", path);
  return k;
}

void validate_scenario(const Scenario& s) {
  std::set<std::string> ids;
  for (std::size_t i = 0; i < s.cluster.servers.size(); ++i) {
    const auto& server = s.cluster.servers[i];
    const std::string path = "servers[" + std::to_string(i) + "]";
    if (!ids.insert(server.id).second) throw DocumentError(path + ".id", "duplicate server id");
    if (server.total_cores < 0) throw DocumentError(path + ".total_cores", "must be >= 0");
    if (server.power_cap < 0) throw DocumentError(path + ".power_cap", "must be >= 0");
  }
  std::set<std::string> workload_ids;
  for (std::size_t i = 0; i < s.workloads.size(); ++i) {
    const auto& w = s.workloads[i];
    const std::string path = "workloads[" + std::to_string(i) + "]";
    if (!workload_ids.insert(w.id).second)
      throw DocumentError(path + ".id", "duplicate workload id");
    if (w.total_cpu_work < 0) throw DocumentError(path + ".total_cpu_work", "must be >= 0");
    if (w.max_parallelism < 0) throw DocumentError(path + ".max_parallelism", "must be >= 0");
  }
  std::set<std::string> container_ids;
  for (std::size_t i = 0; i < s.cluster.pending.size(); ++i) {
    const auto& c = s.cluster.pending[i];
    const std::string path = "containers[" + std::to_string(i) + "]";
    if (!container_ids.insert(c.id).second)
      throw DocumentError(path + ".id", "duplicate container id");
    if (c.alloc_cores < 1) throw DocumentError(path + ".alloc_cores", "must be >= 1");
    if (!workload_ids.count(c.workload_id))
      throw DocumentError(path + ".workload", "references unknown workload '" + c.workload_id +
                                                  "'");
  }
  if (s.config.detection_interval < 1)
    throw DocumentError("detection_interval", "must be >= 1");
  if (s.config.freq_step <= 0.0 || s.config.freq_step > 1.0)
    throw DocumentError("freq_step", "must be in (0, 1]");
  if (s.config.min_freq_factor <= 0.0 || s.config.min_freq_factor > 1.0)
    throw DocumentError("min_freq_factor", "must be in (0, 1]");
  if (s.config.migration_rate <= 0.0) throw DocumentError("migration_rate_bps", "must be > 0");
  if (s.config.migration_fixed < 0.0) throw DocumentError("migration_fixed_s", "must be >= 0");
  if (s.config.dealloc_delay < 0.0) throw DocumentError("dealloc_delay_s", "must be >= 0");
  if (s.oracle.noise_rel < 0.0) throw DocumentError("oracle.noise_rel", "must be >= 0");
  if (s.oracle.noise_abs < 0.0) throw DocumentError("oracle.noise_abs", "must be >= 0");
}

}  // namespace

void to_json(json& j, const Scenario& s) {
  json oracle{{"p_static", s.oracle.p_static},
              {"noise_rel", s.oracle.noise_rel},
              {"noise_abs", s.oracle.noise_abs},
              {"coefficients",
               {{"a", s.oracle.default_coeffs.a},
                {"b", s.oracle.default_coeffs.b},
                {"c", s.oracle.default_coeffs.c},
                {"d", s.oracle.default_coeffs.d}}}};
  if (!s.oracle.class_coeffs.empty()) {
    json classes = json::object();
    for (const auto& [name, k] : s.oracle.class_coeffs)
      classes[name] = {{"a", k.a}, {"b", k.b}, {"c", k.c}, {"d", k.d}};
    oracle["classes"] = classes;
  }

  json servers = json::array();
  for (const auto& server : s.cluster.servers)
    servers.push_back({{"id", server.id},
                       {"total_cores", server.total_cores},
                       {"total_memory", server.total_memory},
                       {"power_cap", server.power_cap},
                       {"p_static", server.p_static}});

  json containers = json::array();
  for (const auto& c : s.cluster.pending) {
    json jc{{"id", c.id},
            {"alloc_cores", c.alloc_cores},
            {"alloc_memory", c.alloc_memory},
            {"image_size", c.image_size},
            {"workload", c.workload_id}};
    if (!c.class_name.empty()) jc["class"] = c.class_name;
    containers.push_back(jc);
  }

  json workloads = json::array();
  for (const auto& w : s.workloads)
    workloads.push_back({{"id", w.id},
                         {"total_cpu_work", w.total_cpu_work},
                         {"max_parallelism", w.max_parallelism},
                         {"mem_profile", w.mem_profile},
                         {"disk_rate", w.disk_rate},
                         {"net_rate", w.net_rate}});

  j = json{{"name", s.name},
           {"seed", s.oracle.seed},
           {"mode", to_string(s.config.mode)},
           {"detection_interval", s.config.detection_interval},
           {"compensation", s.config.compensation},
           {"migration_fixed_s", s.config.migration_fixed},
           {"migration_rate_bps", s.config.migration_rate},
           {"dealloc_delay_s", s.config.dealloc_delay},
           {"freq_step", s.config.freq_step},
           {"min_freq_factor", s.config.min_freq_factor},
           {"oracle", oracle},
           {"servers", servers},
           {"containers", containers},
           {"workloads", workloads}};
}

void from_json(const json& j, Scenario& s) {
  s = Scenario{};
  s.name = j.is_object() && j.contains("name") ? get_str(j, "name", "") : "";
  s.oracle.seed = static_cast<std::uint64_t>(opt_num(j, "seed", "", 0.0));
  s.cluster.rng_seed = s.oracle.seed;
  s.config.mode = capping_mode_from_string(get_str(j, "mode", ""));
  s.config.detection_interval = static_cast<Tick>(opt_num(j, "detection_interval", "", 300.0));
  s.cluster.detection_interval = s.config.detection_interval;
  if (j.contains("compensation")) {
    if (!j.at("compensation").is_boolean())
      throw DocumentError("compensation", "expected a boolean");
    s.config.compensation = j.at("compensation").get<bool>();
  }
  s.config.migration_fixed = opt_num(j, "migration_fixed_s", "", 5.0);
  s.config.migration_rate = opt_num(j, "migration_rate_bps", "", 104857600.0);
  s.config.dealloc_delay = opt_num(j, "dealloc_delay_s", "", 0.18);
  s.config.freq_step = opt_num(j, "freq_step", "", 0.1);
  s.config.min_freq_factor = opt_num(j, "min_freq_factor", "", 0.1);

  const json& oracle = require(j, "oracle", "");
  s.oracle.p_static = get_num(oracle, "p_static", "oracle");
  s.oracle.noise_rel = opt_num(oracle, "noise_rel", "oracle", 0.015);
  s.oracle.noise_abs = opt_num(oracle, "noise_abs", "oracle", 0.3);
  s.oracle.default_coeffs =
      parse_coeffs(require(oracle, "coefficients", "oracle"), "oracle.coefficients");
  if (oracle.contains("classes")) {
    const json& classes = oracle.at("classes");
    if (!classes.is_object()) throw DocumentError("oracle.classes", "expected an object");
    for (auto it = classes.begin(); it != classes.end(); ++it)
      s.oracle.class_coeffs[it.key()] =
          parse_coeffs(it.value(), "oracle.classes." + it.key());
  }

  const json& servers = require(j, "servers", "");
  if (!servers.is_array()) throw DocumentError("servers", "expected an array");
  for (std::size_t i = 0; i < servers.size(); ++i) {
    const std::string path = "servers[" + std::to_string(i) + "]";
    const json& js = servers[i];
    ServerState server;
    server.id = get_str(js, "id", path);
    server.total_cores = static_cast<int>(get_num(js, "total_cores", path));
    server.total_memory = static_cast<Bytes>(get_num(js, "total_memory", path));
    server.power_cap = get_num(js, "power_cap", path);
    server.p_static = opt_num(js, "p_static", path, s.oracle.p_static);
    server.ps = server.p_static;
    s.cluster.servers.push_back(std::move(server));
  }

  const json& workloads = require(j, "workloads", "");
  if (!workloads.is_array()) throw DocumentError("workloads", "expected an array");
  for (std::size_t i = 0; i < workloads.size(); ++i) {
    const std::string path = "workloads[" + std::to_string(i) + "]";
    const json& jw = workloads[i];
    WorkloadSpec w;
    w.id = get_str(jw, "id", path);
    w.total_cpu_work = get_num(jw, "total_cpu_work", path);
    w.max_parallelism = static_cast<int>(get_num(jw, "max_parallelism", path));
    w.mem_profile = opt_num(jw, "mem_profile", path, 0.0);
    w.disk_rate = opt_num(jw, "disk_rate", path, 0.0);
    w.net_rate = opt_num(jw, "net_rate", path, 0.0);
    s.workloads.push_back(std::move(w));
  }

  const json& containers = require(j, "containers", "");
  if (!containers.is_array()) throw DocumentError("containers", "expected an array");
  for (std::size_t i = 0; i < containers.size(); ++i) {
    const std::string path = "containers[" + std::to_string(i) + "]";
    const json& jc = containers[i];
    ContainerState c;
    c.id = get_str(jc, "id", path);
    c.class_name = jc.contains("class") ? get_str(jc, "class", path) : "";
    c.alloc_cores = static_cast<int>(get_num(jc, "alloc_cores", path));
    c.alloc_memory = static_cast<Bytes>(get_num(jc, "alloc_memory", path));
    c.image_size = static_cast<Bytes>(opt_num(jc, "image_size", path, 0.0));
    c.workload_id = get_str(jc, "workload", path);
    s.cluster.pending.push_back(std::move(c));
  }

  validate_scenario(s);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read scenario file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DocumentError(path, e.what());
  }
  return j.get<Scenario>();
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write scenario file " + path);
  json j = scenario;
  out << j.dump(2) << '\n';
}

}  // namespace wattcap
