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

#ifndef WATTCAP_TESTS_TEST_UTIL_HPP_
#define WATTCAP_TESTS_TEST_UTIL_HPP_

#include <random>
#include <string>
#include <vector>

#include "wattcap/core.hpp"
#include "wattcap/simulator.hpp"

namespace wattcap::testutil {

inline PowerModel make_model(double p_static, double a, double b, double c, double d) {
  PowerModel m;
  m.p_static = p_static;
  m.coeff_cpu = a;
  m.coeff_ram = b;
  m.coeff_disk = c;
  m.coeff_net = d;
  return m;
}

struct TrueParams {
  double p_static = 30.0;
  double a = 0.08;
  double b = 0.04;
  double c = 1e-8;
  double d = 2e-8;
};

// Labeled records generated from the linear ground truth over varied feature
// vectors, optionally with meter-style Gaussian noise on the labels.
inline std::vector<JoinedRecord> synthetic_records(int n, const TrueParams& p,
                                                   std::uint64_t seed, double noise_rel = 0.0,
                                                   double noise_abs = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cpu(0.0, 300.0);
  std::uniform_real_distribution<double> ram(0.0, 100.0);
  std::uniform_real_distribution<double> disk(0.0, 5e7);
  std::uniform_real_distribution<double> net(0.0, 2e7);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<JoinedRecord> records;
  records.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    JoinedRecord r;
    r.timestamp = i;
    r.container_id = "c1";
    r.features = FeatureVector{cpu(rng), ram(rng), disk(rng), net(rng)};
    double label = p.p_static + p.a * r.features.ucpu + p.b * r.features.uram +
                   p.c * r.features.udisk + p.d * r.features.unet;
    double sigma = noise_rel * label + noise_abs;
    if (sigma > 0.0) label += sigma * gauss(rng);
    r.server_power = label;
    records.push_back(std::move(r));
  }
  return records;
}

inline ServerState make_server(const std::string& id, int cores, Bytes memory, double cap,
                               double p_static) {
  ServerState s;
  s.id = id;
  s.total_cores = cores;
  s.total_memory = memory;
  s.power_cap = cap;
  s.p_static = p_static;
  s.ps = p_static;
  return s;
}

inline ContainerState make_container(const std::string& id, int cores, Bytes memory,
                                     const std::string& workload_id, double pc = 0.0) {
  ContainerState c;
  c.id = id;
  c.alloc_cores = cores;
  c.alloc_memory = memory;
  c.workload_id = workload_id;
  c.pc = pc;
  return c;
}

inline WorkloadSpec make_workload(const std::string& id, double work, int parallelism,
                                  double mem_profile = 50.0, double disk_rate = 0.0,
                                  double net_rate = 0.0) {
  WorkloadSpec w;
  w.id = id;
  w.total_cpu_work = work;
  w.max_parallelism = parallelism;
  w.mem_profile = mem_profile;
  w.disk_rate = disk_rate;
  w.net_rate = net_rate;
  return w;
}

// Scenario skeleton with a noiseless oracle; callers add servers, containers
// and workloads.
inline Scenario scenario_skeleton(CappingMode mode, Tick detection_interval,
                                  std::uint64_t seed = 0) {
  Scenario s;
  s.config.mode = mode;
  s.config.detection_interval = detection_interval;
  s.cluster.detection_interval = detection_interval;
  s.oracle.p_static = 30.0;
  s.oracle.default_coeffs = ClassCoefficients{0.08, 0.04, 1e-8, 2e-8};
  s.oracle.noise_rel = 0.0;
  s.oracle.noise_abs = 0.0;
  s.oracle.seed = seed;
  s.cluster.rng_seed = seed;
  return s;
}

}  // namespace wattcap::testutil

#endif  // WATTCAP_TESTS_TEST_UTIL_HPP_
