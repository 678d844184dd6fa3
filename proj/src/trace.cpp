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

#include "wattcap/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

namespace wattcap {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

template <typename T>
T parse_number(const std::string& field, int line_no, const char* name) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || field.empty())
    throw MalformedRow(line_no, std::string("cannot parse ") + name + " from '" + field + "'");
  return value;
}

double parse_nonneg_double(const std::string& field, int line_no, const char* name) {
  double v = parse_number<double>(field, line_no, name);
  if (!std::isfinite(v) || v < 0.0)
    throw MalformedRow(line_no, std::string(name) + " must be a non-negative finite number");
  return v;
}

struct CounterSnapshot {
  Bytes net_rx, net_tx, blk_read, blk_write;
};

}  // namespace

std::vector<UtilizationSample> parse_utilization_csv(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line) || strip_cr(line) != kUtilizationHeader)
    throw MalformedRow(1, std::string("expected header '") + kUtilizationHeader + "'");

  std::vector<UtilizationSample> samples;
  std::map<std::string, CounterSnapshot> last_counters;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != 11)
      throw MalformedRow(line_no, "expected 11 columns, got " + std::to_string(fields.size()));

    UtilizationSample s;
    s.timestamp = parse_number<Tick>(fields[0], line_no, "timestamp");
    if (s.timestamp < 0) throw MalformedRow(line_no, "timestamp must be non-negative");
    s.container_id = fields[1];
    if (s.container_id.empty()) throw MalformedRow(line_no, "empty container_id");
    s.cpu_pct = parse_nonneg_double(fields[2], line_no, "cpu_pct");
    s.mem_pct = parse_nonneg_double(fields[3], line_no, "mem_pct");
    if (s.mem_pct > 100.0) throw MalformedRow(line_no, "mem_pct above 100");
    s.mem_used = parse_number<Bytes>(fields[4], line_no, "mem_used");
    s.mem_limit = parse_number<Bytes>(fields[5], line_no, "mem_limit");
    if (s.mem_used > s.mem_limit) throw MalformedRow(line_no, "mem_used exceeds mem_limit");
    s.net_rx = parse_number<Bytes>(fields[6], line_no, "net_rx");
    s.net_tx = parse_number<Bytes>(fields[7], line_no, "net_tx");
    s.blk_read = parse_number<Bytes>(fields[8], line_no, "blk_read");
    s.blk_write = parse_number<Bytes>(fields[9], line_no, "blk_write");
    s.pids = parse_number<int>(fields[10], line_no, "pids");
    if (s.pids < 0) throw MalformedRow(line_no, "pids must be non-negative");

    auto it = last_counters.find(s.container_id);
    if (it != last_counters.end()) {
      const auto& prev = it->second;
      if (s.net_rx < prev.net_rx || s.net_tx < prev.net_tx || s.blk_read < prev.blk_read ||
          s.blk_write < prev.blk_write)
        throw NegativeCounter(line_no,
                              "cumulative counter decreased for container " + s.container_id);
    }
    last_counters[s.container_id] = {s.net_rx, s.net_tx, s.blk_read, s.blk_write};
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<PowerSample> parse_power_csv(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line) || strip_cr(line) != kPowerHeader)
    throw MalformedRow(1, std::string("expected header '") + kPowerHeader + "'");

  std::vector<PowerSample> samples;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != 2)
      throw MalformedRow(line_no, "expected 2 columns, got " + std::to_string(fields.size()));
    PowerSample s;
    s.timestamp = parse_number<Tick>(fields[0], line_no, "timestamp");
    s.watts = parse_number<double>(fields[1], line_no, "watts");
    if (!std::isfinite(s.watts)) throw MalformedRow(line_no, "watts must be finite");
    if (s.watts < 0.0) throw NegativePower(line_no, "negative power reading");
    samples.push_back(s);
  }
  return samples;
}

FeatureVector derive_features(const UtilizationSample& prev, const UtilizationSample& curr) {
  if (prev.container_id != curr.container_id)
    throw Error("derive_features: samples from different containers");
  if (curr.timestamp <= prev.timestamp)
    throw Error("derive_features: non-increasing timestamps");
  if (curr.net_rx < prev.net_rx || curr.net_tx < prev.net_tx || curr.blk_read < prev.blk_read ||
      curr.blk_write < prev.blk_write)
    throw CounterRegression("cumulative counter decreased for container " + curr.container_id);

  const double dt = static_cast<double>(curr.timestamp - prev.timestamp);
  FeatureVector f;
  f.ucpu = curr.cpu_pct;
  f.uram = curr.mem_pct;
  f.udisk = static_cast<double>((curr.blk_read + curr.blk_write) -
                                (prev.blk_read + prev.blk_write)) /
            dt;
  f.unet =
      static_cast<double>((curr.net_rx + curr.net_tx) - (prev.net_rx + prev.net_tx)) / dt;
  return f;
}

JoinResult join_by_timestamp(const std::vector<UtilizationSample>& utils,
                             const std::vector<PowerSample>& power, Tick tolerance) {
  if (tolerance < 0) throw Error("join_by_timestamp: tolerance must be non-negative");

  // Power samples sorted by timestamp; duplicates collapse to the first in
  // file order.
  std::vector<PowerSample> sorted_power = power;
  std::stable_sort(sorted_power.begin(), sorted_power.end(),
                   [](const PowerSample& a, const PowerSample& b) {
                     return a.timestamp < b.timestamp;
                   });
  sorted_power.erase(std::unique(sorted_power.begin(), sorted_power.end(),
                                 [](const PowerSample& a, const PowerSample& b) {
                                   return a.timestamp == b.timestamp;
                                 }),
                     sorted_power.end());

  auto match_power = [&](Tick t) -> const PowerSample* {
    if (sorted_power.empty()) return nullptr;
    auto it = std::lower_bound(sorted_power.begin(), sorted_power.end(), t,
                               [](const PowerSample& s, Tick v) { return s.timestamp < v; });
    const PowerSample* after = it == sorted_power.end() ? nullptr : &*it;
    const PowerSample* before = it == sorted_power.begin() ? nullptr : &*(it - 1);
    auto dist = [t](const PowerSample* s) { return std::llabs(s->timestamp - t); };
    const PowerSample* best = nullptr;
    if (before && after)
      best = dist(before) <= dist(after) ? before : after;  // tie -> earlier
    else
      best = before ? before : after;
    if (!best || dist(best) > tolerance) return nullptr;
    return best;
  };

  // Per container, in timestamp order, deduped to the last row per timestamp.
  std::map<std::string, std::vector<UtilizationSample>> by_container;
  for (const auto& s : utils) by_container[s.container_id].push_back(s);

  JoinResult result;
  for (auto& [container_id, samples] : by_container) {
    std::stable_sort(samples.begin(), samples.end(),
                     [](const UtilizationSample& a, const UtilizationSample& b) {
                       return a.timestamp < b.timestamp;
                     });
    std::vector<UtilizationSample> deduped;
    for (const auto& s : samples) {
      if (!deduped.empty() && deduped.back().timestamp == s.timestamp)
        deduped.back() = s;
      else
        deduped.push_back(s);
    }
    for (std::size_t i = 1; i < deduped.size(); ++i) {
      FeatureVector features = derive_features(deduped[i - 1], deduped[i]);
      const PowerSample* match = match_power(deduped[i].timestamp);
      if (!match) {
        ++result.dropped;
        continue;
      }
      JoinedRecord rec;
      rec.timestamp = deduped[i].timestamp;
      rec.container_id = container_id;
      rec.features = features;
      rec.server_power = match->watts;
      result.records.push_back(std::move(rec));
    }
  }

  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const JoinedRecord& a, const JoinedRecord& b) {
                     if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                     return a.container_id < b.container_id;
                   });
  return result;
}

}  // namespace wattcap
