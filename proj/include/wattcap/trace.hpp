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

#ifndef WATTCAP_TRACE_HPP_
#define WATTCAP_TRACE_HPP_

#include <cstddef>
#include <istream>
#include <vector>

#include "wattcap/core.hpp"

namespace wattcap {

// Expected CSV headers (UTF-8, LF line endings, header row mandatory).
inline constexpr const char* kUtilizationHeader =
    "timestamp,container_id,cpu_pct,mem_pct,mem_used,mem_limit,net_rx,net_tx,"
    "blk_read,blk_write,pids";
inline constexpr const char* kPowerHeader = "timestamp,watts";

// Parses a container utilization log in file order.
// Throws MalformedRow on wrong column count, unparsable or out-of-range
// numbers; NegativeCounter when a cumulative counter decreases for a
// container between consecutive rows.
std::vector<UtilizationSample> parse_utilization_csv(std::istream& in);

// Parses a power meter log in file order. Duplicate timestamps are retained;
// dedup is the join's concern.
// Throws MalformedRow, NegativePower.
std::vector<PowerSample> parse_power_csv(std::istream& in);

// Utilization factors between two consecutive samples of one container:
// ucpu/uram are taken from the current sample, udisk/unet are the counter
// difference quotients over the timestamp delta.
// Throws CounterRegression if a cumulative counter decreased.
FeatureVector derive_features(const UtilizationSample& prev, const UtilizationSample& curr);

struct JoinResult {
  std::vector<JoinedRecord> records;  // ordered by (timestamp, container_id)
  std::size_t dropped = 0;            // samples with a predecessor but no power match
};

// Combines utilization and power data on the timestamp: each utilization
// sample that has a same-container predecessor becomes a record labeled with
// the nearest power reading within `tolerance` seconds (ties toward the
// earlier reading) or is counted as dropped. The first sample of each
// container only seeds the counter differencing. Duplicate (timestamp,
// container) utilization rows collapse to the last occurrence; duplicate
// power timestamps to the first.
JoinResult join_by_timestamp(const std::vector<UtilizationSample>& utils,
                             const std::vector<PowerSample>& power, Tick tolerance = 0);

}  // namespace wattcap

#endif  // WATTCAP_TRACE_HPP_
