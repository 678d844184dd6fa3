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

#ifndef WATTCAP_POWERMODEL_HPP_
#define WATTCAP_POWERMODEL_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wattcap/core.hpp"

namespace wattcap {

enum class Solver { ClosedForm, GradientDescent };

std::string to_string(Solver s);
Solver solver_from_string(const std::string& s);

struct FitConfig {
  Solver solver = Solver::ClosedForm;
  double learning_rate = 0.01;  // gradient descent only
  int epochs = 2000;            // gradient descent only
  std::uint64_t seed = 0;       // reserved for stochastic variants; full-batch
                                // training is deterministic regardless
};

// Fits server power = p_static + a*ucpu + b*uram + c*udisk + d*unet by least
// squares. Records sharing a timestamp are aggregated first (features summed,
// label shared), so a consolidated model can be trained from logs with
// several concurrent containers.
//
// Solvers are interchangeable: the closed-form route solves the equilibrated
// design matrix by column-pivoted QR; gradient descent trains on standardized
// features and folds the scaling back into raw-space coefficients. Negative
// coefficients are permitted; the intercept is clamped at >= 0 to become
// p_static.
//
// Throws InsufficientData (fewer than 5 aggregated rows) and SingularDesign
// (closed form on a rank-deficient design; callers may fall back to gradient
// descent).
PowerModel fit(const std::vector<JoinedRecord>& records, const FitConfig& config = {});

// Dynamic power of one container, clamped at 0 W.
Watts predict_container_power(const PowerModel& model, const FeatureVector& f);

// p_static plus the aggregate of all containers' dynamic power.
Watts predict_server_power(const PowerModel& model, const std::vector<FeatureVector>& fs);

// Aggregate dynamic power of a workload's containers across the cluster; no
// static term.
Watts predict_workload_power(const PowerModel& model, const std::vector<FeatureVector>& fs);

// Mean absolute percentage error. Throws EmptyInput, ZeroActual.
double mape(const std::vector<double>& predicted, const std::vector<double>& actual);

// For each threshold t (normalized to ascending order), the fraction of
// samples whose percentage error is below t. Output is non-decreasing and
// bounded in [0, 1].
std::vector<double> error_distribution(const std::vector<double>& predicted,
                                       const std::vector<double>& actual,
                                       std::vector<double> bins);

// Per-class models with a consolidated default; the subscript k of the
// per-container coefficient sets is realized by keying on the container
// class.
class ModelSet {
 public:
  ModelSet() = default;
  explicit ModelSet(PowerModel consolidated) : default_model_(std::move(consolidated)) {}

  const PowerModel& model_for(const std::string& class_name) const;
  void set_class_model(const std::string& class_name, PowerModel model);
  PowerModel& default_model() { return default_model_; }
  const PowerModel& default_model() const { return default_model_; }

 private:
  PowerModel default_model_;
  std::map<std::string, PowerModel> class_models_;
};

// Deterministic seeded shuffle split; returns (train, test) with
// round(test_fraction * n) records held out.
std::pair<std::vector<JoinedRecord>, std::vector<JoinedRecord>> holdout_split(
    const std::vector<JoinedRecord>& records, double test_fraction, std::uint64_t seed);

// Pairs predicted server power with the labeled reading, one entry per
// distinct timestamp (concurrent containers are summed). Feeds mape and
// error_distribution.
std::pair<std::vector<double>, std::vector<double>> predict_vs_actual(
    const PowerModel& model, const std::vector<JoinedRecord>& records);

void save_model(const PowerModel& model, const std::string& path);
PowerModel load_model(const std::string& path);

}  // namespace wattcap

#endif  // WATTCAP_POWERMODEL_HPP_
