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

#include "wattcap/powermodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <json.hpp>

namespace wattcap {

namespace {

constexpr int kNumFeatures = 4;

struct DesignData {
  Eigen::MatrixXd x;  // n x 4, raw features
  Eigen::VectorXd y;  // n, server power labels
};

// Records sharing a timestamp describe the same labeled server reading, so
// their features are summed into one row (the expanded aggregate form of the
// server power equation).
DesignData aggregate_by_timestamp(const std::vector<JoinedRecord>& records) {
  std::map<Tick, std::pair<FeatureVector, std::pair<double, int>>> rows;
  for (const auto& r : records) {
    auto& [features, label] = rows[r.timestamp];
    features.ucpu += r.features.ucpu;
    features.uram += r.features.uram;
    features.udisk += r.features.udisk;
    features.unet += r.features.unet;
    label.first += r.server_power;
    label.second += 1;
  }
  DesignData d;
  d.x.resize(static_cast<Eigen::Index>(rows.size()), kNumFeatures);
  d.y.resize(static_cast<Eigen::Index>(rows.size()));
  Eigen::Index i = 0;
  for (const auto& [ts, row] : rows) {
    (void)ts;
    d.x(i, 0) = row.first.ucpu;
    d.x(i, 1) = row.first.uram;
    d.x(i, 2) = row.first.udisk;
    d.x(i, 3) = row.first.unet;
    d.y(i) = row.second.first / row.second.second;
    ++i;
  }
  return d;
}

void assign_coefficients(PowerModel& model, double intercept, const Eigen::VectorXd& coeffs) {
  model.p_static = std::max(0.0, intercept);
  model.coeff_cpu = coeffs(0);
  model.coeff_ram = coeffs(1);
  model.coeff_disk = coeffs(2);
  model.coeff_net = coeffs(3);
}

PowerModel fit_closed_form(const DesignData& d, const FitConfig& config) {
  const Eigen::Index n = d.x.rows();
  Eigen::MatrixXd design(n, kNumFeatures + 1);
  design.col(0).setOnes();
  design.rightCols(kNumFeatures) = d.x;

  // Column equilibration keeps the QR well conditioned when byte/s columns
  // dwarf the percentage columns.
  Eigen::VectorXd scale(kNumFeatures + 1);
  for (int c = 0; c <= kNumFeatures; ++c) {
    double m = design.col(c).cwiseAbs().maxCoeff();
    scale(c) = m > 0.0 ? m : 1.0;
    design.col(c) /= scale(c);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < kNumFeatures + 1) throw SingularDesign("rank-deficient design matrix");

  Eigen::VectorXd beta = qr.solve(d.y).cwiseQuotient(scale);

  PowerModel model;
  assign_coefficients(model, beta(0), beta.tail(kNumFeatures));
  model.solver = to_string(Solver::ClosedForm);
  model.learning_rate = config.learning_rate;
  model.epochs = config.epochs;
  model.seed = config.seed;
  return model;
}

PowerModel fit_gradient_descent(const DesignData& d, const FitConfig& config) {
  const Eigen::Index n = d.x.rows();

  Eigen::VectorXd mean = d.x.colwise().mean();
  Eigen::VectorXd stddev(kNumFeatures);
  for (int c = 0; c < kNumFeatures; ++c) {
    double var = (d.x.col(c).array() - mean(c)).square().sum() / static_cast<double>(n);
    stddev(c) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  Eigen::MatrixXd xs = (d.x.rowwise() - mean.transpose()).array().rowwise() /
                       stddev.transpose().array();
  const double y_mean = d.y.mean();
  Eigen::VectorXd yc = d.y.array() - y_mean;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(kNumFeatures);
  double b = 0.0;
  const double lr = config.learning_rate;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Eigen::VectorXd residual = xs * w;
    residual.array() += b;
    residual -= yc;
    Eigen::VectorXd grad_w = xs.transpose() * residual / static_cast<double>(n);
    double grad_b = residual.mean();
    w -= lr * grad_w;
    b -= lr * grad_b;
  }

  // Fold the standardization back so the stored coefficients act on raw
  // features and the dynamic term vanishes on an all-zero vector.
  Eigen::VectorXd raw = w.cwiseQuotient(stddev);
  double intercept = y_mean + b - raw.dot(mean);

  PowerModel model;
  assign_coefficients(model, intercept, raw);
  for (int c = 0; c < kNumFeatures; ++c)
    model.feature_scale[static_cast<std::size_t>(c)] = FeatureScale{mean(c), stddev(c)};
  model.solver = to_string(Solver::GradientDescent);
  model.learning_rate = config.learning_rate;
  model.epochs = config.epochs;
  model.seed = config.seed;
  return model;
}

}  // namespace

std::string to_string(Solver s) {
  return s == Solver::ClosedForm ? "closed" : "gd";
}

Solver solver_from_string(const std::string& s) {
  if (s == "closed") return Solver::ClosedForm;
  if (s == "gd") return Solver::GradientDescent;
  throw DocumentError("solver", "unknown solver '" + s + "' (expected 'closed' or 'gd')");
}

PowerModel fit(const std::vector<JoinedRecord>& records, const FitConfig& config) {
  DesignData d = aggregate_by_timestamp(records);
  if (d.x.rows() < kNumFeatures + 1)
    throw InsufficientData("need at least 5 labeled rows, got " + std::to_string(d.x.rows()));
  return config.solver == Solver::ClosedForm ? fit_closed_form(d, config)
                                             : fit_gradient_descent(d, config);
}

Watts predict_container_power(const PowerModel& model, const FeatureVector& f) {
  double watts = model.coeff_cpu * f.ucpu + model.coeff_ram * f.uram +
                 model.coeff_disk * f.udisk + model.coeff_net * f.unet;
  return std::max(0.0, watts);
}

Watts predict_server_power(const PowerModel& model, const std::vector<FeatureVector>& fs) {
  double watts = model.p_static;
  for (const auto& f : fs) watts += predict_container_power(model, f);
  return watts;
}

Watts predict_workload_power(const PowerModel& model, const std::vector<FeatureVector>& fs) {
  double watts = 0.0;
  for (const auto& f : fs) watts += predict_container_power(model, f);
  return watts;
}

double mape(const std::vector<double>& predicted, const std::vector<double>& actual) {
  if (predicted.empty() || actual.empty()) throw EmptyInput("mape on empty input");
  if (predicted.size() != actual.size()) throw Error("mape: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] <= 0.0) throw ZeroActual("mape: actual value must be positive");
    sum += std::abs(predicted[i] - actual[i]) / actual[i];
  }
  return 100.0 * sum / static_cast<double>(actual.size());
}

std::vector<double> error_distribution(const std::vector<double>& predicted,
                                       const std::vector<double>& actual,
                                       std::vector<double> bins) {
  if (predicted.empty() || actual.empty()) throw EmptyInput("error_distribution on empty input");
  if (predicted.size() != actual.size()) throw Error("error_distribution: length mismatch");
  std::sort(bins.begin(), bins.end());

  std::vector<double> errors;
  errors.reserve(actual.size());
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] <= 0.0) throw ZeroActual("error_distribution: actual value must be positive");
    errors.push_back(100.0 * std::abs(predicted[i] - actual[i]) / actual[i]);
  }

  std::vector<double> fractions;
  fractions.reserve(bins.size());
  for (double threshold : bins) {
    auto below = std::count_if(errors.begin(), errors.end(),
                               [threshold](double e) { return e < threshold; });
    fractions.push_back(static_cast<double>(below) / static_cast<double>(errors.size()));
  }
  return fractions;
}

const PowerModel& ModelSet::model_for(const std::string& class_name) const {
  auto it = class_models_.find(class_name);
  return it == class_models_.end() ? default_model_ : it->second;
}

void ModelSet::set_class_model(const std::string& class_name, PowerModel model) {
  class_models_[class_name] = std::move(model);
}

std::pair<std::vector<JoinedRecord>, std::vector<JoinedRecord>> holdout_split(
    const std::vector<JoinedRecord>& records, double test_fraction, std::uint64_t seed) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  auto test_size = static_cast<std::size_t>(
      std::lround(test_fraction * static_cast<double>(records.size())));
  std::pair<std::vector<JoinedRecord>, std::vector<JoinedRecord>> split;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i < test_size)
      split.second.push_back(records[order[i]]);
    else
      split.first.push_back(records[order[i]]);
  }
  return split;
}

std::pair<std::vector<double>, std::vector<double>> predict_vs_actual(
    const PowerModel& model, const std::vector<JoinedRecord>& records) {
  std::map<Tick, std::pair<std::vector<FeatureVector>, double>> rows;
  for (const auto& r : records) {
    auto& [features, label] = rows[r.timestamp];
    features.push_back(r.features);
    label = r.server_power;
  }
  std::pair<std::vector<double>, std::vector<double>> out;
  for (const auto& [ts, row] : rows) {
    (void)ts;
    out.first.push_back(predict_server_power(model, row.first));
    out.second.push_back(row.second);
  }
  return out;
}

void save_model(const PowerModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file " + path);
  nlohmann::json j = model;
  out << j.dump(2) << '\n';
}

PowerModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read model file " + path);
  nlohmann::json j;
  try {
    in >> j;
    return j.get<PowerModel>();
  } catch (const nlohmann::json::exception& e) {
    throw DocumentError(path, e.what());
  }
}

}  // namespace wattcap
