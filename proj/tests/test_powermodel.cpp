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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "test_util.hpp"
#include "wattcap/powermodel.hpp"

using namespace wattcap;
using testutil::TrueParams;
using testutil::make_model;
using testutil::synthetic_records;

namespace {

double rel_err(double got, double expected) {
  return std::abs(got - expected) / std::abs(expected);
}

void check_recovery(const PowerModel& m, const TrueParams& p, double tol) {
  CHECK(rel_err(m.p_static, p.p_static) <= tol);
  CHECK(rel_err(m.coeff_cpu, p.a) <= tol);
  CHECK(rel_err(m.coeff_ram, p.b) <= tol);
  CHECK(rel_err(m.coeff_disk, p.c) <= tol);
  CHECK(rel_err(m.coeff_net, p.d) <= tol);
}

}  // namespace

TEST_CASE("closed form recovers noiseless coefficients to 1e-6") {
  TrueParams p;
  auto records = synthetic_records(200, p, 1);
  PowerModel m = fit(records, {Solver::ClosedForm});
  check_recovery(m, p, 1e-6);
  CHECK(m.solver == "closed");
}

TEST_CASE("gradient descent matches the closed-form oracle") {
  for (std::uint64_t seed : {2u, 3u, 4u, 5u}) {
    TrueParams p;
    p.p_static = 25.0 + static_cast<double>(seed);
    auto records = synthetic_records(400, p, seed);
    PowerModel closed = fit(records, {Solver::ClosedForm});
    PowerModel gd = fit(records, {Solver::GradientDescent});
    CHECK(rel_err(gd.p_static, closed.p_static) <= 1e-3);
    CHECK(rel_err(gd.coeff_cpu, closed.coeff_cpu) <= 1e-3);
    CHECK(rel_err(gd.coeff_ram, closed.coeff_ram) <= 1e-3);
    CHECK(rel_err(gd.coeff_disk, closed.coeff_disk) <= 1e-3);
    CHECK(rel_err(gd.coeff_net, closed.coeff_net) <= 1e-3);
    CHECK(gd.solver == "gd");
  }
}

TEST_CASE("identical feature rows produce a singular design") {
  std::vector<JoinedRecord> records;
  for (int i = 0; i < 10; ++i) {
    JoinedRecord r;
    r.timestamp = i;
    r.container_id = "c1";
    r.features = {100.0, 50.0, 0.0, 0.0};
    r.server_power = 42.0;
    records.push_back(r);
  }
  CHECK_THROWS_AS(fit(records, {Solver::ClosedForm}), SingularDesign);
}

TEST_CASE("too few records") {
  TrueParams p;
  auto records = synthetic_records(4, p, 1);
  CHECK_THROWS_AS(fit(records), InsufficientData);
}

TEST_CASE("records sharing a timestamp are aggregated before fitting") {
  // Two containers per timestamp, label is the full server power; a per-row
  // fit would be biased, the aggregated fit recovers the truth exactly.
  TrueParams p;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> cpu(0.0, 300.0);
  std::uniform_real_distribution<double> ram(0.0, 100.0);
  std::vector<JoinedRecord> records;
  for (int t = 0; t < 100; ++t) {
    FeatureVector f1{cpu(rng), ram(rng), 0.0, 0.0};
    FeatureVector f2{cpu(rng), ram(rng), 0.0, 0.0};
    double label = p.p_static + p.a * (f1.ucpu + f2.ucpu) + p.b * (f1.uram + f2.uram);
    records.push_back({t, "c1", f1, label, std::nullopt});
    records.push_back({t, "c2", f2, label, std::nullopt});
  }
  // disk/net columns are all zero here, so fit a reduced problem through the
  // gradient-descent path (closed form would see a rank-deficient design).
  PowerModel m = fit(records, {Solver::GradientDescent});
  CHECK(rel_err(m.p_static, p.p_static) <= 1e-3);
  CHECK(rel_err(m.coeff_cpu, p.a) <= 1e-3);
  CHECK(rel_err(m.coeff_ram, p.b) <= 1e-3);
}

TEST_CASE("noisy fit stays within the reported error band") {
  TrueParams p;
  auto records = synthetic_records(600, p, 21, 0.015, 0.3);
  auto [train, test] = holdout_split(records, 0.25, 21);
  PowerModel m = fit(train, {Solver::ClosedForm});
  auto [predicted, actual] = predict_vs_actual(m, test);
  CHECK(mape(predicted, actual) <= 6.0);
  auto fractions = error_distribution(predicted, actual, {10.0});
  CHECK(fractions[0] >= 0.90);
}

TEST_CASE("container power prediction follows the linear form with a floor at zero") {
  PowerModel m = make_model(30.0, 0.08, 0.04, 0.0, 0.0);
  CHECK(predict_container_power(m, {0, 0, 0, 0}) == 0.0);
  CHECK(predict_container_power(m, {150.0, 50.0, 0.0, 0.0}) == doctest::Approx(14.0));

  PowerModel negative = make_model(30.0, -0.1, 0.0, 0.0, 0.0);
  CHECK(predict_container_power(negative, {20.0, 0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("server power is static plus aggregate container power") {
  PowerModel m = make_model(30.0, 1.0, 0.0, 0.0, 0.0);
  CHECK(predict_server_power(m, {}) == 30.0);
  CHECK(predict_server_power(m, {{14.0, 0, 0, 0}}) == doctest::Approx(44.0));
  std::vector<FeatureVector> three = {{5, 0, 0, 0}, {7, 0, 0, 0}, {9, 0, 0, 0}};
  CHECK(predict_server_power(m, three) == doctest::Approx(51.0));
}

TEST_CASE("workload power has no static term") {
  PowerModel m = make_model(30.0, 1.0, 0.0, 0.0, 0.0);
  CHECK(predict_workload_power(m, {}) == 0.0);
  CHECK(predict_workload_power(m, {{6, 0, 0, 0}}) ==
        predict_container_power(m, {6, 0, 0, 0}));
  std::vector<FeatureVector> two = {{6, 0, 0, 0}, {6, 0, 0, 0}};
  CHECK(predict_workload_power(m, two) == doctest::Approx(12.0));
}

TEST_CASE("server power is additive over container partitions") {
  PowerModel m = make_model(20.0, 0.05, 0.02, 1e-8, 1e-8);
  std::vector<FeatureVector> fs1 = {{100, 40, 1e6, 0}, {220, 10, 0, 2e6}};
  std::vector<FeatureVector> fs2 = {{50, 90, 0, 0}};
  std::vector<FeatureVector> all = fs1;
  all.insert(all.end(), fs2.begin(), fs2.end());
  CHECK(predict_server_power(m, all) ==
        doctest::Approx(predict_server_power(m, fs1) + predict_server_power(m, fs2) -
                        m.p_static));
}

TEST_CASE("mape") {
  CHECK(mape({50.0, 60.0}, {50.0, 60.0}) == 0.0);
  CHECK(mape({55.0}, {50.0}) == doctest::Approx(10.0));
  CHECK_THROWS_AS(mape({}, {}), EmptyInput);
  CHECK_THROWS_AS(mape({1.0}, {0.0}), ZeroActual);
}

TEST_CASE("error distribution") {
  CHECK(error_distribution({50.0}, {50.0}, {10.0}) == std::vector<double>{1.0});

  // errors of 5% and 15%
  auto fractions = error_distribution({105.0, 115.0}, {100.0, 100.0}, {10.0, 20.0});
  CHECK(fractions == std::vector<double>{0.5, 1.0});

  // unsorted bins are normalized to ascending order
  auto unsorted = error_distribution({105.0, 115.0}, {100.0, 100.0}, {20.0, 10.0});
  CHECK(unsorted == std::vector<double>{0.5, 1.0});
}

TEST_CASE("error distribution is monotone and bounded") {
  TrueParams p;
  auto records = synthetic_records(200, p, 31, 0.05, 1.0);
  PowerModel m = fit(records, {Solver::ClosedForm});
  auto [predicted, actual] = predict_vs_actual(m, records);
  auto fractions = error_distribution(predicted, actual, {1, 2, 5, 10, 20, 50});
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    CHECK(fractions[i] >= 0.0);
    CHECK(fractions[i] <= 1.0);
    if (i > 0) CHECK(fractions[i] >= fractions[i - 1]);
  }
}

TEST_CASE("model set keys coefficient sets by container class") {
  ModelSet models(make_model(30.0, 0.08, 0.04, 0.0, 0.0));
  models.set_class_model("heavy", make_model(30.0, 0.12, 0.04, 0.0, 0.0));
  CHECK(models.model_for("").coeff_cpu == 0.08);
  CHECK(models.model_for("unknown").coeff_cpu == 0.08);
  CHECK(models.model_for("heavy").coeff_cpu == 0.12);
}

TEST_CASE("holdout split is deterministic and sized") {
  TrueParams p;
  auto records = synthetic_records(100, p, 5);
  auto [train1, test1] = holdout_split(records, 0.25, 9);
  auto [train2, test2] = holdout_split(records, 0.25, 9);
  CHECK(train1.size() == 75);
  CHECK(test1.size() == 25);
  CHECK(train1 == train2);
  CHECK(test1 == test2);
  auto [train3, test3] = holdout_split(records, 0.25, 10);
  CHECK(train3 != train1);
}

TEST_CASE("model document round-trips exactly") {
  TrueParams p;
  auto records = synthetic_records(50, p, 6, 0.01, 0.1);
  PowerModel m = fit(records, {Solver::GradientDescent});
  auto path = std::filesystem::temp_directory_path() / "wattcap_model_test.json";
  save_model(m, path.string());
  PowerModel loaded = load_model(path.string());
  CHECK(loaded == m);
  std::filesystem::remove(path);
}
