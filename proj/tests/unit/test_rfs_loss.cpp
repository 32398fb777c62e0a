// Copyright 2026 The rfsdrive Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rfsdrive/autodiff/grad_check.hpp"
#include "rfsdrive/autodiff/ops.hpp"
#include "rfsdrive/autodiff/tensor.hpp"
#include "rfsdrive/errors.hpp"
#include "rfsdrive/geometry.hpp"
#include "rfsdrive/random.hpp"
#include "rfsdrive/rfs_loss.hpp"

namespace ad = rfsdrive::ad;
using rfsdrive::ContractViolation;
using rfsdrive::LossConfig;
using rfsdrive::Rng;
using rfsdrive::Trajectory;

namespace
{

Trajectory straight(double v)
{
  Trajectory t;
  for (std::size_t i = 1; i <= 20; ++i) {
    t.waypoints.push_back({v * 0.25 * i, 0.0});
  }
  return t;
}

Trajectory random_drive(Rng & rng)
{
  Trajectory t;
  double x = 0.0;
  double y = 0.0;
  double h = rng.uniform(-0.5, 0.5);
  double v = rng.uniform(0.0, 16.0);
  const double accel = rng.uniform(-3.0, 2.0);
  const double yaw_rate = rng.uniform(-0.4, 0.4);
  for (std::size_t i = 0; i < 20; ++i) {
    v = std::max(0.0, v + accel * t.dt);
    h += yaw_rate * t.dt;
    x += v * t.dt * std::cos(h);
    y += v * t.dt * std::sin(h);
    t.waypoints.push_back({x, y});
  }
  return t;
}

std::vector<double> flat(const Trajectory & t)
{
  std::vector<double> v;
  for (const auto & w : t.waypoints) {
    v.push_back(w.x);
    v.push_back(w.y);
  }
  return v;
}

ad::Tensor as_tensor(std::vector<double> v, bool grad = false)
{
  const std::size_t h = v.size() / 2;
  return ad::Tensor::from({h, 2}, std::move(v), grad);
}

std::vector<double> jitter(Rng & rng, const Trajectory & ref, double scale)
{
  std::vector<double> v = flat(ref);
  for (auto & x : v) {
    x += scale * rng.normal();
  }
  return v;
}

double loss_value(const std::vector<double> & pred, const Trajectory & ref, const LossConfig & cfg)
{
  ad::NoGradGuard guard;
  return rfsdrive::trajectory_loss(as_tensor(pred), ref, cfg).item();
}

}  // namespace

TEST(LossThresholds, Examples)
{
  const LossConfig cfg;
  auto tr = rfsdrive::loss_thresholds(cfg, 3.0, 12.0);
  EXPECT_NEAR(tr.tau_lat, 1.0, 1e-12);
  EXPECT_NEAR(tr.tau_lng, 4.0, 1e-12);
  tr = rfsdrive::loss_thresholds(cfg, 4.0, 11.0);
  EXPECT_NEAR(tr.tau_lat, 1.4, 1e-12);
  EXPECT_NEAR(tr.tau_lng, 5.6, 1e-12);
  tr = rfsdrive::loss_thresholds(cfg, 0.25, 30.0);
  EXPECT_NEAR(tr.tau_lat, 0.1, 1e-12);
  EXPECT_NEAR(tr.tau_lng, 0.4, 1e-12);
  tr = rfsdrive::loss_thresholds(cfg, 1.5, 20.0);
  EXPECT_NEAR(tr.tau_lat, 0.5, 1e-12);
  EXPECT_NEAR(tr.tau_lng, 2.0, 1e-12);
  tr = rfsdrive::loss_thresholds(cfg, 5.0, 0.0);
  EXPECT_NEAR(tr.tau_lat, 0.9, 1e-12);
  EXPECT_NEAR(tr.tau_lng, 3.6, 1e-12);
}

TEST(LossThresholds, SpeedScalingCanBeDisabled)
{
  LossConfig cfg;
  cfg.use_speed_scaling = false;
  const auto tr = rfsdrive::loss_thresholds(cfg, 5.0, 0.0);
  EXPECT_NEAR(tr.tau_lat, 1.8, 1e-12);
  EXPECT_NEAR(tr.tau_lng, 7.2, 1e-12);
}

TEST(LossThresholds, OutOfRange)
{
  const LossConfig cfg;
  EXPECT_THROW(rfsdrive::loss_thresholds(cfg, 0.0, 5.0), ContractViolation);
  EXPECT_THROW(rfsdrive::loss_thresholds(cfg, 5.25, 5.0), ContractViolation);
  EXPECT_THROW(rfsdrive::loss_thresholds(cfg, 2.0, -1.0), ContractViolation);
}

TEST(LossConfig, FloorsValidated)
{
  LossConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.lat_floor = 1.5;
  EXPECT_THROW(cfg.validate(), ContractViolation);
  cfg.lat_floor = 0.0;
  EXPECT_THROW(cfg.validate(), ContractViolation);
}

TEST(WaypointLoss, Examples)
{
  const LossConfig cfg;
  const Trajectory ref = straight(12.0);
  const auto & w = ref.waypoints[11];  // t = 3 s

  auto l = rfsdrive::waypoint_loss(ad::Tensor::from({2}, {w.x, w.y}), ref, 11, cfg);
  EXPECT_EQ(l.item(), 0.0);

  l = rfsdrive::waypoint_loss(ad::Tensor::from({2}, {w.x, w.y + 2.0}), ref, 11, cfg);
  EXPECT_NEAR(l.item(), 2.0, 1e-12);
}

TEST(WaypointLoss, TieRoutesToLateral)
{
  ad::Tape::active().clear();
  const LossConfig cfg;
  const Trajectory ref = straight(12.0);
  const auto & w = ref.waypoints[11];
  ad::Tensor p = ad::Tensor::from({2}, {w.x + 4.0, w.y + 1.0}, true);
  const auto l = rfsdrive::waypoint_loss(p, ref, 11, cfg);
  EXPECT_NEAR(l.item(), 1.0, 1e-12);
  ad::backward(l);
  ASSERT_TRUE(p.has_grad());
  EXPECT_NEAR(p.grad()[0], 0.0, 1e-15);
  EXPECT_NEAR(p.grad()[1], 1.0, 1e-12);
  ad::Tape::active().clear();
}

TEST(WaypointLoss, RejectsBadShapes)
{
  const LossConfig cfg;
  const Trajectory ref = straight(12.0);
  EXPECT_THROW(
    rfsdrive::waypoint_loss(ad::Tensor::from({3}, {0, 0, 0}), ref, 0, cfg), ContractViolation);
  EXPECT_THROW(
    rfsdrive::waypoint_loss(ad::Tensor::from({2}, {0, 0}), ref, 20, cfg), ContractViolation);
}

TEST(TrajectoryLoss, Examples)
{
  const LossConfig cfg;
  const Trajectory ref = straight(12.0);
  EXPECT_EQ(loss_value(flat(ref), ref, cfg), 0.0);

  auto pred = flat(ref);
  pred[2 * 11 + 1] += 2.0;  // L0 = 2 at t = 3 s
  EXPECT_NEAR(loss_value(pred, ref, cfg), 0.1, 1e-12);

  // Constant lateral shift with all-floor lateral tolerances (scaling off,
  // anchors equal to the floors): every L0 is 0.3 / 0.1.
  LossConfig floors;
  floors.anchors = rfsdrive::ThresholdAnchors({{3.0, {0.1, 0.4}}, {5.0, {0.1, 0.4}}});
  floors.use_speed_scaling = false;
  pred = flat(ref);
  for (std::size_t i = 0; i < 20; ++i) {
    pred[2 * i + 1] += 0.3;
  }
  EXPECT_NEAR(loss_value(pred, ref, floors), 3.0, 1e-12);
}

TEST(TrajectoryLoss, HorizonMismatch)
{
  const LossConfig cfg;
  const Trajectory ref = straight(12.0);
  auto pred = flat(ref);
  pred.resize(20);
  EXPECT_THROW(loss_value(pred, ref, cfg), ContractViolation);
  EXPECT_THROW(
    rfsdrive::trajectory_loss(ad::Tensor::from({2, 20}, std::vector<double>(40)), ref, cfg),
    ContractViolation);
}

TEST(TrajectoryLoss, ConvexInterpolationIsMonotone)
{
  Rng rng(31);
  const LossConfig cfg;
  for (int k = 0; k < 1000; ++k) {
    const Trajectory ref = random_drive(rng);
    const auto start = jitter(rng, ref, std::pow(10.0, rng.uniform(-2.0, 1.0)));
    const auto target = flat(ref);
    double prev = loss_value(start, ref, cfg);
    for (int g = 1; g <= 10; ++g) {
      const double lam = g / 10.0;
      std::vector<double> p(start.size());
      for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = (1.0 - lam) * start[i] + lam * target[i];
      }
      const double cur = loss_value(p, ref, cfg);
      ASSERT_LE(cur, prev + 1e-12) << "case " << k << " lambda " << lam;
      prev = cur;
    }
  }
}

TEST(TrajectoryLoss, ZeroIffExactMatch)
{
  Rng rng(32);
  const LossConfig cfg;
  for (int k = 0; k < 200; ++k) {
    const Trajectory ref = random_drive(rng);
    auto p = flat(ref);
    EXPECT_EQ(loss_value(p, ref, cfg), 0.0);
    const std::size_t i = rng.below(p.size());
    p[i] += (rng.uniform() < 0.5 ? -1.0 : 1.0) * 1e-10;
    EXPECT_GT(loss_value(p, ref, cfg), 0.0);
  }
}

TEST(TrajectoryLoss, ReducesToWeightedInfinityThenL1)
{
  Rng rng(33);
  for (int k = 0; k < 100; ++k) {
    const double a = rng.uniform(0.1, 1.0);
    const double b = rng.uniform(0.4, 4.0);
    LossConfig cfg;
    cfg.anchors = rfsdrive::ThresholdAnchors({{3.0, {a, b}}, {5.0, {a, b}}});
    cfg.lat_floor = a;
    cfg.lng_floor = b;
    cfg.use_speed_scaling = false;
    const Trajectory ref = random_drive(rng);
    const auto p = jitter(rng, ref, 1.0);

    double l1 = 0.0;
    for (std::size_t i = 0; i < 20; ++i) {
      const double h = rfsdrive::heading_at(ref, i);
      const double dx = p[2 * i] - ref.waypoints[i].x;
      const double dy = p[2 * i + 1] - ref.waypoints[i].y;
      const double lng = std::cos(h) * dx + std::sin(h) * dy;
      const double lat = -std::sin(h) * dx + std::cos(h) * dy;
      l1 += std::max(std::abs(lat) / a, std::abs(lng) / b);
    }
    EXPECT_NEAR(loss_value(p, ref, cfg), l1 / 20.0, 1e-12);
  }
}

TEST(TrajectoryLoss, MatchesFiniteDifferencesOffKinks)
{
  Rng rng(34);
  const LossConfig cfg;
  int checked = 0;
  while (checked < 100) {
    const Trajectory ref = random_drive(rng);
    auto p = jitter(rng, ref, 0.5);
    // Keep every waypoint at least 1e-3 m off the abs kinks and 1e-2 (in
    // normalized units) off the max tie.
    bool near_kink = false;
    for (std::size_t i = 0; i < 20; ++i) {
      const double h = rfsdrive::heading_at(ref, i);
      const auto tau = rfsdrive::loss_thresholds(cfg, 0.25 * (i + 1), rfsdrive::speed_at(ref, i));
      const double dx = p[2 * i] - ref.waypoints[i].x;
      const double dy = p[2 * i + 1] - ref.waypoints[i].y;
      const double lng = std::abs(std::cos(h) * dx + std::sin(h) * dy);
      const double lat = std::abs(-std::sin(h) * dx + std::cos(h) * dy);
      if (lat < 1e-3 || lng < 1e-3 || std::abs(lat / tau.tau_lat - lng / tau.tau_lng) < 1e-2) {
        near_kink = true;
      }
    }
    if (near_kink) {
      continue;
    }
    // Piecewise linear off the kinks, so a step that cannot reach one has no
    // truncation error. A 1e-4 step moves each normalized term by at most
    // 1e-4 / 0.05 = 2e-3, so the tie gap shrinks by under 4e-3.
    std::vector<ad::Tensor> point{as_tensor(p)};
    ad::GradCheckOptions opts;
    opts.eps = 1e-4;
    const auto report = ad::grad_check(
      [&](std::span<const ad::Tensor> x) { return rfsdrive::trajectory_loss(x[0], ref, cfg); },
      point, opts);
    EXPECT_LT(report.max_rel_error, 1e-6) << "case " << checked;
    ++checked;
  }
}
