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

#include "rfsdrive/rfs_loss.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>
#include <vector>

#include "rfsdrive/autodiff/ops.hpp"
#include "rfsdrive/errors.hpp"

namespace rfsdrive
{

void LossConfig::validate() const
{
  if (!(lat_floor > 0.0) || !(lng_floor > 0.0)) {
    throw ContractViolation("loss config: floors must be positive");
  }
  for (const auto & [t, th] : anchors.entries()) {
    if (lat_floor > th.lat || lng_floor > th.lng) {
      throw ContractViolation("loss config: floors must not exceed the anchor thresholds");
    }
  }
}

TrustRegion loss_thresholds(const LossConfig & cfg, double t, double v)
{
  const auto & entries = cfg.anchors.entries();
  const double last = entries.rbegin()->first;
  if (!(t > 0.0) || t > last) {
    throw ContractViolation(
      "loss_thresholds: t=" + std::to_string(t) + " outside (0, " + std::to_string(last) + "]");
  }
  const auto & [t0, a0] = *entries.begin();
  double lat = 0.0;
  double lng = 0.0;
  if (t <= t0) {
    lat = std::max(cfg.lat_floor, (t / t0) * a0.lat);
    lng = std::max(cfg.lng_floor, (t / t0) * a0.lng);
  } else {
    const auto hi = entries.lower_bound(t);
    const auto lo = std::prev(hi);
    const double w = (t - lo->first) / (hi->first - lo->first);
    lat = (1.0 - w) * lo->second.lat + w * hi->second.lat;
    lng = (1.0 - w) * lo->second.lng + w * hi->second.lng;
  }
  const double s = cfg.use_speed_scaling ? speed_scale(v) : 1.0;
  return {s * lat, s * lng};
}

namespace
{

struct ReferenceFrame
{
  Waypoint2D point;
  double cos_h = 1.0;
  double sin_h = 0.0;
  TrustRegion tau;
};

ReferenceFrame reference_frame(const Trajectory & ref, std::size_t index, const LossConfig & cfg)
{
  const double h = heading_at(ref, index);
  const double t = static_cast<double>(index + 1) * ref.dt;
  return {
    ref.waypoints[index], std::cos(h), std::sin(h),
    loss_thresholds(cfg, t, speed_at(ref, index))};
}

}  // namespace

ad::Tensor waypoint_loss(
  const ad::Tensor & pred_t, const Trajectory & ref, std::size_t index, const LossConfig & cfg)
{
  if (!pred_t.defined() || pred_t.size() != 2 || pred_t.rank() > 2) {
    throw ContractViolation("waypoint_loss: pred_t must hold two elements");
  }
  if (index >= ref.horizon()) {
    throw ContractViolation("waypoint_loss: index outside reference horizon");
  }
  const ReferenceFrame f = reference_frame(ref, index, cfg);
  const ad::Tensor target = ad::Tensor::from(pred_t.shape(), {f.point.x, f.point.y});
  const std::size_t axis = pred_t.rank() - 1;
  const ad::Tensor d = ad::sub(pred_t, target);
  const ad::Tensor dx = ad::slice(d, axis, 0, 1);
  const ad::Tensor dy = ad::slice(d, axis, 1, 2);
  const ad::Tensor lng = ad::add(ad::scale(dx, f.cos_h), ad::scale(dy, f.sin_h));
  const ad::Tensor lat = ad::add(ad::scale(dx, -f.sin_h), ad::scale(dy, f.cos_h));
  return ad::max2(
    ad::scale(ad::abs(lat), 1.0 / f.tau.tau_lat), ad::scale(ad::abs(lng), 1.0 / f.tau.tau_lng));
}

ad::Tensor trajectory_loss(const ad::Tensor & pred, const Trajectory & ref, const LossConfig & cfg)
{
  if (!pred.defined() || pred.rank() != 2 || pred.shape()[1] != 2) {
    throw ContractViolation("trajectory_loss: pred must have shape (H x 2)");
  }
  const std::size_t h = pred.shape()[0];
  if (h != ref.horizon()) {
    throw ContractViolation(
      "trajectory_loss: horizon mismatch (pred " + std::to_string(h) + ", reference " +
      std::to_string(ref.horizon()) + ")");
  }
  std::vector<double> target(2 * h);
  std::vector<double> cos_h(h);
  std::vector<double> sin_h(h);
  std::vector<double> inv_lat(h);
  std::vector<double> inv_lng(h);
  for (std::size_t i = 0; i < h; ++i) {
    const ReferenceFrame f = reference_frame(ref, i, cfg);
    target[2 * i] = f.point.x;
    target[2 * i + 1] = f.point.y;
    cos_h[i] = f.cos_h;
    sin_h[i] = f.sin_h;
    inv_lat[i] = 1.0 / f.tau.tau_lat;
    inv_lng[i] = 1.0 / f.tau.tau_lng;
  }
  const auto column = [h](std::vector<double> v) { return ad::Tensor::from({h, 1}, std::move(v)); };
  const ad::Tensor c = column(std::move(cos_h));
  const ad::Tensor s = column(std::move(sin_h));

  const ad::Tensor d = ad::sub(pred, ad::Tensor::from({h, 2}, std::move(target)));
  const ad::Tensor dx = ad::slice(d, 1, 0, 1);
  const ad::Tensor dy = ad::slice(d, 1, 1, 2);
  const ad::Tensor lng = ad::add(ad::mul(dx, c), ad::mul(dy, s));
  const ad::Tensor lat = ad::sub(ad::mul(dy, c), ad::mul(dx, s));
  const ad::Tensor per_step = ad::max2(
    ad::mul(ad::abs(lat), column(std::move(inv_lat))),
    ad::mul(ad::abs(lng), column(std::move(inv_lng))));
  return ad::mean(per_step);
}

}  // namespace rfsdrive
