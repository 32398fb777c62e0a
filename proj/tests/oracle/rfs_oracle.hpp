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


// Standalone scalar rater-feedback scorer used as a cross-check for the
// library. Deliberately shares no headers or helpers with rfsdrive: points
// are std::complex, rotation is a complex multiply, and the decay is written
// as a power of ten.

#ifndef RFSDRIVE__TESTS__ORACLE__RFS_ORACLE_HPP_
#define RFSDRIVE__TESTS__ORACLE__RFS_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace rfs_oracle
{

using Point = std::complex<double>;

struct Rater
{
  std::vector<Point> path;  // path[k] is the position at (k + 1) * dt
  double score;
};

inline double scale_for_speed(double v)
{
  const double lo = 1.4;
  const double hi = 11.0;
  if (v >= hi) {
    return 1.0;
  }
  if (v <= lo) {
    return 0.5;
  }
  return 0.5 * (1.0 + (v - lo) / (hi - lo));
}

// Position at 0-based step k, with k == -1 meaning the current pose.
inline Point position(const std::vector<Point> & path, long k)
{
  return k < 0 ? Point(0.0, 0.0) : path[static_cast<std::size_t>(k)];
}

inline Point tangent(const std::vector<Point> & path, long k, double * steps)
{
  const long last = static_cast<long>(path.size()) - 1;
  if (k == last) {
    *steps = 1.0;
    return position(path, k) - position(path, k - 1);
  }
  *steps = 2.0;
  return position(path, k + 1) - position(path, k - 1);
}

// Unit direction of travel at step k; walks back past stationary steps.
inline Point direction(const std::vector<Point> & path, long k)
{
  for (long j = k; j >= 0; --j) {
    double steps = 0.0;
    const Point d = tangent(path, j, &steps);
    if (std::abs(d) >= 1e-6) {
      return d / std::abs(d);
    }
  }
  return Point(1.0, 0.0);
}

inline double speed(const std::vector<Point> & path, long k, double dt)
{
  double steps = 0.0;
  const Point d = tangent(path, k, &steps);
  return std::abs(d) / (steps * dt);
}

// Table of raw tolerances: returns false for times without an anchor.
inline bool raw_tolerance(double t, double * lat, double * lng)
{
  if (std::abs(t - 3.0) < 1e-9) {
    *lat = 1.0;
    *lng = 4.0;
    return true;
  }
  if (std::abs(t - 5.0) < 1e-9) {
    *lat = 1.8;
    *lng = 7.2;
    return true;
  }
  return false;
}

inline double score_at(const Point & guess, const Rater & r, double t, double dt)
{
  const long k = std::lround(t / dt) - 1;
  double lat = 0.0;
  double lng = 0.0;
  raw_tolerance(t, &lat, &lng);
  const double s = scale_for_speed(speed(r.path, k, dt));
  // In the rater frame: real part along the heading, imaginary part across.
  const Point e = (guess - r.path[static_cast<std::size_t>(k)]) * std::conj(direction(r.path, k));
  const double excess = std::max(std::abs(e.imag()) / (s * lat), std::abs(e.real()) / (s * lng));
  if (excess <= 1.0) {
    return r.score;
  }
  return r.score * std::pow(10.0, 1.0 - excess);
}

inline double score(
  const std::vector<Point> & guess, const std::vector<Rater> & raters, double dt,
  const std::vector<double> & times)
{
  double best = -1.0;
  for (const auto & r : raters) {
    double worst = 1e300;
    for (double t : times) {
      const long k = std::lround(t / dt) - 1;
      worst = std::min(worst, score_at(guess[static_cast<std::size_t>(k)], r, t, dt));
    }
    best = std::max(best, worst);
  }
  return best;
}

}  // namespace rfs_oracle

#endif  // RFSDRIVE__TESTS__ORACLE__RFS_ORACLE_HPP_
