// SPDX-License-Identifier: Apache-2.0
//
// irsmimo — joint active/passive beamforming simulator for IRS-assisted
// massive MIMO downlinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <stdexcept>

#include "irsmimo/common.hpp"

namespace irsmimo {

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct AzEl {
  double azimuth = 0.0;    // radians, measured from the array broadside
  double elevation = 0.0;  // radians, positive above the horizontal plane
};

// Direction of `target` as seen from an array at `source`. The array
// broadside (normal) lies in the global x-y plane at azimuth
// `boresight_azimuth`; the local azimuth is measured from that normal,
// positive toward global +y when the normal points along +x. Elevation is
// asin(dz / range), independent of orientation.
inline AzEl angles_from_geometry(const Position& source, const Position& target,
                                 double boresight_azimuth = 0.0) {
  const double dx = target.x - source.x;
  const double dy = target.y - source.y;
  const double dz = target.z - source.z;
  const double range = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (range == 0.0) {
    throw std::invalid_argument("angles_from_geometry: source and target coincide");
  }
  double sin_elevation = dz / range;
  sin_elevation = std::max(-1.0, std::min(1.0, sin_elevation));
  AzEl result;
  result.elevation = std::asin(sin_elevation);
  result.azimuth = wrap_pi(std::atan2(dy, dx) - boresight_azimuth);
  return result;
}

}  // namespace irsmimo
