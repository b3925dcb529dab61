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

// Distance-dependent path loss: linear power gain
//   c0 * (distance / reference_distance)^(-exponent)
// with c0 the gain at the reference distance.
struct PathLossModel {
  double c0_db = -30.0;
  double reference_distance = 1.0;  // meters
  double exponent = 2.0;
};

inline double path_loss_gain(double distance_m, const PathLossModel& model) {
  if (distance_m <= 0.0) {
    throw std::invalid_argument("path_loss_gain: distance must be positive");
  }
  return db_to_linear(model.c0_db) *
         std::pow(distance_m / model.reference_distance, -model.exponent);
}

}  // namespace irsmimo
