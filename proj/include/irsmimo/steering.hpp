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

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "irsmimo/common.hpp"

namespace irsmimo {

// Antenna dimensions shared by the whole scene: an N-element ULA at the BS
// and M_y x M_z UPAs at the IRSs, all with the same element spacing in
// wavelengths.
struct ArrayGeometry {
  int bs_antennas = 1;   // N
  int irs_rows = 1;      // M_y, horizontal axis
  int irs_cols = 1;      // M_z, vertical axis
  double element_spacing = 0.5;  // d / lambda

  int irs_elements() const { return irs_rows * irs_cols; }

  void validate() const {
    if (bs_antennas < 1) throw std::invalid_argument("ArrayGeometry: bs_antennas must be >= 1");
    if (irs_rows < 1 || irs_cols < 1) {
      throw std::invalid_argument("ArrayGeometry: irs_rows and irs_cols must be >= 1");
    }
    if (element_spacing <= 0.0) {
      throw std::invalid_argument("ArrayGeometry: element_spacing must be positive");
    }
  }
};

// Unit-norm response of an N-element uniform linear array:
//   entry n = exp(j * 2*pi * spacing * n * sin(azimuth)) / sqrt(N).
inline Eigen::VectorXcd ula_response(double azimuth, int n, double spacing = 0.5) {
  if (n < 1) throw std::invalid_argument("ula_response: array size must be >= 1");
  Eigen::VectorXcd response(n);
  const double step = two_pi * spacing * std::sin(azimuth);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    response(i) = std::polar(scale, step * static_cast<double>(i));
  }
  return response;
}

// Unit-norm response of a rows x cols uniform planar array. Element (m1, m2)
// — m1 along the horizontal axis, m2 along the vertical axis, both 0-based —
// is stored at index m1*cols + m2 (row-major) and carries the phase
//   2*pi * spacing * (m1 * cos(elevation) * sin(azimuth) + m2 * sin(elevation)).
// The same ordering is used by every phase vector in the project.
inline Eigen::VectorXcd upa_response(double azimuth, double elevation, int rows, int cols,
                                     double spacing = 0.5) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("upa_response: array dimensions must be >= 1");
  }
  const int m = rows * cols;
  Eigen::VectorXcd response(m);
  const double horizontal = two_pi * spacing * std::cos(elevation) * std::sin(azimuth);
  const double vertical = two_pi * spacing * std::sin(elevation);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (int m1 = 0; m1 < rows; ++m1) {
    for (int m2 = 0; m2 < cols; ++m2) {
      response(m1 * cols + m2) =
          std::polar(scale, horizontal * static_cast<double>(m1) + vertical * static_cast<double>(m2));
    }
  }
  return response;
}

}  // namespace irsmimo
