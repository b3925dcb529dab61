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
#include <vector>

#include "irsmimo/common.hpp"

namespace irsmimo {

// Per-IRS element phase shifts theta_l in [0, 2*pi), one length-M vector per
// IRS. The implied reflection coefficients exp(j*theta) are unit-modulus.
struct PhaseConfig {
  std::vector<Eigen::VectorXd> phases;

  std::size_t irs_count() const { return phases.size(); }
};

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// |sinc(m*u) / sinc(u)| = |sin(m*u) / (m*sin(u))|, the normalized magnitude
// of the m-element array factor at phase increment 2u. Both numerator and
// denominator vanish together at u = k*pi (grating lobes, integer m), where
// the limit has magnitude 1.
inline double sinc_ratio(int m, double u) {
  const double denominator = std::sin(u);
  if (std::abs(denominator) < 1e-14) return 1.0;
  return std::abs(std::sin(static_cast<double>(m) * u) / (static_cast<double>(m) * denominator));
}

// Phase shifts that align every reflected element with the IRS-user channel:
//   theta_m = arg(h(m)) - arg(a_r(m)),  reduced to [0, 2*pi).
// Elements with |h(m)| = 0 get theta_m = 0; they contribute nothing either way.
inline Eigen::VectorXd optimal_phases(const Eigen::VectorXcd& coefficients,
                                      const Eigen::VectorXcd& irs_response) {
  if (coefficients.size() != irs_response.size()) {
    throw std::invalid_argument("optimal_phases: channel and steering vector sizes differ");
  }
  Eigen::VectorXd theta(coefficients.size());
  for (Eigen::Index m = 0; m < coefficients.size(); ++m) {
    if (std::abs(coefficients(m)) == 0.0) {
      theta(m) = 0.0;
    } else {
      theta(m) = wrap_two_pi(std::arg(coefficients(m)) - std::arg(irs_response(m)));
    }
  }
  return theta;
}

// Passive beamforming gain of one IRS toward one user:
//   w = conj(alpha) * a_r^H * diag(exp(-j*theta)) * h / sqrt(M).
inline Complex passive_gain(const Eigen::VectorXd& theta, Complex bs_irs_gain,
                            const Eigen::VectorXcd& irs_response,
                            const Eigen::VectorXcd& coefficients) {
  const Eigen::Index m = coefficients.size();
  if (theta.size() != m || irs_response.size() != m) {
    throw std::invalid_argument("passive_gain: dimension mismatch");
  }
  Complex sum{0.0, 0.0};
  for (Eigen::Index i = 0; i < m; ++i) {
    sum += std::conj(irs_response(i)) * std::polar(1.0, -theta(i)) * coefficients(i);
  }
  return std::conj(bs_irs_gain) * sum / std::sqrt(static_cast<double>(m));
}

// Maximum achievable |w| over all phase configurations:
//   w_star = (|alpha| / M) * sum_m |h(m)|,
// attained by optimal_phases (triangle-inequality equality).
inline double max_gain(Complex bs_irs_gain, const Eigen::VectorXcd& coefficients) {
  const double m = static_cast<double>(coefficients.size());
  return std::abs(bs_irs_gain) * coefficients.cwiseAbs().sum() / m;
}

// Closed-form cross gain of a LOS-modeled IRS whose phases are tuned to a
// serving user, evaluated toward a victim user:
//   |w| = |alpha * beta_victim| * |sinc(pi*d/lambda * M_y * delta) / sinc(pi*d/lambda * delta)|
//                               * |sinc(pi*d/lambda * M_z * gamma) / sinc(pi*d/lambda * gamma)|
// with
//   delta = cos(victim_el)*sin(victim_az) - cos(serving_el)*sin(serving_az)
//   gamma = sin(victim_el) - sin(serving_el).
// The IRS arrival angles cancel out of the magnitude. Both ratios equal 1
// when the angle gap closes, and decay as O(1/M_y), O(1/M_z) away from it.
inline double aic_cross_gain_los(Complex bs_irs_gain, Complex victim_gain,
                                 double serving_azimuth, double serving_elevation,
                                 double victim_azimuth, double victim_elevation, int rows,
                                 int cols, double spacing = 0.5) {
  const double delta = std::cos(victim_elevation) * std::sin(victim_azimuth) -
                       std::cos(serving_elevation) * std::sin(serving_azimuth);
  const double gamma = std::sin(victim_elevation) - std::sin(serving_elevation);
  return std::abs(bs_irs_gain) * std::abs(victim_gain) *
         sinc_ratio(rows, pi * spacing * delta) * sinc_ratio(cols, pi * spacing * gamma);
}

}  // namespace irsmimo
