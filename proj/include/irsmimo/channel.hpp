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
#include <variant>
#include <vector>

#include "irsmimo/common.hpp"
#include "irsmimo/geometry.hpp"
#include "irsmimo/pathloss.hpp"
#include "irsmimo/phases.hpp"
#include "irsmimo/steering.hpp"

namespace irsmimo {

// BS-to-IRS channel in factored form,
//   G = sqrt(N*M) * gain * a_r(aoa) * a_t(aod)^H,
// kept as (gain, angles) so that M ~ 10^3 scenes never materialize the
// M x N matrix outside of debug paths.
struct RankOneChannel {
  Complex gain{0.0, 0.0};     // alpha
  double aoa_azimuth = 0.0;   // arrival at the IRS
  double aoa_elevation = 0.0;
  double aod_azimuth = 0.0;   // departure at the BS ULA

  Eigen::VectorXcd irs_response(const ArrayGeometry& geometry) const {
    return upa_response(aoa_azimuth, aoa_elevation, geometry.irs_rows, geometry.irs_cols,
                        geometry.element_spacing);
  }

  Eigen::VectorXcd bs_response(const ArrayGeometry& geometry) const {
    return ula_response(aod_azimuth, geometry.bs_antennas, geometry.element_spacing);
  }

  // Debug path: the full M x N matrix. Exactly one nonzero singular value,
  // equal to sqrt(N*M) * |gain|.
  Eigen::MatrixXcd materialize(const ArrayGeometry& geometry) const {
    const double scale =
        std::sqrt(static_cast<double>(geometry.bs_antennas) * geometry.irs_elements());
    return scale * gain * irs_response(geometry) * bs_response(geometry).adjoint();
  }
};

struct LosGain {
  Complex gain{0.0, 0.0};  // beta
  double aod_azimuth = 0.0;
  double aod_elevation = 0.0;
};

struct RayleighFading {
  double variance = 0.0;  // zeta
};

// IRS-to-user channel: the length-M coefficient vector plus the model it was
// drawn from. LOS channels are beta * sqrt(M) * a_r(aod), so every entry has
// magnitude |beta|; Rayleigh channels are CN(0, zeta*I).
struct IrsUserChannel {
  Eigen::VectorXcd coefficients;
  std::variant<LosGain, RayleighFading> kind;

  bool is_los() const { return std::holds_alternative<LosGain>(kind); }
};

enum class ChannelKind { Los, Rayleigh };

// Draws a rank-one BS-IRS channel: gain ~ CN(0, kappa) with kappa the path
// loss gain at the BS-IRS distance, angles from the node geometry.
inline RankOneChannel sample_bs_irs(const Position& bs_position, double bs_boresight,
                                    const Position& irs_position, double irs_boresight,
                                    const PathLossModel& model, Rng& rng) {
  const double kappa = path_loss_gain(distance(bs_position, irs_position), model);
  RankOneChannel channel;
  channel.gain = rng.complex_normal(kappa);
  const AzEl arrival = angles_from_geometry(irs_position, bs_position, irs_boresight);
  channel.aoa_azimuth = arrival.azimuth;
  channel.aoa_elevation = arrival.elevation;
  channel.aod_azimuth = angles_from_geometry(bs_position, irs_position, bs_boresight).azimuth;
  return channel;
}

// Draws an IRS-user channel. LOS: beta ~ CN(0, rho) with rho the path loss
// gain, coefficients beta * sqrt(M) * a_r(aod). Rayleigh: CN(0, zeta*I) with
// zeta set to the same path loss gain.
inline IrsUserChannel sample_irs_user(const Position& irs_position, double irs_boresight,
                                      const Position& user_position,
                                      const ArrayGeometry& geometry, const PathLossModel& model,
                                      ChannelKind kind, Rng& rng) {
  const double rho = path_loss_gain(distance(irs_position, user_position), model);
  const int m = geometry.irs_elements();
  IrsUserChannel channel;
  if (kind == ChannelKind::Los) {
    LosGain los;
    los.gain = rng.complex_normal(rho);
    const AzEl departure = angles_from_geometry(irs_position, user_position, irs_boresight);
    los.aod_azimuth = departure.azimuth;
    los.aod_elevation = departure.elevation;
    channel.coefficients =
        los.gain * std::sqrt(static_cast<double>(m)) *
        upa_response(los.aod_azimuth, los.aod_elevation, geometry.irs_rows, geometry.irs_cols,
                     geometry.element_spacing);
    channel.kind = los;
  } else {
    channel.coefficients.resize(m);
    for (int i = 0; i < m; ++i) channel.coefficients(i) = rng.complex_normal(rho);
    channel.kind = RayleighFading{rho};
  }
  return channel;
}

namespace detail {

inline void check_channel_set(const std::vector<RankOneChannel>& bs_irs,
                              const std::vector<std::vector<IrsUserChannel>>& irs_user) {
  if (bs_irs.empty() || irs_user.size() != bs_irs.size()) {
    throw std::invalid_argument("channel set: BS-IRS and IRS-user outer sizes differ");
  }
  const std::size_t users = irs_user.front().size();
  if (users == 0) throw std::invalid_argument("channel set: no users");
  for (const auto& row : irs_user) {
    if (row.size() != users) throw std::invalid_argument("channel set: ragged IRS-user grid");
  }
}

}  // namespace detail

// Realized passive beamforming gains w_{l,k} for a given phase configuration,
// as an L x K complex matrix.
inline Eigen::MatrixXcd gain_matrix(const std::vector<RankOneChannel>& bs_irs,
                                    const std::vector<std::vector<IrsUserChannel>>& irs_user,
                                    const PhaseConfig& phases, const ArrayGeometry& geometry) {
  detail::check_channel_set(bs_irs, irs_user);
  const int irs_count = static_cast<int>(bs_irs.size());
  const int users = static_cast<int>(irs_user.front().size());
  if (phases.phases.size() != static_cast<std::size_t>(irs_count)) {
    throw std::invalid_argument("gain_matrix: phase configuration has wrong IRS count");
  }
  Eigen::MatrixXcd gains(irs_count, users);
  for (int l = 0; l < irs_count; ++l) {
    const Eigen::VectorXcd response = bs_irs[l].irs_response(geometry);
    for (int k = 0; k < users; ++k) {
      gains(l, k) =
          passive_gain(phases.phases[l], bs_irs[l].gain, response, irs_user[l][k].coefficients);
    }
  }
  return gains;
}

// Upper bounds w_star_{l,k} = (|alpha_l| / M) * sum_m |h_{l,k}(m)| on the
// passive beamforming gains, as an L x K real matrix.
inline Eigen::MatrixXd max_gain_matrix(const std::vector<RankOneChannel>& bs_irs,
                                       const std::vector<std::vector<IrsUserChannel>>& irs_user) {
  detail::check_channel_set(bs_irs, irs_user);
  const int irs_count = static_cast<int>(bs_irs.size());
  const int users = static_cast<int>(irs_user.front().size());
  Eigen::MatrixXd bounds(irs_count, users);
  for (int l = 0; l < irs_count; ++l) {
    for (int k = 0; k < users; ++k) {
      bounds(l, k) = max_gain(bs_irs[l].gain, irs_user[l][k].coefficients);
    }
  }
  return bounds;
}

// Composite BS-user channels h_k = sum_l G_l^H Phi_l^H h_{l,k}, computed in
// factored form as sqrt(N*M^2) * sum_l a_t(aod_l) * w_{l,k} without ever
// materializing G_l. Returns an N x K matrix with h_k in column k.
inline Eigen::MatrixXcd composite_channel(const std::vector<RankOneChannel>& bs_irs,
                                          const std::vector<std::vector<IrsUserChannel>>& irs_user,
                                          const PhaseConfig& phases,
                                          const ArrayGeometry& geometry) {
  const Eigen::MatrixXcd gains = gain_matrix(bs_irs, irs_user, phases, geometry);
  const int irs_count = static_cast<int>(bs_irs.size());
  for (int l = 0; l < irs_count; ++l) {
    if (irs_user[l].front().coefficients.size() != geometry.irs_elements()) {
      throw std::invalid_argument("composite_channel: channel length differs from IRS geometry");
    }
  }
  Eigen::MatrixXcd steering(geometry.bs_antennas, irs_count);
  for (int l = 0; l < irs_count; ++l) steering.col(l) = bs_irs[l].bs_response(geometry);
  const double scale = std::sqrt(static_cast<double>(geometry.bs_antennas)) *
                       static_cast<double>(geometry.irs_elements());
  return scale * (steering * gains);
}

// Geometric multipath BS-user channel used by the IRS-free baseline:
//   h = sqrt(N) * sum_l alpha_l * a_t(psi_l),
// with psi_l uniform on [-pi/2, pi/2] and alpha_l ~ CN(0, per_path_variance).
inline Eigen::VectorXcd conventional_channel(int bs_antennas, int path_count,
                                             double per_path_variance, double spacing, Rng& rng) {
  if (path_count < 1) throw std::invalid_argument("conventional_channel: need at least one path");
  Eigen::VectorXcd channel = Eigen::VectorXcd::Zero(bs_antennas);
  for (int path = 0; path < path_count; ++path) {
    const double aod = rng.uniform(-pi / 2.0, pi / 2.0);
    const Complex gain = rng.complex_normal(per_path_variance);
    channel += gain * ula_response(aod, bs_antennas, spacing);
  }
  return std::sqrt(static_cast<double>(bs_antennas)) * channel;
}

}  // namespace irsmimo
