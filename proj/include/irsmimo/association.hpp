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
//
// IRS-user association: each IRS is phase-tuned to exactly one user, and the
// asymptotic interference-free property makes the resulting gain columns
// orthogonal, so choosing the assignment reduces to minimizing
//   sum_k 1 / (sum_{l assigned to k} w_star_{l,k}^2)
// over all K^L assignments that leave no user unserved.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "irsmimo/channel.hpp"
#include "irsmimo/common.hpp"
#include "irsmimo/phases.hpp"

namespace irsmimo {

// Assignment of every IRS to exactly one user: irs_to_user[l] = k.
struct Association {
  std::vector<int> irs_to_user;

  int irs_count() const { return static_cast<int>(irs_to_user.size()); }

  bool serves_all(int users) const {
    std::vector<bool> served(users, false);
    for (const int user : irs_to_user) {
      if (user < 0 || user >= users) return false;
      served[user] = true;
    }
    for (const bool hit : served) {
      if (!hit) return false;
    }
    return true;
  }
};

inline bool operator==(const Association& a, const Association& b) {
  return a.irs_to_user == b.irs_to_user;
}

struct AssociationResult {
  Association association;
  double objective = 0.0;  // sum_k 1 / ||w_k||^2
};

// Objective of an assignment under the max-gain matrix; +inf when some user
// receives no IRS.
inline double association_objective(const Eigen::MatrixXd& max_gains,
                                    const Association& association) {
  const int users = static_cast<int>(max_gains.cols());
  if (association.irs_count() != max_gains.rows()) {
    throw std::invalid_argument("association_objective: assignment size differs from gain rows");
  }
  std::vector<double> norm_sq(users, 0.0);
  for (int l = 0; l < association.irs_count(); ++l) {
    const int user = association.irs_to_user[l];
    if (user < 0 || user >= users) {
      throw std::invalid_argument("association_objective: user index out of range");
    }
    norm_sq[user] += max_gains(l, user) * max_gains(l, user);
  }
  double objective = 0.0;
  for (const double value : norm_sq) {
    if (value == 0.0) return std::numeric_limits<double>::infinity();
    objective += 1.0 / value;
  }
  return objective;
}

// Globally optimal association by enumerating all K^L assignments in
// lexicographic order (ties keep the first, i.e. lexicographically smallest,
// minimizer). Assignments leaving a user unserved are skipped. Refuses
// instances whose enumeration would exceed `enumeration_limit`; use
// associate_greedy for those.
inline AssociationResult associate_exhaustive(const Eigen::MatrixXd& max_gains,
                                              std::uint64_t enumeration_limit = 10'000'000) {
  const int irs_count = static_cast<int>(max_gains.rows());
  const int users = static_cast<int>(max_gains.cols());
  if (irs_count < users) {
    throw InfeasibleAssociationError("associate_exhaustive: fewer IRSs than users");
  }
  std::uint64_t total = 1;
  for (int l = 0; l < irs_count; ++l) {
    total *= static_cast<std::uint64_t>(users);
    if (total > enumeration_limit) {
      throw std::invalid_argument(
          "associate_exhaustive: " + std::to_string(users) + "^" + std::to_string(irs_count) +
          " assignments exceed the enumeration limit; use associate_greedy instead");
    }
  }

  Association current;
  current.irs_to_user.assign(irs_count, 0);
  AssociationResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (;;) {
    const double objective = association_objective(max_gains, current);
    if (objective < best.objective) {
      best.objective = objective;
      best.association = current;
    }
    // Odometer increment on the last index keeps lexicographic order.
    int position = irs_count - 1;
    while (position >= 0 && current.irs_to_user[position] == users - 1) {
      current.irs_to_user[position] = 0;
      --position;
    }
    if (position < 0) break;
    ++current.irs_to_user[position];
  }
  return best;
}

// Greedy association. Phase 1 (K rounds): take the largest remaining entry
// over unassigned IRS rows and unserved user columns, assign, remove both.
// Phase 2 (L-K rounds): every remaining IRS takes the largest entry in its
// row over all users. Ties break toward the smallest (l, k).
inline Association associate_greedy(const Eigen::MatrixXd& max_gains) {
  const int irs_count = static_cast<int>(max_gains.rows());
  const int users = static_cast<int>(max_gains.cols());
  if (irs_count < users) {
    throw InfeasibleAssociationError("associate_greedy: fewer IRSs than users");
  }
  Association result;
  result.irs_to_user.assign(irs_count, -1);
  std::vector<bool> irs_used(irs_count, false);
  std::vector<bool> user_served(users, false);

  for (int round = 0; round < users; ++round) {
    int best_l = -1;
    int best_k = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int l = 0; l < irs_count; ++l) {
      if (irs_used[l]) continue;
      for (int k = 0; k < users; ++k) {
        if (user_served[k]) continue;
        if (max_gains(l, k) > best_value) {
          best_value = max_gains(l, k);
          best_l = l;
          best_k = k;
        }
      }
    }
    irs_used[best_l] = true;
    user_served[best_k] = true;
    result.irs_to_user[best_l] = best_k;
  }

  for (int l = 0; l < irs_count; ++l) {
    if (irs_used[l]) continue;
    int best_k = 0;
    for (int k = 1; k < users; ++k) {
      if (max_gains(l, k) > max_gains(l, best_k)) best_k = k;
    }
    result.irs_to_user[l] = best_k;
  }
  return result;
}

// Optimal phase configuration for an association: IRS l is tuned to its
// assigned user's channel.
inline PhaseConfig apply_association(const Association& association,
                                     const std::vector<RankOneChannel>& bs_irs,
                                     const std::vector<std::vector<IrsUserChannel>>& irs_user,
                                     const ArrayGeometry& geometry) {
  detail::check_channel_set(bs_irs, irs_user);
  const int irs_count = static_cast<int>(bs_irs.size());
  const int users = static_cast<int>(irs_user.front().size());
  if (association.irs_count() != irs_count) {
    throw std::invalid_argument("apply_association: association size differs from IRS count");
  }
  PhaseConfig config;
  config.phases.reserve(irs_count);
  for (int l = 0; l < irs_count; ++l) {
    const int user = association.irs_to_user[l];
    if (user < 0 || user >= users) {
      throw std::invalid_argument("apply_association: user index out of range");
    }
    config.phases.push_back(
        optimal_phases(irs_user[l][user].coefficients, bs_irs[l].irs_response(geometry)));
  }
  return config;
}

// Interference-free balanced SINR of an association:
//   tau = P * N * M^2 / sigma^2 / sum_k (sum_{l assigned to k} g_{l,k}^2)^{-1}
// where g_{l,k} are the per-pair gain products (for LOS channels,
// |alpha_l * beta_{l,k}|, i.e. the max-gain matrix entries).
inline double theoretical_min_sinr(const Association& association,
                                   const Eigen::MatrixXd& gain_products, double total_power,
                                   int bs_antennas, int irs_elements, double noise_power) {
  const double objective = association_objective(gain_products, association);
  if (!std::isfinite(objective)) {
    throw InfeasibleAssociationError("theoretical_min_sinr: some user is unserved");
  }
  const double m = static_cast<double>(irs_elements);
  return total_power * static_cast<double>(bs_antennas) * m * m / noise_power / objective;
}

}  // namespace irsmimo
