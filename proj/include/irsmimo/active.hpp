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
// Max-min SINR active beamforming for fixed IRS phases. For composite
// channels h_1..h_K and a total power budget P, the balanced optimum is
// characterized by virtual (uplink-dual) powers q solving the fixed point
//   q_k = tau / (h_k^H (sum_{i != k} q_i h_i h_i^H + sigma^2 I)^{-1} h_k),
//   sum_k q_k = P,
// with precoders the regularized-inverse directions and downlink powers the
// solution of a K x K linear system that equalizes every user's SINR at tau.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "irsmimo/common.hpp"

namespace irsmimo {

struct SolverSettings {
  double tolerance = 1e-9;   // relative fixed-point residual
  int max_iterations = 500;
  bool random_init = false;  // default is the uniform split q = (P/K) * 1
};

struct FixedPointResult {
  Eigen::VectorXd virtual_powers;  // q, sums to P
  double balanced_sinr = 0.0;      // tau
  int iterations = 0;
  bool converged = false;
};

struct BeamformingSolution {
  Eigen::MatrixXcd precoders;      // N x K, unit-norm columns
  Eigen::VectorXd powers;          // p, sums to P
  Eigen::VectorXd virtual_powers;  // q, sums to P
  double balanced_sinr = 0.0;      // tau
  int iterations = 0;
  bool converged = false;
};

namespace detail {

inline void check_active_inputs(const Eigen::MatrixXcd& channels, double total_power,
                                double noise_power) {
  if (channels.cols() < 1) throw std::invalid_argument("active: need at least one user");
  if (total_power <= 0.0) throw std::invalid_argument("active: total power must be positive");
  if (noise_power <= 0.0) throw std::invalid_argument("active: noise power must be positive");
  for (Eigen::Index k = 0; k < channels.cols(); ++k) {
    if (channels.col(k).norm() == 0.0) {
      throw DegenerateChannelError("active: channel vector for user " + std::to_string(k) +
                                   " is zero");
    }
  }
}

// Quadratic forms g_k = h_k^H (sum_{i != k} q_i h_i h_i^H + sigma^2 I)^{-1} h_k
// for all users at the given virtual powers. The interference-plus-noise
// matrix is Hermitian positive definite for sigma^2 > 0, so each solve uses a
// Cholesky factorization of the full sum with the own-user term removed.
inline Eigen::VectorXd interference_quadratic_forms(const Eigen::MatrixXcd& channels,
                                                    const Eigen::VectorXd& virtual_powers,
                                                    double noise_power) {
  const Eigen::Index n = channels.rows();
  const Eigen::Index users = channels.cols();
  Eigen::MatrixXcd base = noise_power * Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index i = 0; i < users; ++i) {
    base.selfadjointView<Eigen::Lower>().rankUpdate(channels.col(i), virtual_powers(i));
  }
  Eigen::VectorXd forms(users);
  Eigen::MatrixXcd own(n, n);
  for (Eigen::Index k = 0; k < users; ++k) {
    own = base;
    own.selfadjointView<Eigen::Lower>().rankUpdate(channels.col(k), -virtual_powers(k));
    const Eigen::LLT<Eigen::MatrixXcd> llt(own);
    forms(k) = channels.col(k).dot(llt.solve(channels.col(k))).real();
  }
  return forms;
}

}  // namespace detail

// Solves the virtual-power fixed point by damped-free iteration: at each step
//   q'_k = 1 / g_k(q),   q <- P * q' / sum(q'),
// stopping when the relative step max_k |q'' - q| / q drops below the
// tolerance. The balanced SINR is computed afterwards as
//   tau = P / sum_k (1 / g_k(q)).
// Non-convergence within max_iterations is reported in the result, never
// silently ignored.
inline FixedPointResult fixed_point_q(const Eigen::MatrixXcd& channels, double total_power,
                                      double noise_power, const SolverSettings& settings = {},
                                      Rng* rng = nullptr) {
  detail::check_active_inputs(channels, total_power, noise_power);
  if (settings.tolerance <= 0.0 || settings.max_iterations < 1) {
    throw std::invalid_argument("fixed_point_q: bad solver settings");
  }
  const Eigen::Index users = channels.cols();

  Eigen::VectorXd q(users);
  if (settings.random_init) {
    if (rng == nullptr) {
      throw std::invalid_argument("fixed_point_q: random_init requires an rng");
    }
    for (Eigen::Index k = 0; k < users; ++k) q(k) = rng->uniform(0.1, 1.0);
    q *= total_power / q.sum();
  } else {
    q.setConstant(total_power / static_cast<double>(users));
  }

  FixedPointResult result;
  for (int iteration = 1; iteration <= settings.max_iterations; ++iteration) {
    const Eigen::VectorXd forms = detail::interference_quadratic_forms(channels, q, noise_power);
    const Eigen::VectorXd unnormalized = forms.cwiseInverse();
    const Eigen::VectorXd next = (total_power / unnormalized.sum()) * unnormalized;
    const double residual = ((next - q).cwiseAbs().cwiseQuotient(q)).maxCoeff();
    if (residual <= settings.tolerance) {
      result.virtual_powers = q;
      result.balanced_sinr = total_power / unnormalized.sum();
      result.iterations = iteration;
      result.converged = true;
      return result;
    }
    q = next;
  }

  const Eigen::VectorXd forms = detail::interference_quadratic_forms(channels, q, noise_power);
  result.virtual_powers = q;
  result.balanced_sinr = total_power / forms.cwiseInverse().sum();
  result.iterations = settings.max_iterations;
  result.converged = false;
  return result;
}

// Optimal unit-norm precoders for given virtual powers:
//   f_k ∝ (sum_{i != k} q_i h_i h_i^H + sigma^2 I)^{-1} h_k.
inline Eigen::MatrixXcd precoders(const Eigen::MatrixXcd& channels,
                                  const Eigen::VectorXd& virtual_powers, double noise_power) {
  if (virtual_powers.size() != channels.cols() || virtual_powers.size() == 0 ||
      virtual_powers.minCoeff() <= 0.0) {
    throw std::invalid_argument("precoders: virtual powers must be positive, one per user");
  }
  detail::check_active_inputs(channels, virtual_powers.sum(), noise_power);
  const Eigen::Index n = channels.rows();
  const Eigen::Index users = channels.cols();
  Eigen::MatrixXcd base = noise_power * Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index i = 0; i < users; ++i) {
    base.selfadjointView<Eigen::Lower>().rankUpdate(channels.col(i), virtual_powers(i));
  }
  Eigen::MatrixXcd result(n, users);
  Eigen::MatrixXcd own(n, n);
  for (Eigen::Index k = 0; k < users; ++k) {
    own = base;
    own.selfadjointView<Eigen::Lower>().rankUpdate(channels.col(k), -virtual_powers(k));
    const Eigen::VectorXcd direction = Eigen::LLT<Eigen::MatrixXcd>(own).solve(channels.col(k));
    result.col(k) = direction / direction.norm();
  }
  return result;
}

// Per-user SINR of an explicit (precoder, power) pair:
//   SINR_k = p_k |h_k^H f_k|^2 / (sum_{i != k} p_i |h_k^H f_i|^2 + sigma^2).
inline Eigen::VectorXd per_user_sinr(const Eigen::MatrixXcd& channels,
                                     const Eigen::MatrixXcd& precoder_matrix,
                                     const Eigen::VectorXd& powers, double noise_power) {
  const Eigen::Index users = channels.cols();
  if (precoder_matrix.rows() != channels.rows() || precoder_matrix.cols() != users ||
      powers.size() != users) {
    throw std::invalid_argument("per_user_sinr: dimension mismatch");
  }
  const Eigen::MatrixXd coupling = (channels.adjoint() * precoder_matrix).cwiseAbs2();
  Eigen::VectorXd sinr(users);
  for (Eigen::Index k = 0; k < users; ++k) {
    double interference = noise_power;
    for (Eigen::Index i = 0; i < users; ++i) {
      if (i != k) interference += powers(i) * coupling(k, i);
    }
    sinr(k) = powers(k) * coupling(k, k) / interference;
  }
  return sinr;
}

// Downlink powers that equalize every user's SINR at tau: solves A p = b with
//   A(k,k) = |h_k^H f_k|^2,  A(k,i) = -tau |h_k^H f_i|^2 (i != k),
//   b = tau * sigma^2 * 1.
// A singular system or a non-positive solution signals an inconsistent tau
// and raises InfeasibleBalancingError instead of clamping.
inline Eigen::VectorXd power_alloc(const Eigen::MatrixXcd& channels,
                                   const Eigen::MatrixXcd& precoder_matrix, double balanced_sinr,
                                   double noise_power) {
  const Eigen::Index users = channels.cols();
  if (precoder_matrix.rows() != channels.rows() || precoder_matrix.cols() != users) {
    throw std::invalid_argument("power_alloc: dimension mismatch");
  }
  const Eigen::MatrixXd coupling = (channels.adjoint() * precoder_matrix).cwiseAbs2();
  Eigen::MatrixXd system(users, users);
  for (Eigen::Index k = 0; k < users; ++k) {
    for (Eigen::Index i = 0; i < users; ++i) {
      system(k, i) = i == k ? coupling(k, k) : -balanced_sinr * coupling(k, i);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw InfeasibleBalancingError("power_alloc: singular balancing system");
  }
  const Eigen::VectorXd powers =
      lu.solve(Eigen::VectorXd::Constant(users, balanced_sinr * noise_power));
  if (powers.minCoeff() <= 0.0) {
    throw InfeasibleBalancingError("power_alloc: non-positive power in solution");
  }
  return powers;
}

// Full active-beamforming pipeline: virtual powers, then precoders, then
// downlink powers. At the optimum every user's SINR equals tau and both power
// vectors sum to the budget.
inline BeamformingSolution solve_active(const Eigen::MatrixXcd& channels, double total_power,
                                        double noise_power, const SolverSettings& settings = {},
                                        Rng* rng = nullptr) {
  const FixedPointResult fixed_point = fixed_point_q(channels, total_power, noise_power, settings, rng);
  BeamformingSolution solution;
  solution.precoders = precoders(channels, fixed_point.virtual_powers, noise_power);
  solution.powers =
      power_alloc(channels, solution.precoders, fixed_point.balanced_sinr, noise_power);
  solution.virtual_powers = fixed_point.virtual_powers;
  solution.balanced_sinr = fixed_point.balanced_sinr;
  solution.iterations = fixed_point.iterations;
  solution.converged = fixed_point.converged;
  return solution;
}

}  // namespace irsmimo
