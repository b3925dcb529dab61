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

#include <catch2/catch.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "irsmimo/association.hpp"
#include "irsmimo/channel.hpp"
#include "irsmimo/phases.hpp"
#include "irsmimo/scenario.hpp"

using namespace irsmimo;

namespace {

Eigen::MatrixXd gains_2x2(double a, double b, double c, double d) {
  Eigen::MatrixXd w(2, 2);
  w << a, b, c, d;
  return w;
}

}  // namespace

TEST_CASE("optimal_phases - real positive channel over a zero-phase steering vector") {
  Eigen::VectorXcd h(3);
  h << Complex(1.0, 0.0), Complex(2.0, 0.0), Complex(3.0, 0.0);
  const Eigen::VectorXcd a_r = upa_response(0.0, 0.0, 1, 3);  // all entries real positive
  const Eigen::VectorXd theta = optimal_phases(h, a_r);
  for (int m = 0; m < 3; ++m) CHECK(theta(m) == 0.0);
}

TEST_CASE("optimal_phases - zero channel entries contribute phase zero") {
  Eigen::VectorXcd h(3);
  h << Complex(0.0, 0.0), Complex(0.0, 2.0), Complex(-1.0, 0.0);
  const Eigen::VectorXcd a_r = upa_response(0.3, 0.1, 1, 3);
  const Eigen::VectorXd theta = optimal_phases(h, a_r);
  CHECK(theta(0) == 0.0);
  for (int m = 0; m < 3; ++m) {
    CHECK(theta(m) >= 0.0);
    CHECK(theta(m) < two_pi);
  }
}

TEST_CASE("optimal_phases - LOS channel reproduces the per-element phase ramp") {
  // For a LOS channel with real positive gain, the aligned phases equal the
  // steering-vector phase difference between the user departure direction and
  // the BS arrival direction:
  //   mu(m1,m2) = 2*pi*spacing * (m1*(cos(w_u)sin(p_u) - cos(w_a)sin(p_a))
  //                             + m2*(sin(w_u) - sin(w_a))).
  const int rows = 5;
  const int cols = 7;
  const double spacing = 0.5;
  Rng rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const double user_az = rng.uniform(-1.2, 1.2);
    const double user_el = rng.uniform(-1.0, 1.0);
    const double arrival_az = rng.uniform(-1.2, 1.2);
    const double arrival_el = rng.uniform(-1.0, 1.0);

    const Eigen::VectorXcd a_user = upa_response(user_az, user_el, rows, cols, spacing);
    const Eigen::VectorXcd a_arrival = upa_response(arrival_az, arrival_el, rows, cols, spacing);
    const Eigen::VectorXcd h = std::sqrt(static_cast<double>(rows * cols)) * a_user;
    const Eigen::VectorXd theta = optimal_phases(h, a_arrival);

    const double horizontal = two_pi * spacing * (std::cos(user_el) * std::sin(user_az) -
                                                  std::cos(arrival_el) * std::sin(arrival_az));
    const double vertical = two_pi * spacing * (std::sin(user_el) - std::sin(arrival_el));
    for (int m1 = 0; m1 < rows; ++m1) {
      for (int m2 = 0; m2 < cols; ++m2) {
        const double mu = horizontal * m1 + vertical * m2;
        CHECK(std::abs(wrap_pi(theta(m1 * cols + m2) - mu)) < 1e-12);
      }
    }
  }
}

TEST_CASE("passive_gain - aligned phases reach the bound, arbitrary phases stay below") {
  const int m = 24;
  Rng rng(27);
  Eigen::VectorXcd h(m);
  for (int i = 0; i < m; ++i) h(i) = rng.complex_normal(1.0);
  const Eigen::VectorXcd a_r = upa_response(0.4, -0.3, 4, 6);
  const Complex alpha(0.8, -0.2);

  const Eigen::VectorXd aligned = optimal_phases(h, a_r);
  const double bound = max_gain(alpha, h);
  CHECK(std::abs(passive_gain(aligned, alpha, a_r, h)) == Approx(bound).epsilon(1e-12));

  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd theta(m);
    for (int i = 0; i < m; ++i) theta(i) = rng.uniform(0.0, two_pi);
    CHECK(std::abs(passive_gain(theta, alpha, a_r, h)) <= bound * (1.0 + 1e-12));
  }
}

TEST_CASE("passive_gain - invariant under a common phase offset") {
  const int m = 12;
  Rng rng(29);
  Eigen::VectorXcd h(m);
  for (int i = 0; i < m; ++i) h(i) = rng.complex_normal(1.0);
  const Eigen::VectorXcd a_r = upa_response(0.1, 0.2, 3, 4);
  const Complex alpha(1.0, 0.5);
  Eigen::VectorXd theta(m);
  for (int i = 0; i < m; ++i) theta(i) = rng.uniform(0.0, two_pi);

  const double reference = std::abs(passive_gain(theta, alpha, a_r, h));
  for (const double offset : {0.7, 1.9, 4.4}) {
    const Eigen::VectorXd shifted = theta.array() + offset;
    CHECK(std::abs(passive_gain(shifted, alpha, a_r, h)) == Approx(reference).epsilon(1e-12));
  }
}

TEST_CASE("phase configurations imply unit-modulus reflection coefficients") {
  Rng rng(30);
  Eigen::VectorXcd h(9);
  for (int i = 0; i < 9; ++i) h(i) = rng.complex_normal(1.0);
  const Eigen::VectorXd theta = optimal_phases(h, upa_response(0.2, 0.1, 3, 3));
  for (int i = 0; i < 9; ++i) {
    CHECK(theta(i) >= 0.0);
    CHECK(theta(i) < two_pi);
    CHECK(std::abs(std::polar(1.0, theta(i))) == Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("aic_cross_gain_los - coincident directions give |alpha*beta|") {
  const Complex alpha(0.6, 0.3);
  const Complex beta(-0.2, 0.9);
  const double value = aic_cross_gain_los(alpha, beta, 0.4, -0.1, 0.4, -0.1, 8, 8);
  CHECK(value == Approx(std::abs(alpha) * std::abs(beta)).epsilon(1e-12));
}

TEST_CASE("aic_cross_gain_los - matches direct summation on LOS channels") {
  const int rows = 8;
  const int cols = 8;
  const ArrayGeometry geometry{4, rows, cols, 0.5};
  Rng rng(37);
  for (int trial = 0; trial < 8; ++trial) {
    const double serving_az = rng.uniform(-1.3, 1.3);
    const double serving_el = rng.uniform(-1.0, 1.0);
    const double victim_az = rng.uniform(-1.3, 1.3);
    const double victim_el = rng.uniform(-1.0, 1.0);
    const Complex alpha = rng.complex_normal(1.0);
    const Complex beta_serving = rng.complex_normal(1.0);
    const Complex beta_victim = rng.complex_normal(1.0);
    const Eigen::VectorXcd a_r = upa_response(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                              rows, cols, geometry.element_spacing);

    const Eigen::VectorXcd serving = beta_serving * std::sqrt(64.0) *
                                     upa_response(serving_az, serving_el, rows, cols, 0.5);
    const Eigen::VectorXcd victim =
        beta_victim * std::sqrt(64.0) * upa_response(victim_az, victim_el, rows, cols, 0.5);

    const Eigen::VectorXd theta = optimal_phases(serving, a_r);
    const double direct = std::abs(passive_gain(theta, alpha, a_r, victim));
    const double closed = aic_cross_gain_los(alpha, beta_victim, serving_az, serving_el,
                                             victim_az, victim_el, rows, cols, 0.5);
    CHECK(direct == Approx(closed).epsilon(1e-10));
  }
}

TEST_CASE("aic_cross_gain_los - Dirichlet envelope bound") {
  const Complex alpha(1.0, 0.0);
  const Complex beta(0.5, -0.5);
  const int rows = 10;
  const int cols = 12;
  const double spacing = 0.5;
  Rng rng(39);
  for (int trial = 0; trial < 20; ++trial) {
    const double s_az = rng.uniform(-1.2, 1.2);
    const double s_el = rng.uniform(-0.9, 0.9);
    const double v_az = rng.uniform(-1.2, 1.2);
    const double v_el = rng.uniform(-0.9, 0.9);
    const double delta = std::cos(v_el) * std::sin(v_az) - std::cos(s_el) * std::sin(s_az);
    const double gamma = std::sin(v_el) - std::sin(s_el);
    if (std::abs(std::sin(pi * spacing * delta)) < 1e-3 ||
        std::abs(std::sin(pi * spacing * gamma)) < 1e-3) {
      continue;  // bound degenerates near the grating condition
    }
    const double value =
        aic_cross_gain_los(alpha, beta, s_az, s_el, v_az, v_el, rows, cols, spacing);
    const double envelope = std::abs(alpha) * std::abs(beta) /
                            (rows * cols * std::abs(std::sin(pi * spacing * delta)) *
                             std::abs(std::sin(pi * spacing * gamma)));
    CHECK(value <= envelope * (1.0 + 1e-12));
  }
}

TEST_CASE("max_gain_matrix - LOS entries are |alpha*beta|, zero channels give zero") {
  const ArrayGeometry geometry{4, 4, 4, 0.5};
  Rng rng(43);
  const PathLossModel model{-30.0, 1.0, 2.0};
  std::vector<RankOneChannel> bs_irs;
  bs_irs.push_back(
      sample_bs_irs({30.0, 0.0, 0.3}, pi, {0.0, -5.0, 0.3}, 0.0, model, rng));

  std::vector<std::vector<IrsUserChannel>> irs_user(1);
  irs_user[0].push_back(sample_irs_user({0.0, -5.0, 0.3}, 0.0, {5.0, -2.0, 0.0}, geometry,
                                        model, ChannelKind::Los, rng));
  IrsUserChannel zero;
  zero.coefficients = Eigen::VectorXcd::Zero(geometry.irs_elements());
  zero.kind = RayleighFading{0.0};
  irs_user[0].push_back(zero);

  const Eigen::MatrixXd bounds = max_gain_matrix(bs_irs, irs_user);
  const double beta_abs = std::abs(std::get<LosGain>(irs_user[0][0].kind).gain);
  CHECK(bounds(0, 0) == Approx(std::abs(bs_irs[0].gain) * beta_abs).epsilon(1e-12));
  CHECK(bounds(0, 1) == 0.0);
}

TEST_CASE("max_gain - Rayleigh bound approaches sqrt(pi)/2 of the per-element scale") {
  // w_star / (|alpha| * sqrt(zeta)) is the sample mean of |CN(0,1)|, which
  // converges to sqrt(pi)/2 ~ 0.886227 as M grows.
  const int m = 10000;
  const double zeta = 0.7;
  Rng rng(47);
  Eigen::VectorXcd h(m);
  for (int i = 0; i < m; ++i) h(i) = rng.complex_normal(zeta);
  const Complex alpha(0.3, 0.4);
  const double normalized = max_gain(alpha, h) / (std::abs(alpha) * std::sqrt(zeta));
  CHECK(normalized == Approx(std::sqrt(pi) / 2.0).epsilon(0.02));
}

TEST_CASE("associate_exhaustive - picks the strong diagonal and minimizes the objective") {
  const AssociationResult result = associate_exhaustive(gains_2x2(1.0, 10.0, 10.0, 1.0));
  CHECK(result.association.irs_to_user == std::vector<int>{1, 0});
  CHECK(result.objective == Approx(0.02).epsilon(1e-12));

  Eigen::MatrixXd trivial(1, 1);
  trivial << 3.0;
  CHECK(associate_exhaustive(trivial).association.irs_to_user == std::vector<int>{0});
}

TEST_CASE("associate_exhaustive - infeasible and oversized instances are rejected") {
  Eigen::MatrixXd wide(1, 2);
  wide << 1.0, 2.0;
  CHECK_THROWS_AS(associate_exhaustive(wide), InfeasibleAssociationError);

  const Eigen::MatrixXd huge = Eigen::MatrixXd::Constant(30, 2, 1.0);
  CHECK_THROWS_WITH(associate_exhaustive(huge), Catch::Contains("greedy"));
}

TEST_CASE("associate_greedy - hand-traced assignments") {
  Eigen::MatrixXd first(2, 2);
  first << 3.0, 1.0, 2.0, 5.0;
  CHECK(associate_greedy(first).irs_to_user == std::vector<int>{0, 1});

  Eigen::MatrixXd second(3, 2);
  second << 5.0, 4.0, 4.5, 1.0, 1.0, 4.4;
  // Phase 1: (0 -> u0) on 5, then (2 -> u1) on 4.4; phase 2: IRS 1 takes its
  // row maximum 4.5, landing on u0.
  CHECK(associate_greedy(second).irs_to_user == std::vector<int>{0, 0, 1});

  Eigen::MatrixXd wide(1, 2);
  wide << 1.0, 2.0;
  CHECK_THROWS_AS(associate_greedy(wide), InfeasibleAssociationError);
}

TEST_CASE("associate_greedy - never beats the exhaustive optimum") {
  Rng rng(53);
  int equal = 0;
  const int instances = 300;
  for (int i = 0; i < instances; ++i) {
    const int irs_count = i % 2 == 0 ? 4 : 6;
    const int users = 3;
    Eigen::MatrixXd gains(irs_count, users);
    for (int l = 0; l < irs_count; ++l) {
      for (int k = 0; k < users; ++k) gains(l, k) = rng.uniform(0.1, 1.0);
    }
    const AssociationResult optimal = associate_exhaustive(gains);
    const Association greedy = associate_greedy(gains);
    const double greedy_objective = association_objective(gains, greedy);
    CHECK(optimal.objective <= greedy_objective * (1.0 + 1e-12));
    if (greedy_objective <= optimal.objective * (1.0 + 1e-12)) ++equal;
  }
  WARN("greedy matched the exhaustive optimum on " << equal << "/" << instances << " instances");
}

TEST_CASE("apply_association - single pair reduces to optimal_phases") {
  const ArrayGeometry geometry{4, 4, 4, 0.5};
  Rng rng(59);
  const PathLossModel model{-30.0, 1.0, 2.0};
  std::vector<RankOneChannel> bs_irs{
      sample_bs_irs({30.0, 0.0, 0.3}, pi, {0.0, -5.0, 0.3}, 0.0, model, rng)};
  std::vector<std::vector<IrsUserChannel>> irs_user(1);
  irs_user[0].push_back(sample_irs_user({0.0, -5.0, 0.3}, 0.0, {5.0, -2.0, 0.0}, geometry,
                                        model, ChannelKind::Los, rng));

  const PhaseConfig config =
      apply_association(Association{{0}}, bs_irs, irs_user, geometry);
  const Eigen::VectorXd direct =
      optimal_phases(irs_user[0][0].coefficients, bs_irs[0].irs_response(geometry));
  CHECK((config.phases[0] - direct).norm() == 0.0);
}

TEST_CASE("apply_association - assigned gains meet the bound, cross gains stay small") {
  // Setup-1 geometry with 40x40 IRS panels and frozen user offsets: each IRS
  // reaches its bound on its own user while off-assignment gains collapse.
  const ScenarioConfig scene = build_setup1(5.0);
  const ArrayGeometry geometry{32, 40, 40, 0.5};
  const PathLossModel model = scene.los_model();
  Rng rng(61);

  const double offsets[4] = {3.0, 7.0, 4.0, 6.0};
  std::vector<Position> users;
  for (int k = 0; k < 4; ++k) {
    users.push_back({scene.user_sites[k].x, scene.user_sites[k].y_sign * offsets[k], 0.0});
  }

  std::vector<RankOneChannel> bs_irs;
  std::vector<std::vector<IrsUserChannel>> irs_user(4);
  for (int l = 0; l < 4; ++l) {
    bs_irs.push_back(sample_bs_irs(scene.bs_position, scene.bs_boresight_azimuth,
                                   scene.irs_sites[l].position,
                                   scene.irs_sites[l].boresight_azimuth, model, rng));
    for (int k = 0; k < 4; ++k) {
      irs_user[l].push_back(sample_irs_user(scene.irs_sites[l].position,
                                            scene.irs_sites[l].boresight_azimuth, users[k],
                                            geometry, model, ChannelKind::Los, rng));
    }
  }

  const Eigen::MatrixXd bounds = max_gain_matrix(bs_irs, irs_user);
  const Association association = associate_exhaustive(bounds).association;
  const PhaseConfig phases = apply_association(association, bs_irs, irs_user, geometry);
  const Eigen::MatrixXcd realized = gain_matrix(bs_irs, irs_user, phases, geometry);

  for (int l = 0; l < 4; ++l) {
    const int serving = association.irs_to_user[l];
    CHECK(std::abs(realized(l, serving)) == Approx(bounds(l, serving)).epsilon(1e-12));
    for (int k = 0; k < 4; ++k) {
      if (k == serving) continue;
      CHECK(std::abs(realized(l, k)) < 0.1 * bounds(l, serving));
    }
  }
}

TEST_CASE("theoretical_min_sinr - closed-form values and infeasibility") {
  Eigen::MatrixXd single(1, 1);
  single << 0.3;
  const double power = 1e-4;
  const double noise = 1e-11;
  const double tau1 =
      theoretical_min_sinr(Association{{0}}, single, power, 32, 400, noise);
  CHECK(tau1 == Approx(power * 32.0 * 400.0 * 400.0 * 0.09 / noise).epsilon(1e-12));

  const Eigen::MatrixXd symmetric = gains_2x2(0.2, 0.0, 0.0, 0.2);
  const double tau2 =
      theoretical_min_sinr(Association{{0, 1}}, symmetric, power, 16, 100, noise);
  CHECK(tau2 == Approx(power * 16.0 * 100.0 * 100.0 * 0.04 / (2.0 * noise)).epsilon(1e-12));

  CHECK_THROWS_AS(theoretical_min_sinr(Association{{0, 0}}, symmetric, power, 16, 100, noise),
                  InfeasibleAssociationError);
}

TEST_CASE("Rayleigh cross gains decay like 1/sqrt(M)") {
  // Tune the IRS to one Rayleigh user and measure the relative gain toward
  // another. Quadrupling M should roughly halve the mean ratio.
  Rng rng(67);
  const Complex alpha(1.0, 0.0);
  std::vector<double> means;
  for (const int m : {100, 400, 1600}) {
    const int cols = m / 20;
    const Eigen::VectorXcd a_r = upa_response(0.3, -0.2, 20, cols, 0.5);
    double total = 0.0;
    const int draws = 200;
    for (int draw = 0; draw < draws; ++draw) {
      Eigen::VectorXcd serving(m);
      Eigen::VectorXcd victim(m);
      for (int i = 0; i < m; ++i) {
        serving(i) = rng.complex_normal(1.0);
        victim(i) = rng.complex_normal(1.0);
      }
      const Eigen::VectorXd theta = optimal_phases(serving, a_r);
      total += std::abs(passive_gain(theta, alpha, a_r, victim)) / max_gain(alpha, victim);
    }
    means.push_back(total / draws);
  }
  REQUIRE(means.size() == 3);
  CHECK(means[0] > means[1]);
  CHECK(means[1] > means[2]);
  const double first_ratio = means[1] / means[0];
  const double second_ratio = means[2] / means[1];
  CHECK(first_ratio > 0.3);
  CHECK(first_ratio < 0.7);
  CHECK(second_ratio > 0.3);
  CHECK(second_ratio < 0.7);
}
