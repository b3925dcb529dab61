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
// Monte-Carlo harness: seeded trials comparing the proposed IRS solutions
// (exhaustive and greedy association), the interference-free prediction, and
// the IRS-free massive-MIMO baseline, plus parameter sweeps with paired
// per-trial seeds and CSV persistence.

#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "irsmimo/active.hpp"
#include "irsmimo/association.hpp"
#include "irsmimo/channel.hpp"
#include "irsmimo/common.hpp"
#include "irsmimo/scenario.hpp"

namespace irsmimo {

// Everything random a trial needs, drawn in one fixed order (user offsets,
// BS-IRS gains, IRS-user channels row-major, then baseline channels) so that
// results do not depend on which methods are enabled or evaluated first.
struct TrialChannels {
  std::vector<Position> user_positions;
  std::vector<RankOneChannel> bs_irs;                 // L entries
  std::vector<std::vector<IrsUserChannel>> irs_user;  // L x K
  std::vector<Eigen::VectorXcd> conventional;         // K entries, empty when unused
};

inline TrialChannels sample_trial_channels(const ScenarioConfig& config, Rng& rng,
                                           bool include_conventional) {
  const ArrayGeometry geometry = config.geometry();
  const PathLossModel los = config.los_model();
  TrialChannels channels;

  channels.user_positions.reserve(config.user_count());
  for (const UserSite& site : config.user_sites) {
    const double offset = rng.uniform(site.offset_min, site.offset_max);
    channels.user_positions.push_back({site.x, site.y_sign * offset, site.z});
  }

  channels.bs_irs.reserve(config.irs_count());
  for (const IrsSite& site : config.irs_sites) {
    channels.bs_irs.push_back(sample_bs_irs(config.bs_position, config.bs_boresight_azimuth,
                                            site.position, site.boresight_azimuth, los, rng));
  }

  channels.irs_user.resize(config.irs_count());
  for (int l = 0; l < config.irs_count(); ++l) {
    channels.irs_user[l].reserve(config.user_count());
    for (int k = 0; k < config.user_count(); ++k) {
      channels.irs_user[l].push_back(
          sample_irs_user(config.irs_sites[l].position, config.irs_sites[l].boresight_azimuth,
                          channels.user_positions[k], geometry, los, config.irs_user_channel,
                          rng));
    }
  }

  if (include_conventional) {
    const PathLossModel nlos = config.nlos_model();
    channels.conventional.reserve(config.user_count());
    for (int k = 0; k < config.user_count(); ++k) {
      double variance =
          path_loss_gain(distance(config.bs_position, channels.user_positions[k]), nlos);
      if (config.baseline_per_path_normalization) {
        variance /= static_cast<double>(config.baseline_paths);
      }
      channels.conventional.push_back(conventional_channel(
          config.bs_antennas, config.baseline_paths, variance, config.element_spacing, rng));
    }
  }
  return channels;
}

struct MethodResult {
  double min_sinr = 0.0;     // linear
  double min_sinr_db = 0.0;  // 10*log10(min_sinr)
  Association association;   // empty for the conventional baseline
  int iterations = 0;        // 0 for the theoretical prediction
  bool converged = true;
  double wall_seconds = 0.0;
};

struct TrialResult {
  std::uint64_t trial_index = 0;
  std::vector<Method> methods;
  std::vector<MethodResult> results;

  const MethodResult& result_for(Method method) const {
    for (std::size_t i = 0; i < methods.size(); ++i) {
      if (methods[i] == method) return results[i];
    }
    throw std::invalid_argument("TrialResult: method was not evaluated");
  }
};

// Runs one trial: derives the trial rng from (master_seed, trial_index),
// samples every channel once, then evaluates each enabled method on the
// shared draw. Proposed methods solve the full pipeline on phase
// configurations from their association; the theoretical method evaluates the
// interference-free prediction on the exhaustive association; the
// conventional baseline feeds the IRS-free channels to the same max-min
// solver. Aside from wall-clock timing the result is a deterministic
// function of (config, trial_index).
inline TrialResult run_trial(const ScenarioConfig& config, std::uint64_t trial_index) {
  config.validate();
  Rng rng(derive_seed(config.master_seed, trial_index));
  const bool wants_conventional = config.method_enabled(Method::Conventional);
  const bool wants_proposed = config.method_enabled(Method::Exhaustive) ||
                              config.method_enabled(Method::Greedy) ||
                              config.method_enabled(Method::Theoretical);
  const TrialChannels channels = sample_trial_channels(config, rng, wants_conventional);

  const ArrayGeometry geometry = config.geometry();
  const double total_power = config.total_power_watts();
  const double noise_power = config.noise_watts();

  Eigen::MatrixXd max_gains;
  AssociationResult exhaustive;
  if (wants_proposed) {
    max_gains = max_gain_matrix(channels.bs_irs, channels.irs_user);
    if (config.method_enabled(Method::Exhaustive) || config.method_enabled(Method::Theoretical)) {
      exhaustive = associate_exhaustive(max_gains, config.exhaustive_limit);
    }
  }

  auto solve_with_association = [&](const Association& association, MethodResult& entry) {
    const PhaseConfig phases =
        apply_association(association, channels.bs_irs, channels.irs_user, geometry);
    const Eigen::MatrixXcd composite =
        composite_channel(channels.bs_irs, channels.irs_user, phases, geometry);
    const BeamformingSolution solution =
        solve_active(composite, total_power, noise_power, config.solver);
    entry.min_sinr =
        per_user_sinr(composite, solution.precoders, solution.powers, noise_power).minCoeff();
    entry.association = association;
    entry.iterations = solution.iterations;
    entry.converged = solution.converged;
  };

  TrialResult trial;
  trial.trial_index = trial_index;
  for (const Method method : config.methods) {
    const auto start = std::chrono::steady_clock::now();
    MethodResult entry;
    switch (method) {
      case Method::Exhaustive:
        solve_with_association(exhaustive.association, entry);
        break;
      case Method::Greedy:
        solve_with_association(associate_greedy(max_gains), entry);
        break;
      case Method::Theoretical:
        entry.min_sinr =
            theoretical_min_sinr(exhaustive.association, max_gains, total_power,
                                 config.bs_antennas, geometry.irs_elements(), noise_power);
        entry.association = exhaustive.association;
        break;
      case Method::Conventional: {
        Eigen::MatrixXcd baseline(config.bs_antennas, config.user_count());
        for (int k = 0; k < config.user_count(); ++k) baseline.col(k) = channels.conventional[k];
        const BeamformingSolution solution =
            solve_active(baseline, total_power, noise_power, config.solver);
        entry.min_sinr =
            per_user_sinr(baseline, solution.precoders, solution.powers, noise_power).minCoeff();
        entry.iterations = solution.iterations;
        entry.converged = solution.converged;
        break;
      }
    }
    entry.min_sinr_db = linear_to_db(entry.min_sinr);
    entry.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    trial.methods.push_back(method);
    trial.results.push_back(std::move(entry));
  }
  return trial;
}

enum class SweepVariable { M, N, Distance };

inline std::string to_string(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::M: return "M";
    case SweepVariable::N: return "N";
    case SweepVariable::Distance: return "d";
  }
  throw std::logic_error("to_string: unknown sweep variable");
}

inline SweepVariable sweep_variable_from_string(const std::string& name) {
  if (name == "M") return SweepVariable::M;
  if (name == "N") return SweepVariable::N;
  if (name == "d") return SweepVariable::Distance;
  throw std::invalid_argument("unknown sweep variable '" + name + "' (expected M, N or d)");
}

// Copy of `config` with the sweep variable set to `value`. Sweeping M keeps
// M_y fixed and adjusts M_z, so M must be a positive multiple of M_y;
// sweeping d rebuilds the setup geometry at the new user distance.
inline ScenarioConfig apply_sweep_value(const ScenarioConfig& config, SweepVariable variable,
                                        double value) {
  ScenarioConfig result = config;
  switch (variable) {
    case SweepVariable::M: {
      const int m = static_cast<int>(value);
      if (static_cast<double>(m) != value || m < 1 || m % config.irs_rows != 0) {
        throw std::invalid_argument("sweep: M=" + std::to_string(value) +
                                    " is not a positive multiple of m_y=" +
                                    std::to_string(config.irs_rows));
      }
      result.irs_cols = m / config.irs_rows;
      break;
    }
    case SweepVariable::N: {
      const int n = static_cast<int>(value);
      if (static_cast<double>(n) != value || n < 1) {
        throw std::invalid_argument("sweep: N must be a positive integer");
      }
      result.bs_antennas = n;
      break;
    }
    case SweepVariable::Distance: {
      const ScenarioConfig geometry = build_setup(config.setup, value);
      result.user_distance = geometry.user_distance;
      result.bs_position = geometry.bs_position;
      result.bs_boresight_azimuth = geometry.bs_boresight_azimuth;
      result.irs_sites = geometry.irs_sites;
      result.user_sites = geometry.user_sites;
      break;
    }
  }
  return result;
}

struct SweepCell {
  double value = 0.0;
  Method method = Method::Exhaustive;
  double mean_db = 0.0;
  double std_db = 0.0;
  int trials = 0;
};

struct SweepResult {
  SweepVariable variable = SweepVariable::M;
  std::vector<double> values;
  std::vector<Method> methods;
  std::vector<SweepCell> cells;  // |values| x |methods|, value-major
  int trials = 0;
  std::uint64_t seed = 0;

  const SweepCell& cell(double value, Method method) const {
    for (const SweepCell& entry : cells) {
      if (entry.value == value && entry.method == method) return entry;
    }
    throw std::invalid_argument("SweepResult: no such cell");
  }
};

// Sweeps one variable over strictly increasing values, running `trials`
// trials per value. Trial t uses the seed derived from (master_seed, t) at
// every value, so per-trial differences across values are paired. Trials run
// on a worker pool; each writes its own slot and the dB statistics are
// reduced in trial order, making the output independent of thread count.
inline SweepResult sweep(const ScenarioConfig& config, SweepVariable variable,
                         const std::vector<double>& values, int trials, unsigned threads = 0) {
  if (values.empty()) throw std::invalid_argument("sweep: no values given");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] <= values[i - 1]) {
      throw std::invalid_argument("sweep: values must be strictly increasing");
    }
  }
  if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");

  SweepResult result;
  result.variable = variable;
  result.values = values;
  result.methods = config.methods;
  result.trials = trials;
  result.seed = config.master_seed;

  for (const double value : values) {
    const ScenarioConfig point = apply_sweep_value(config, variable, value);
    point.validate();
    std::vector<TrialResult> trial_results(trials);
    parallel_for(
        static_cast<std::size_t>(trials),
        [&](std::size_t t) { trial_results[t] = run_trial(point, static_cast<std::uint64_t>(t)); },
        threads);

    for (const Method method : config.methods) {
      double mean = 0.0;
      for (const TrialResult& trial : trial_results) {
        mean += trial.result_for(method).min_sinr_db;
      }
      mean /= static_cast<double>(trials);
      double variance = 0.0;
      for (const TrialResult& trial : trial_results) {
        const double delta = trial.result_for(method).min_sinr_db - mean;
        variance += delta * delta;
      }
      const double std_db = trials > 1 ? std::sqrt(variance / static_cast<double>(trials - 1)) : 0.0;
      result.cells.push_back({value, method, mean, std_db, trials});
    }
  }
  return result;
}

// Writes a sweep as CSV with the fixed column set
//   sweep_var,value,method,min_sinr_db_mean,min_sinr_db_std,trials,seed
// one row per (value, method) pair.
inline void write_csv(const SweepResult& result, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  auto format_double = [](double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return std::string(buffer);
  };
  file << "sweep_var,value,method,min_sinr_db_mean,min_sinr_db_std,trials,seed\n";
  for (const SweepCell& cell : result.cells) {
    file << to_string(result.variable) << "," << format_double(cell.value) << ","
         << to_string(cell.method) << "," << format_double(cell.mean_db) << ","
         << format_double(cell.std_db) << "," << cell.trials << "," << result.seed << "\n";
  }
  if (!file) throw std::runtime_error("failed writing CSV to '" + path + "'");
}

}  // namespace irsmimo
