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

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "irsmimo/active.hpp"
#include "irsmimo/channel.hpp"
#include "irsmimo/common.hpp"
#include "irsmimo/geometry.hpp"
#include "irsmimo/pathloss.hpp"
#include "irsmimo/steering.hpp"

namespace irsmimo {

enum class Method { Exhaustive, Greedy, Theoretical, Conventional };

inline std::string to_string(Method method) {
  switch (method) {
    case Method::Exhaustive: return "exhaustive";
    case Method::Greedy: return "greedy";
    case Method::Theoretical: return "theoretical";
    case Method::Conventional: return "conventional";
  }
  throw std::logic_error("to_string: unknown method");
}

inline Method method_from_string(const std::string& name) {
  if (name == "exhaustive") return Method::Exhaustive;
  if (name == "greedy") return Method::Greedy;
  if (name == "theoretical") return Method::Theoretical;
  if (name == "conventional") return Method::Conventional;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected exhaustive, greedy, theoretical or conventional)");
}

inline std::string to_string(ChannelKind kind) {
  return kind == ChannelKind::Los ? "los" : "rayleigh";
}

inline ChannelKind channel_kind_from_string(const std::string& name) {
  if (name == "los") return ChannelKind::Los;
  if (name == "rayleigh") return ChannelKind::Rayleigh;
  throw std::invalid_argument("unknown channel kind '" + name + "' (expected los or rayleigh)");
}

// Per-trial user placement: x and z are fixed, the y offset is drawn
// uniformly from [offset_min, offset_max] and applied with y_sign.
struct UserSite {
  double x = 0.0;
  double y_sign = 1.0;
  double z = 0.0;
  double offset_min = 0.0;
  double offset_max = 10.0;
};

struct IrsSite {
  Position position;
  double boresight_azimuth = 0.0;
};

// Full description of one experiment: node geometry, array sizes, power and
// path loss constants, channel model, trial count and seeding, and which
// solution methods to evaluate. dB/dBm fields are stored as written in the
// config file and converted to linear units through the accessors.
struct ScenarioConfig {
  int setup = 1;                // 1 (4 IRS / 4 users) or 2 (2 IRS / 2 users)
  double user_distance = 5.0;   // d, meters

  Position bs_position{30.0, 0.0, 0.3};
  double bs_boresight_azimuth = pi;
  std::vector<IrsSite> irs_sites;
  std::vector<UserSite> user_sites;

  int bs_antennas = 32;  // N
  int irs_rows = 20;     // M_y
  int irs_cols = 20;     // M_z
  double element_spacing = 0.5;

  double total_power_dbm = -10.0;
  double noise_dbm = -80.0;
  double c0_db = -30.0;
  double pathloss_los = 2.0;
  double pathloss_nlos = 3.5;

  int baseline_paths = 100;
  bool baseline_per_path_normalization = false;  // true: per-path variance kappa/L
  ChannelKind irs_user_channel = ChannelKind::Los;

  int trials = 200;
  std::uint64_t master_seed = 1;
  std::vector<Method> methods{Method::Exhaustive, Method::Greedy, Method::Theoretical,
                              Method::Conventional};

  SolverSettings solver{};
  std::uint64_t exhaustive_limit = 10'000'000;

  int irs_count() const { return static_cast<int>(irs_sites.size()); }
  int user_count() const { return static_cast<int>(user_sites.size()); }

  double total_power_watts() const { return dbm_to_watts(total_power_dbm); }
  double noise_watts() const { return dbm_to_watts(noise_dbm); }

  ArrayGeometry geometry() const {
    return ArrayGeometry{bs_antennas, irs_rows, irs_cols, element_spacing};
  }

  PathLossModel los_model() const { return PathLossModel{c0_db, 1.0, pathloss_los}; }
  PathLossModel nlos_model() const { return PathLossModel{c0_db, 1.0, pathloss_nlos}; }

  bool method_enabled(Method method) const {
    return std::find(methods.begin(), methods.end(), method) != methods.end();
  }

  void validate() const {
    geometry().validate();
    if (irs_sites.empty() || user_sites.empty()) {
      throw std::invalid_argument("ScenarioConfig: geometry has no IRSs or no users");
    }
    if (trials < 1) throw std::invalid_argument("ScenarioConfig: trials must be >= 1");
    if (baseline_paths < 1) {
      throw std::invalid_argument("ScenarioConfig: baseline_paths must be >= 1");
    }
    if (methods.empty()) throw std::invalid_argument("ScenarioConfig: no methods enabled");
    const bool proposed = method_enabled(Method::Exhaustive) || method_enabled(Method::Greedy) ||
                          method_enabled(Method::Theoretical);
    if (proposed && irs_count() < user_count()) {
      throw std::invalid_argument(
          "ScenarioConfig: proposed methods need at least as many IRSs as users");
    }
  }
};

inline bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  return a.setup == b.setup && a.user_distance == b.user_distance &&
         a.bs_antennas == b.bs_antennas && a.irs_rows == b.irs_rows && a.irs_cols == b.irs_cols &&
         a.element_spacing == b.element_spacing && a.total_power_dbm == b.total_power_dbm &&
         a.noise_dbm == b.noise_dbm && a.c0_db == b.c0_db && a.pathloss_los == b.pathloss_los &&
         a.pathloss_nlos == b.pathloss_nlos && a.baseline_paths == b.baseline_paths &&
         a.baseline_per_path_normalization == b.baseline_per_path_normalization &&
         a.irs_user_channel == b.irs_user_channel && a.trials == b.trials &&
         a.master_seed == b.master_seed && a.methods == b.methods &&
         a.solver.tolerance == b.solver.tolerance &&
         a.solver.max_iterations == b.solver.max_iterations &&
         a.exhaustive_limit == b.exhaustive_limit;
}

// Four IRSs / four users. The BS sits at (30, 0, 0.3); IRS-1/2 at
// (0, -/+5, 0.3) facing +x; IRS-3/4 at (60, -/+3, 0.3) facing -x. Users lie
// at x = d and x = 60 - d with |y| drawn per trial from [0, 10] (signs -,+,-,+)
// and z = 0.
//
// The BS ULA axis runs along the corridor diagonal (boresight -pi/4). With
// the axis on y, the west/east IRS pairs would differ by only 0.065 in
// direction cosine and alias inside the N=16 beamwidth (2/16); the diagonal
// keeps all four departure directions separated by at least 0.14, so the
// near-orthogonality assumption holds over the whole swept range of N.
inline ScenarioConfig build_setup1(double d) {
  if (d <= 0.0 || d >= 30.0) {
    throw std::invalid_argument("build_setup1: d must lie strictly between 0 and 30 meters");
  }
  ScenarioConfig config;
  config.setup = 1;
  config.user_distance = d;
  config.bs_position = {30.0, 0.0, 0.3};
  config.bs_boresight_azimuth = -pi / 4.0;
  config.irs_sites = {
      {{0.0, -5.0, 0.3}, 0.0},
      {{0.0, 5.0, 0.3}, 0.0},
      {{60.0, -3.0, 0.3}, pi},
      {{60.0, 3.0, 0.3}, pi},
  };
  config.user_sites = {
      {d, -1.0, 0.0, 0.0, 10.0},
      {d, 1.0, 0.0, 0.0, 10.0},
      {60.0 - d, -1.0, 0.0, 0.0, 10.0},
      {60.0 - d, 1.0, 0.0, 0.0, 10.0},
  };
  return config;
}

// Two IRSs / two users: the BS, IRS-1, IRS-2, U1 and U2 of setup 1. The
// IRS-free conventional baseline is meaningful here.
inline ScenarioConfig build_setup2(double d) {
  if (d <= 0.0 || d >= 30.0) {
    throw std::invalid_argument("build_setup2: d must lie strictly between 0 and 30 meters");
  }
  ScenarioConfig config = build_setup1(d);
  config.setup = 2;
  config.irs_sites.resize(2);
  config.user_sites.resize(2);
  return config;
}

inline ScenarioConfig build_setup(int setup, double d) {
  if (setup == 1) return build_setup1(d);
  if (setup == 2) return build_setup2(d);
  throw std::invalid_argument("build_setup: setup must be 1 or 2");
}

namespace detail {

struct ConfigEntry {
  std::string value;
  int line = 0;
};

inline std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

[[noreturn]] inline void config_error(const std::string& path, int line,
                                      const std::string& message) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + message);
}

template <typename T>
T parse_number(const std::string& path, const ConfigEntry& entry) {
  std::istringstream stream(entry.value);
  T value{};
  stream >> value;
  if (stream.fail() || !(stream >> std::ws).eof()) {
    config_error(path, entry.line, "cannot parse value '" + entry.value + "'");
  }
  return value;
}

inline bool parse_bool(const std::string& path, const ConfigEntry& entry) {
  if (entry.value == "true" || entry.value == "1") return true;
  if (entry.value == "false" || entry.value == "0") return false;
  config_error(path, entry.line, "expected a boolean, got '" + entry.value + "'");
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string current;
  std::istringstream stream(text);
  while (std::getline(stream, current, ',')) {
    const std::string item = trim(current);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace detail

// Reads a scenario from a flat key=value text file ('#' starts a comment,
// one key per line, vector values comma-separated). Unknown keys and
// malformed lines are reported with their line number.
inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open config file '" + path + "'");

  std::map<std::string, detail::ConfigEntry> entries;
  std::string line;
  int line_number = 0;
  while (std::getline(file, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string content = detail::trim(line);
    if (content.empty()) continue;
    const auto equals = content.find('=');
    if (equals == std::string::npos) {
      detail::config_error(path, line_number, "expected key=value, got '" + content + "'");
    }
    const std::string key = detail::trim(content.substr(0, equals));
    const std::string value = detail::trim(content.substr(equals + 1));
    if (key.empty()) detail::config_error(path, line_number, "empty key");
    if (entries.count(key) != 0) {
      detail::config_error(path, line_number, "duplicate key '" + key + "'");
    }
    entries[key] = {value, line_number};
  }

  auto take = [&](const char* key) -> const detail::ConfigEntry* {
    const auto found = entries.find(key);
    return found == entries.end() ? nullptr : &found->second;
  };

  int setup = 1;
  double d = 5.0;
  if (const auto* entry = take("setup")) setup = detail::parse_number<int>(path, *entry);
  if (const auto* entry = take("d")) d = detail::parse_number<double>(path, *entry);
  ScenarioConfig config = build_setup(setup, d);

  if (const auto* entry = take("n")) config.bs_antennas = detail::parse_number<int>(path, *entry);
  if (const auto* entry = take("m_y")) config.irs_rows = detail::parse_number<int>(path, *entry);
  if (const auto* entry = take("m_z")) config.irs_cols = detail::parse_number<int>(path, *entry);
  if (const auto* entry = take("element_spacing")) {
    config.element_spacing = detail::parse_number<double>(path, *entry);
  }
  if (const auto* entry = take("p_dbm")) {
    config.total_power_dbm = detail::parse_number<double>(path, *entry);
  }
  if (const auto* entry = take("noise_dbm")) {
    config.noise_dbm = detail::parse_number<double>(path, *entry);
  }
  if (const auto* entry = take("c0_db")) config.c0_db = detail::parse_number<double>(path, *entry);
  if (const auto* entry = take("pathloss_los")) {
    config.pathloss_los = detail::parse_number<double>(path, *entry);
  }
  if (const auto* entry = take("pathloss_nlos")) {
    config.pathloss_nlos = detail::parse_number<double>(path, *entry);
  }
  if (const auto* entry = take("baseline_paths")) {
    config.baseline_paths = detail::parse_number<int>(path, *entry);
  }
  if (const auto* entry = take("baseline_per_path_normalization")) {
    config.baseline_per_path_normalization = detail::parse_bool(path, *entry);
  }
  if (const auto* entry = take("irs_user_channel")) {
    try {
      config.irs_user_channel = channel_kind_from_string(entry->value);
    } catch (const std::invalid_argument& error) {
      detail::config_error(path, entry->line, error.what());
    }
  }
  if (const auto* entry = take("trials")) config.trials = detail::parse_number<int>(path, *entry);
  if (const auto* entry = take("seed")) {
    config.master_seed = detail::parse_number<std::uint64_t>(path, *entry);
  }
  if (const auto* entry = take("methods")) {
    config.methods.clear();
    try {
      for (const std::string& name : detail::split_list(entry->value)) {
        config.methods.push_back(method_from_string(name));
      }
    } catch (const std::invalid_argument& error) {
      detail::config_error(path, entry->line, error.what());
    }
  }
  if (const auto* entry = take("solver_tolerance")) {
    config.solver.tolerance = detail::parse_number<double>(path, *entry);
  }
  if (const auto* entry = take("solver_max_iterations")) {
    config.solver.max_iterations = detail::parse_number<int>(path, *entry);
  }
  if (const auto* entry = take("exhaustive_limit")) {
    config.exhaustive_limit = detail::parse_number<std::uint64_t>(path, *entry);
  }

  static const char* known_keys[] = {"setup",
                                     "d",
                                     "n",
                                     "m_y",
                                     "m_z",
                                     "element_spacing",
                                     "p_dbm",
                                     "noise_dbm",
                                     "c0_db",
                                     "pathloss_los",
                                     "pathloss_nlos",
                                     "baseline_paths",
                                     "baseline_per_path_normalization",
                                     "irs_user_channel",
                                     "trials",
                                     "seed",
                                     "methods",
                                     "solver_tolerance",
                                     "solver_max_iterations",
                                     "exhaustive_limit"};
  for (const auto& [key, entry] : entries) {
    bool known = false;
    for (const char* candidate : known_keys) {
      if (key == candidate) {
        known = true;
        break;
      }
    }
    if (!known) detail::config_error(path, entry.line, "unknown key '" + key + "'");
  }

  config.validate();
  return config;
}

// Writes a scenario in the format load_config reads back; a load of the
// written file reproduces the config exactly.
inline void save_config(const ScenarioConfig& config, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  auto format_double = [](double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return std::string(buffer);
  };
  file << "# irsmimo scenario\n";
  file << "setup = " << config.setup << "\n";
  file << "d = " << format_double(config.user_distance) << "\n";
  file << "n = " << config.bs_antennas << "\n";
  file << "m_y = " << config.irs_rows << "\n";
  file << "m_z = " << config.irs_cols << "\n";
  file << "element_spacing = " << format_double(config.element_spacing) << "\n";
  file << "p_dbm = " << format_double(config.total_power_dbm) << "\n";
  file << "noise_dbm = " << format_double(config.noise_dbm) << "\n";
  file << "c0_db = " << format_double(config.c0_db) << "\n";
  file << "pathloss_los = " << format_double(config.pathloss_los) << "\n";
  file << "pathloss_nlos = " << format_double(config.pathloss_nlos) << "\n";
  file << "baseline_paths = " << config.baseline_paths << "\n";
  file << "baseline_per_path_normalization = "
       << (config.baseline_per_path_normalization ? "true" : "false") << "\n";
  file << "irs_user_channel = " << to_string(config.irs_user_channel) << "\n";
  file << "trials = " << config.trials << "\n";
  file << "seed = " << config.master_seed << "\n";
  file << "methods = ";
  for (std::size_t i = 0; i < config.methods.size(); ++i) {
    if (i != 0) file << ",";
    file << to_string(config.methods[i]);
  }
  file << "\n";
  file << "solver_tolerance = " << format_double(config.solver.tolerance) << "\n";
  file << "solver_max_iterations = " << config.solver.max_iterations << "\n";
  file << "exhaustive_limit = " << config.exhaustive_limit << "\n";
  if (!file) throw std::runtime_error("failed writing config to '" + path + "'");
}

}  // namespace irsmimo
