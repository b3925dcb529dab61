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
// Experiment CLI. `irsmimo run --config scenario.txt --sweep M --values
// 200,400,800 --out results.csv` runs a seeded Monte-Carlo sweep and writes
// the per-(value, method) min-SINR statistics as CSV.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "irsmimo/irsmimo.hpp"

namespace {

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    std::size_t consumed = 0;
    const double value = std::stod(item, &consumed);
    if (consumed != item.size()) {
      throw std::invalid_argument("--values: cannot parse '" + item + "'");
    }
    values.push_back(value);
  }
  if (values.empty()) throw std::invalid_argument("--values: empty list");
  return values;
}

void print_summary(const irsmimo::SweepResult& result) {
  std::printf("%-6s %10s %-14s %14s %12s %8s\n", "sweep", "value", "method", "mean [dB]",
              "std [dB]", "trials");
  for (const irsmimo::SweepCell& cell : result.cells) {
    std::printf("%-6s %10g %-14s %14.3f %12.3f %8d\n", irsmimo::to_string(result.variable).c_str(),
                cell.value, irsmimo::to_string(cell.method).c_str(), cell.mean_db, cell.std_db,
                cell.trials);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-assisted massive MIMO max-min SINR experiments"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "run a Monte-Carlo sweep");
  std::string config_path;
  std::string sweep_name;
  std::string values_text;
  std::string out_path;
  std::string methods_text;
  int trials_override = -1;
  std::int64_t seed_override = -1;
  int setup_override = 0;
  unsigned threads = 0;

  run->add_option("--config", config_path, "scenario config file (key=value lines)")->required();
  run->add_option("--sweep", sweep_name, "sweep variable: M, N or d");
  run->add_option("--values", values_text, "comma-separated sweep values");
  run->add_option("--trials", trials_override, "override the trial count");
  run->add_option("--seed", seed_override, "override the master seed");
  run->add_option("--out", out_path, "write results to this CSV file");
  run->add_option("--methods", methods_text,
                  "comma-separated subset of exhaustive,greedy,theoretical,conventional");
  run->add_option("--setup", setup_override, "override the setup (1 or 2)")
      ->check(CLI::IsMember({1, 2}));
  run->add_option("--threads", threads, "worker threads (0 = hardware concurrency)");

  CLI11_PARSE(app, argc, argv);

  try {
    irsmimo::ScenarioConfig config = irsmimo::load_config(config_path);
    if (setup_override != 0 && setup_override != config.setup) {
      const irsmimo::ScenarioConfig geometry =
          irsmimo::build_setup(setup_override, config.user_distance);
      config.setup = geometry.setup;
      config.irs_sites = geometry.irs_sites;
      config.user_sites = geometry.user_sites;
    }
    if (trials_override >= 0) config.trials = trials_override;
    if (seed_override >= 0) config.master_seed = static_cast<std::uint64_t>(seed_override);
    if (!methods_text.empty()) {
      config.methods.clear();
      std::stringstream stream(methods_text);
      std::string name;
      while (std::getline(stream, name, ',')) {
        if (!name.empty()) config.methods.push_back(irsmimo::method_from_string(name));
      }
    }
    config.validate();

    irsmimo::SweepVariable variable = irsmimo::SweepVariable::M;
    std::vector<double> values;
    if (!sweep_name.empty()) {
      variable = irsmimo::sweep_variable_from_string(sweep_name);
      if (values_text.empty()) {
        throw std::invalid_argument("--sweep requires --values");
      }
      values = parse_values(values_text);
    } else {
      if (!values_text.empty()) {
        throw std::invalid_argument("--values requires --sweep");
      }
      // No sweep requested: report the configured operating point as a
      // single-value sweep over M.
      values = {static_cast<double>(config.irs_rows * config.irs_cols)};
    }

    const irsmimo::SweepResult result =
        irsmimo::sweep(config, variable, values, config.trials, threads);
    print_summary(result);
    if (!out_path.empty()) {
      irsmimo::write_csv(result, out_path);
      std::printf("wrote %s\n", out_path.c_str());
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
