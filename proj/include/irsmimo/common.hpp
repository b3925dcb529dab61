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

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace irsmimo {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// dB / dBm conversions. dBm -> watts is 10^((dBm - 30)/10): -10 dBm is
// 1e-4 W, -80 dBm is 1e-11 W.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double value) { return 10.0 * std::log10(value); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// Wraps an angle to [0, 2*pi).
inline double wrap_two_pi(double angle) {
  double wrapped = std::fmod(angle, two_pi);
  if (wrapped < 0.0) wrapped += two_pi;
  if (wrapped >= two_pi) wrapped = 0.0;
  return wrapped;
}

// Wraps an angle to (-pi, pi].
inline double wrap_pi(double angle) {
  double wrapped = std::fmod(angle + pi, two_pi);
  if (wrapped <= 0.0) wrapped += two_pi;
  return wrapped - pi;
}

// A user channel vector is identically zero.
struct DegenerateChannelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The downlink power system is singular or produced non-positive powers.
struct InfeasibleBalancingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An IRS-user association cannot serve every user (e.g. fewer IRSs than users).
struct InfeasibleAssociationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Counter-style seed derivation: the SplitMix64 finalizer applied to
// master + gamma*(counter+1). Distinct counters give independent streams,
// so trials can run in parallel without sharing generator state.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seedable random source. Gaussian variates use an explicit Box-Muller
// transform instead of std::normal_distribution so that streams are
// reproducible across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal (consumes one Box-Muller pair).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  // Circularly-symmetric complex Gaussian CN(0, variance): two independent
  // real normals with variance/2 per component.
  Complex complex_normal(double variance) {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-std::log(u1) * variance);
    return {radius * std::cos(two_pi * u2), radius * std::sin(two_pi * u2)};
  }

 private:
  std::mt19937_64 engine_;
};

// Runs body(0..count-1) on a small worker pool. Indices are claimed through
// an atomic counter; callers must make iterations independent (each writing
// its own slot), which keeps results identical for any thread count.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                         unsigned threads = 0) {
  if (count == 0) return;
  unsigned worker_count = threads != 0 ? threads : std::thread::hardware_concurrency();
  if (worker_count == 0) worker_count = 1;
  worker_count = static_cast<unsigned>(std::min<std::size_t>(worker_count, count));
  if (worker_count == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t index = next.fetch_add(1, std::memory_order_relaxed);
      if (index >= count) return;
      try {
        body(index);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(worker_count);
  for (unsigned t = 0; t < worker_count; ++t) pool.emplace_back(worker);
  for (auto& thread : pool) thread.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace irsmimo
