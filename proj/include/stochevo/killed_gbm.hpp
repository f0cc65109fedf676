/* Copyright 2026 The stochevo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#ifndef STOCHEVO_KILLED_GBM_HPP
#define STOCHEVO_KILLED_GBM_HPP

#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "stochevo/errors.hpp"
#include "stochevo/io/format.hpp"
#include "stochevo/parallel.hpp"
#include "stochevo/rng.hpp"
#include "stochevo/sde_core.hpp"

namespace stochevo {

/// Exponential observation horizon with rate nu.
class KillSchedule {
 public:
  explicit KillSchedule(double nu) : nu_(nu) {
    detail::require(std::isfinite(nu) && nu > 0.0, "nu must be finite and strictly positive");
  }

  double nu() const noexcept { return nu_; }

 private:
  double nu_;
};

struct KilledSample {
  double kill_time;
  double state;

  friend bool operator==(const KilledSample&, const KilledSample&) = default;
};

/// Inverse CDF of Exp(nu) at u in [0, 1); maps u = 0 to 0.
inline double exponential_quantile(double u, double nu) { return -std::log1p(-u) / nu; }

inline double sample_kill_time(const KillSchedule& schedule, RngStream& rng) {
  return exponential_quantile(rng.uniform(), schedule.nu());
}

/// Draws T, then X_T exactly in log space. The marginal of `state` is
/// double-Pareto with the canonical exponents.
inline KilledSample sample_killed_state(const GbmParams& params, const KillSchedule& schedule,
                                        RngStream& rng) {
  const double t = sample_kill_time(schedule, rng);
  return {t, std::exp(sample_terminal_log(params, t, rng))};
}

/// n independent killed samples; sample i uses stream (master_seed, i), so
/// the output does not depend on `workers`.
inline std::vector<KilledSample> sample_killed_batch(const GbmParams& params,
                                                     const KillSchedule& schedule, std::size_t n,
                                                     std::uint64_t master_seed,
                                                     unsigned workers = 1) {
  detail::require(n >= 1, "n must be at least 1");
  std::vector<KilledSample> out(n);
  detail::parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng(master_seed, i);
      out[i] = sample_killed_state(params, schedule, rng);
    }
  });
  return out;
}

inline std::vector<double> killed_states(std::span<const KilledSample> samples) {
  std::vector<double> states;
  states.reserve(samples.size());
  for (const auto& s : samples) states.push_back(s.state);
  return states;
}

inline void write_killed_csv(std::ostream& os, std::span<const KilledSample> samples) {
  os << "kill_time,state\n";
  for (const auto& s : samples) os << io::format_double(s.kill_time) << ',' << io::format_double(s.state) << '\n';
}

}  // namespace stochevo

#endif  // STOCHEVO_KILLED_GBM_HPP
