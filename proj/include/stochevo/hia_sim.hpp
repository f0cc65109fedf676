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

// Heterogeneous interacting agents with generalized Lotka-Volterra dynamics.
//
// One synchronous step updates every agent as
//
//     w_i <- lambda_i w_i + a wbar - c wbar w_i,   lambda_i = exp(drift + noise_std Z_i)
//
// with wbar the mean size before the step, then clamps at `floor`. The first
// two terms are auto-catalytic (own size, population mean) and the last is
// the mean-field competition. Agent i draws only from stream (seed, i).

#ifndef STOCHEVO_HIA_SIM_HPP
#define STOCHEVO_HIA_SIM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "stochevo/errors.hpp"
#include "stochevo/io/format.hpp"
#include "stochevo/parallel.hpp"
#include "stochevo/rng.hpp"
#include "stochevo/stats.hpp"
#include "stochevo/tail_estimation.hpp"

namespace stochevo {

struct HiaParams {
  std::size_t n_agents = 2000;
  double noise_std = 0.2;
  double drift = 0.0;
  double coupling_in = 0.05;   // a
  double coupling_out = 0.05;  // c
  std::size_t steps = 1000;
  double floor = 1e-4;

  void validate() const {
    detail::require(n_agents >= 2, "n_agents must be at least 2");
    detail::require(std::isfinite(noise_std) && noise_std >= 0.0, "noise_std must be finite and non-negative");
    detail::require_finite(drift, "drift");
    detail::require(std::isfinite(coupling_in) && coupling_in >= 0.0, "coupling_in must be finite and non-negative");
    detail::require(std::isfinite(coupling_out) && coupling_out >= 0.0, "coupling_out must be finite and non-negative");
    detail::require(steps >= 1, "steps must be at least 1");
    detail::require(std::isfinite(floor) && floor > 0.0, "floor must be finite and positive");
    detail::require(floor < 1.0, "floor must lie below the typical initial size 1");
  }
};

struct Population {
  std::vector<double> sizes;
  std::size_t step = 0;
};

inline std::vector<RngStream> make_agent_streams(std::uint64_t seed, std::size_t n_agents) {
  std::vector<RngStream> streams;
  streams.reserve(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) streams.emplace_back(seed, i);
  return streams;
}

/// Sizes iid lognormal(0, noise_std), clamped at the floor.
inline Population init_population(const HiaParams& params, std::span<RngStream> streams) {
  params.validate();
  detail::require(streams.size() == params.n_agents, "need one stream per agent");
  Population pop;
  pop.sizes.resize(params.n_agents);
  for (std::size_t i = 0; i < params.n_agents; ++i) {
    pop.sizes[i] = std::max(params.floor, std::exp(params.noise_std * streams[i].normal()));
  }
  return pop;
}

namespace detail {

inline void check_population(const Population& pop, const HiaParams& params) {
  if (pop.sizes.size() != params.n_agents) {
    throw invariant_error("population size changed during the run");
  }
  for (double w : pop.sizes) {
    if (!(w >= params.floor)) throw invariant_error("agent size below floor");
  }
}

// One synchronous update; when log_growth is non-null it receives
// ln(w_new / w_old) per agent.
inline Population step_population_impl(const Population& pop, const HiaParams& params,
                                       std::span<RngStream> streams, std::vector<double>* log_growth) {
  const std::size_t n = pop.sizes.size();
  require(n == params.n_agents, "population does not match n_agents");
  require(streams.size() == n, "need one stream per agent");
  const double wbar = exact_sum(pop.sizes) / static_cast<double>(n);
  const double inflow = params.coupling_in * wbar;
  const double competition = params.coupling_out * wbar;
  Population next;
  next.sizes.resize(n);
  next.step = pop.step + 1;
  if (log_growth) log_growth->resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = pop.sizes[i];
    const double lambda = std::exp(params.drift + params.noise_std * streams[i].normal());
    const double updated = std::max(params.floor, lambda * w + inflow - competition * w);
    next.sizes[i] = updated;
    if (log_growth) (*log_growth)[i] = std::log(updated / w);
  }
  return next;
}

}  // namespace detail

inline Population step_population(const Population& pop, const HiaParams& params,
                                  std::span<RngStream> streams) {
  params.validate();
  return detail::step_population_impl(pop, params, streams, nullptr);
}

struct HiaResult {
  Population population;
  // Standard deviation of per-agent one-step log growth over the last 10% of steps.
  double effective_alpha;
  FitReport report;
};

inline std::size_t measurement_window(std::size_t steps) { return std::max<std::size_t>(1, (steps + 9) / 10); }

inline HiaResult run_hia(const HiaParams& params, std::uint64_t seed) {
  params.validate();
  detail::require(params.n_agents >= kCompareMinSamples, "run_hia needs at least 10 agents to fit the final sizes");
  auto streams = make_agent_streams(seed, params.n_agents);
  Population pop = init_population(params, streams);
  const std::size_t window_start = params.steps - measurement_window(params.steps);

  // Welford over all pooled log-growth values in the window.
  double count = 0.0, mean = 0.0, m2 = 0.0;
  std::vector<double> growth;
  for (std::size_t s = 0; s < params.steps; ++s) {
    const bool measure = s >= window_start;
    pop = detail::step_population_impl(pop, params, streams, measure ? &growth : nullptr);
    detail::check_population(pop, params);
    if (measure) {
      for (double g : growth) {
        count += 1.0;
        const double delta = g - mean;
        mean += delta / count;
        m2 += delta * (g - mean);
      }
    }
  }
  const double effective_alpha = std::sqrt(m2 / count);
  FitReport report = compare_models(SampleSet(pop.sizes, "hia"));
  return {std::move(pop), effective_alpha, std::move(report)};
}

// Sweep -----------------------------------------------------------------------

enum class SweepAxis { NoiseStd, Coupling };

struct SweepConfig {
  HiaParams base;
  SweepAxis axis = SweepAxis::NoiseStd;
  std::vector<double> values;
  std::size_t seeds = 5;
  std::uint64_t base_seed = 1;
  unsigned workers = 1;
};

struct SweepRow {
  double noise_std;
  double coupling;
  double effective_alpha;  // mean over seeds
  double m1_hat;           // mean double-Pareto m1 over seeds
  std::string preferred_model;  // most frequent over seeds
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Rank correlation between the swept value and m1_hat.
  double spearman_rho;
};

// The coupling axis moves a and c together.
inline HiaParams sweep_point(const SweepConfig& config, double value) {
  HiaParams p = config.base;
  if (config.axis == SweepAxis::NoiseStd) p.noise_std = value;
  else p.coupling_in = p.coupling_out = value;
  return p;
}

/// Runs every (value, seed) pair; run (i, s) uses seed base_seed + s, so all
/// sweep points share their random streams.
inline SweepResult run_sweep(const SweepConfig& config) {
  detail::require(config.values.size() >= 2, "sweep needs at least two points");
  detail::require(config.seeds >= 1, "sweep needs at least one seed");
  for (double v : config.values) sweep_point(config, v).validate();

  const std::size_t runs = config.values.size() * config.seeds;
  std::vector<double> alphas(runs), m1s(runs);
  std::vector<std::string> preferred(runs);
  detail::parallel_for(runs, config.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const std::size_t point = idx / config.seeds;
      const std::size_t s = idx % config.seeds;
      const HiaResult res = run_hia(sweep_point(config, config.values[point]), config.base_seed + s);
      alphas[idx] = res.effective_alpha;
      const ModelFit* dp = res.report.find(kModelDoublePareto);
      m1s[idx] = dp && dp->ok() ? dp->parameters.at("m1") : std::numeric_limits<double>::quiet_NaN();
      preferred[idx] = res.report.preferred.value_or("none");
    }
  });

  SweepResult result;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < config.values.size(); ++i) {
    const auto first = static_cast<std::ptrdiff_t>(i * config.seeds);
    const auto last = first + static_cast<std::ptrdiff_t>(config.seeds);
    const HiaParams p = sweep_point(config, config.values[i]);
    std::map<std::string, std::size_t> votes;
    for (auto it = preferred.begin() + first; it != preferred.begin() + last; ++it) ++votes[*it];
    std::string mode;
    std::size_t best = 0;
    for (const auto& model : all_models()) {
      if (votes[model] > best) {
        best = votes[model];
        mode = model;
      }
    }
    if (mode.empty()) mode = "none";
    SweepRow row{p.noise_std, p.coupling_in,
                 mean(std::span(alphas).subspan(static_cast<std::size_t>(first), config.seeds)),
                 mean(std::span(m1s).subspan(static_cast<std::size_t>(first), config.seeds)), mode};
    xs.push_back(config.values[i]);
    ys.push_back(row.m1_hat);
    result.rows.push_back(std::move(row));
  }
  result.spearman_rho = spearman(xs, ys);
  return result;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "noise_std,coupling,effective_alpha,m1_hat,preferred_model,spearman_rho\n";
  for (const auto& row : result.rows) {
    os << io::format_double(row.noise_std) << ',' << io::format_double(row.coupling) << ','
       << io::format_double(row.effective_alpha) << ',' << io::format_double(row.m1_hat) << ','
       << row.preferred_model << ',' << io::format_double(result.spearman_rho) << '\n';
  }
}

}  // namespace stochevo

#endif  // STOCHEVO_HIA_SIM_HPP
