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

// Geometric Brownian motion dX = r X dt + alpha X dB: exact log-space
// sampling of the terminal state and an explicit Euler scheme used for
// validation.

#ifndef STOCHEVO_SDE_CORE_HPP
#define STOCHEVO_SDE_CORE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stochevo/errors.hpp"
#include "stochevo/parallel.hpp"
#include "stochevo/rng.hpp"

namespace stochevo {

class GbmParams {
 public:
  GbmParams(double x0, double r, double alpha) : x0_(x0), r_(r), alpha_(alpha) {
    detail::require_finite(x0, "x0");
    detail::require_finite(r, "r");
    detail::require_finite(alpha, "alpha");
    detail::require(x0 > 0.0, "x0 must be strictly positive");
    detail::require(alpha >= 0.0, "alpha must be non-negative");
  }

  double x0() const noexcept { return x0_; }
  double r() const noexcept { return r_; }
  double alpha() const noexcept { return alpha_; }

  /// Drift of ln X, r - alpha^2 / 2.
  double log_drift() const noexcept { return r_ - 0.5 * alpha_ * alpha_; }

  GbmParams with_x0(double x0) const { return {x0, r_, alpha_}; }

 private:
  double x0_;
  double r_;
  double alpha_;
};

/// Normal law of ln X_t.
struct LogTerminalLaw {
  double mean;
  double variance;

  double stddev() const { return std::sqrt(variance); }
};

namespace detail {

inline void require_time(double t) {
  require(std::isfinite(t), "t must be finite");
  require(t >= 0.0, "t must be non-negative");
}

}  // namespace detail

inline LogTerminalLaw terminal_log_law(const GbmParams& params, double t) {
  detail::require_time(t);
  const double a = params.alpha();
  return {std::log(params.x0()) + params.log_drift() * t, a * a * t};
}

/// ln X_t for a given standard normal draw z.
inline double terminal_log_from_normal(const GbmParams& params, double t, double z) {
  const LogTerminalLaw law = terminal_log_law(params, t);
  return law.mean + law.stddev() * z;
}

/// Exact draw of ln X_t; consumes one uniform from `rng`.
inline double sample_terminal_log(const GbmParams& params, double t, RngStream& rng) {
  detail::require_time(t);
  return terminal_log_from_normal(params, t, rng.normal());
}

/// Terminal levels X_t, sample i drawn from stream (master_seed, i).
inline std::vector<double> sample_terminal_batch(const GbmParams& params, double t, std::size_t n,
                                                 std::uint64_t master_seed, unsigned workers = 1) {
  detail::require_time(t);
  detail::require(n >= 1, "n must be at least 1");
  std::vector<double> out(n);
  detail::parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng(master_seed, i);
      out[i] = std::exp(sample_terminal_log(params, t, rng));
    }
  });
  return out;
}

struct SamplePath {
  std::vector<double> times;
  std::vector<double> values;
  // Euler steps whose Gaussian increment was redrawn to keep the level positive.
  std::size_t rejected_steps = 0;
};

namespace detail {

inline void require_grid(double t, std::size_t n_steps) {
  require(std::isfinite(t) && t > 0.0, "t must be finite and strictly positive");
  require(n_steps >= 1, "n_steps must be at least 1");
}

inline double grid_time(double t, std::size_t k, std::size_t n_steps) {
  return k == n_steps ? t : t * static_cast<double>(k) / static_cast<double>(n_steps);
}

}  // namespace detail

/// Euler scheme X_{k+1} = X_k (1 + r dt + alpha sqrt(dt) Z_k). A step that
/// would leave the level non-positive is rejected and its increment redrawn.
inline SamplePath euler_path(const GbmParams& params, double t, std::size_t n_steps,
                             RngStream& rng) {
  detail::require_grid(t, n_steps);
  const double dt = t / static_cast<double>(n_steps);
  const double drift = params.r() * dt;
  const double diffusion = params.alpha() * std::sqrt(dt);

  SamplePath path;
  path.times.resize(n_steps + 1);
  path.values.resize(n_steps + 1);
  path.times[0] = 0.0;
  path.values[0] = params.x0();
  for (std::size_t k = 0; k < n_steps; ++k) {
    double factor = 1.0 + drift + diffusion * rng.normal();
    while (!(factor > 0.0)) {
      ++path.rejected_steps;
      factor = 1.0 + drift + diffusion * rng.normal();
    }
    path.values[k + 1] = path.values[k] * factor;
    path.times[k + 1] = detail::grid_time(t, k + 1, n_steps);
  }
  return path;
}

/// Euler scheme driven by caller-supplied standard normal increments, one per
/// step. Used to couple the scheme with the exact solution on the same
/// Brownian path; a non-positive level cannot be redrawn here and throws.
inline SamplePath euler_path_from_increments(const GbmParams& params, double t,
                                             std::span<const double> increments) {
  const std::size_t n_steps = increments.size();
  detail::require_grid(t, n_steps);
  const double dt = t / static_cast<double>(n_steps);
  const double drift = params.r() * dt;
  const double diffusion = params.alpha() * std::sqrt(dt);

  SamplePath path;
  path.times.resize(n_steps + 1);
  path.values.resize(n_steps + 1);
  path.values[0] = params.x0();
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double factor = 1.0 + drift + diffusion * increments[k];
    if (!(factor > 0.0)) {
      throw degenerate_input_error("Euler step " + std::to_string(k) +
                                   " leaves the level non-positive");
    }
    path.values[k + 1] = path.values[k] * factor;
    path.times[k + 1] = detail::grid_time(t, k + 1, n_steps);
  }
  return path;
}

}  // namespace stochevo

#endif  // STOCHEVO_SDE_CORE_HPP
