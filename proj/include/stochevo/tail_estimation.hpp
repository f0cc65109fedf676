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

// Tail-exponent estimation and heavy-tail model comparison.
//
// compare_models() never reports a single fit: a double-Pareto, a lognormal
// and a Pareto-tail model are always fitted side by side and ranked by AIC,
// each with its KS distance to the data.

#ifndef STOCHEVO_TAIL_ESTIMATION_HPP
#define STOCHEVO_TAIL_ESTIMATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stochevo/dpareto.hpp"
#include "stochevo/errors.hpp"
#include "stochevo/io/json.hpp"
#include "stochevo/special.hpp"
#include "stochevo/stats.hpp"

namespace stochevo {

/// Non-empty set of strictly positive, finite observations.
class SampleSet {
 public:
  explicit SampleSet(std::vector<double> values, std::string source = {})
      : values_(std::move(values)), source_(std::move(source)) {
    detail::require(!values_.empty(), "sample set must not be empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double v = values_[i];
      if (!std::isfinite(v) || v <= 0.0) {
        throw validation_error("sample " + std::to_string(i) + " is not a finite positive value");
      }
    }
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::string& source() const noexcept { return source_; }

  std::vector<double> sorted() const {
    std::vector<double> s = values_;
    std::sort(s.begin(), s.end());
    return s;
  }

 private:
  std::vector<double> values_;
  std::string source_;
};

// Hill -----------------------------------------------------------------------

/// Hill estimate of the upper-tail exponent from the k largest values:
/// k / sum_{i<=k} ln(x_(i) / x_(k+1)), order statistics descending.
inline double hill_estimator(const SampleSet& samples, std::size_t k) {
  const std::size_t n = samples.size();
  detail::require(k >= 2 && k < n, "hill_estimator needs 2 <= k < n");
  std::vector<double> s = samples.sorted();
  const double threshold = std::log(s[n - 1 - k]);
  double spacing = 0.0;
  for (std::size_t i = 0; i < k; ++i) spacing += std::log(s[n - 1 - i]) - threshold;
  if (!(spacing > 0.0)) {
    throw degenerate_input_error("hill_estimator: the k largest values have zero log-spacing");
  }
  return static_cast<double>(k) / spacing;
}

inline std::size_t default_hill_k(std::size_t n) { return std::max<std::size_t>(10, n / 100); }

// Lognormal -------------------------------------------------------------------

struct LognormalFit {
  double mu_hat;
  double sigma_hat;
  double log_likelihood;  // NaN when degenerate
  bool degenerate;        // sigma_hat == 0
};

inline LognormalFit fit_lognormal(const SampleSet& samples) {
  const std::size_t n = samples.size();
  detail::require(n >= 2, "fit_lognormal needs at least 2 samples");
  std::vector<double> logs = samples.sorted();
  for (auto& v : logs) v = std::log(v);
  if (logs.front() == logs.back()) return {logs.front(), 0.0, std::numeric_limits<double>::quiet_NaN(), true};
  const double sum_log = exact_sum(logs);
  const double mu = sum_log / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (logs[i] - mu) * (logs[i] - mu);
  const double sigma = std::sqrt(exact_sum(sq) / static_cast<double>(n));
  if (sigma == 0.0) return {mu, 0.0, std::numeric_limits<double>::quiet_NaN(), true};
  const double nn = static_cast<double>(n);
  const double ll = -sum_log - nn * std::log(sigma) - 0.5 * nn * std::log(2.0 * std::numbers::pi) - 0.5 * nn;
  return {mu, sigma, ll, false};
}

inline double lognormal_cdf(double mu, double sigma, double x) {
  return normal_cdf((std::log(x) - mu) / sigma);
}

// Double-Pareto ---------------------------------------------------------------

struct DoubleParetoFit {
  double center_hat;
  double m1_hat;
  double m2_hat;
  double log_likelihood;
};

namespace detail {

// Joint MLE of (m1, m2) at a fixed log-center. With S_L and S_U the summed
// log-distances below and above the center, the likelihood
//   n [ln m1 + ln m2 - ln(m1 + m2)] - sum(ln x) - m2 S_L - m1 S_U
// is maximised by m1 = n / (sqrt(S_U) (sqrt(S_L) + sqrt(S_U))) and the mirror
// image for m2; the profile is n ln n - 2n ln(sqrt(S_L) + sqrt(S_U)) - n - sum(ln x).
inline DoubleParetoFit dpareto_fit_from_sums(double center, double lower_sum, double upper_sum,
                                             double sum_log, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double a = std::sqrt(lower_sum);
  const double b = std::sqrt(upper_sum);
  const double m1 = nn / (b * (a + b));
  const double m2 = nn / (a * (a + b));
  const double ll = nn * std::log(nn) - 2.0 * nn * std::log(a + b) - nn - sum_log;
  return {center, m1, m2, ll};
}

struct LogSample {
  std::vector<double> values;  // ascending
  std::vector<double> raw;     // logs of values
  std::vector<double> logs;    // raw shifted by `shift`
  std::vector<double> prefix;  // prefix[i] = sum of logs[0..i)
  double shift;
  double sum_log;  // sum of unshifted logs, correctly rounded
};

inline LogSample make_log_sample(const SampleSet& samples) {
  LogSample ls;
  ls.values = samples.sorted();
  ls.raw = ls.values;
  for (auto& v : ls.raw) v = std::log(v);
  ls.sum_log = exact_sum(ls.raw);
  ls.shift = ls.raw[ls.raw.size() / 2];
  ls.logs = ls.raw;
  for (auto& v : ls.logs) v -= ls.shift;
  ls.prefix.assign(ls.logs.size() + 1, 0.0);
  for (std::size_t i = 0; i < ls.logs.size(); ++i) ls.prefix[i + 1] = ls.prefix[i] + ls.logs[i];
  return ls;
}

// Summed distances below / above shifted log-center c.
inline std::pair<double, double> side_sums(const LogSample& ls, double c) {
  const std::size_t n = ls.logs.size();
  const auto lo = static_cast<std::size_t>(std::lower_bound(ls.logs.begin(), ls.logs.end(), c) - ls.logs.begin());
  const auto hi = static_cast<std::size_t>(std::upper_bound(ls.logs.begin(), ls.logs.end(), c) - ls.logs.begin());
  const double lower = static_cast<double>(lo) * c - ls.prefix[lo];
  const double upper = (ls.prefix[n] - ls.prefix[hi]) - static_cast<double>(n - hi) * c;
  return {std::max(lower, 0.0), std::max(upper, 0.0)};
}

// Correctly rounded side sums around an unshifted log-center.
inline std::pair<double, double> exact_side_sums(const LogSample& ls, double log_center) {
  std::vector<double> below;
  std::vector<double> above;
  for (double y : ls.raw) {
    if (y < log_center) below.push_back(log_center - y);
    else if (y > log_center) above.push_back(y - log_center);
  }
  return {exact_sum(below), exact_sum(above)};
}

}  // namespace detail

/// (m1, m2) MLE with the center held fixed.
inline DoubleParetoFit fit_dpareto_at_center(const SampleSet& samples, double center) {
  detail::require(std::isfinite(center) && center > 0.0, "center must be finite and positive");
  const auto ls = detail::make_log_sample(samples);
  const double c = std::log(center);
  const auto [lower, upper] = detail::exact_side_sums(ls, c);
  if (!(lower > 0.0) || !(upper > 0.0)) {
    throw one_sided_data_error(
        "no observations on one side of the center; use the pareto_tail model instead");
  }
  return detail::dpareto_fit_from_sums(center, lower, upper, ls.sum_log, samples.size());
}

/// Full MLE over (center, m1, m2). The profile likelihood in the center is
/// a decreasing function of sqrt(S_L) + sqrt(S_U), which is concave between
/// consecutive order statistics, so its maximum sits on an observation and a
/// scan over the distinct interior values is exact. In the two outermost gaps
/// the supremum is approached only as one side empties, which is not a fit.
inline DoubleParetoFit fit_dpareto_mle(const SampleSet& samples) {
  const std::size_t n = samples.size();
  detail::require(n >= 3, "fit_dpareto_mle needs at least 3 samples");
  const auto ls = detail::make_log_sample(samples);
  detail::require(ls.logs.front() < ls.logs.back(), "fit_dpareto_mle needs at least 2 distinct values");

  double best_score = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0 && ls.logs[j] == ls.logs[j - 1]) continue;
    const double c = ls.logs[j];
    const auto [lower, upper] = detail::side_sums(ls, c);
    if (!(lower > 0.0) || !(upper > 0.0)) continue;
    const double score = std::sqrt(lower) + std::sqrt(upper);
    if (score < best_score) {
      best_score = score;
      best = j;
    }
  }
  if (!std::isfinite(best_score)) {
    throw one_sided_data_error(
        "every candidate center leaves one side empty; use the pareto_tail model instead");
  }
  const double log_center = ls.raw[best];
  const auto [lower, upper] = detail::exact_side_sums(ls, log_center);
  return detail::dpareto_fit_from_sums(ls.values[best], lower, upper, ls.sum_log, n);
}

// Pareto tail -----------------------------------------------------------------

/// Pareto law anchored at the sample minimum with the Hill exponent.
struct ParetoTailFit {
  double xmin;
  double exponent;
  std::size_t k;
  double log_likelihood;
};

inline ParetoTailFit fit_pareto_tail(const SampleSet& samples, std::optional<std::size_t> k = {}) {
  const std::size_t n = samples.size();
  const std::size_t kk = k.value_or(default_hill_k(n));
  const double m = hill_estimator(samples, kk);
  const auto sorted = samples.sorted();
  const double xmin = sorted.front();
  std::vector<double> logs(sorted);
  for (auto& v : logs) v = std::log(v);
  const double nn = static_cast<double>(n);
  const double ll = nn * std::log(m) + nn * m * std::log(xmin) - (m + 1.0) * exact_sum(logs);
  return {xmin, m, kk, ll};
}

// Model comparison ------------------------------------------------------------

inline constexpr const char* kModelDoublePareto = "double_pareto";
inline constexpr const char* kModelLognormal = "lognormal";
inline constexpr const char* kModelParetoTail = "pareto_tail";

inline const std::vector<std::string>& all_models() {
  static const std::vector<std::string> models{kModelDoublePareto, kModelLognormal, kModelParetoTail};
  return models;
}

struct ModelFit {
  std::string model;
  int n_params = 0;
  std::map<std::string, double> parameters;
  double log_likelihood = std::numeric_limits<double>::quiet_NaN();
  double aic = std::numeric_limits<double>::quiet_NaN();
  double ks_statistic = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::string> error;

  bool ok() const { return !error.has_value(); }
};

struct FitReport {
  std::string source;
  std::size_t n = 0;
  std::vector<ModelFit> models;
  std::optional<std::string> preferred;

  const ModelFit* find(const std::string& model) const {
    for (const auto& m : models) {
      if (m.model == model) return &m;
    }
    return nullptr;
  }
};

struct CompareOptions {
  std::optional<std::size_t> hill_k;
  std::vector<std::string> models = all_models();
};

inline constexpr std::size_t kCompareMinSamples = 10;

namespace detail {

inline void finish_fit(ModelFit& fit) { fit.aic = 2.0 * fit.n_params - 2.0 * fit.log_likelihood; }

template <class Fn>
ModelFit guarded_fit(const std::string& model, int n_params, Fn&& fn) {
  ModelFit fit;
  fit.model = model;
  fit.n_params = n_params;
  try {
    fn(fit);
    if (fit.ok()) finish_fit(fit);
  } catch (const degenerate_input_error& e) {
    fit.error = e.what();
  } catch (const validation_error& e) {
    fit.error = e.what();
  }
  return fit;
}

}  // namespace detail

inline FitReport compare_models(const SampleSet& samples, const CompareOptions& options = {}) {
  const std::size_t n = samples.size();
  detail::require(n >= kCompareMinSamples, "compare_models needs at least 10 samples");
  for (const auto& m : options.models) {
    const auto& known = all_models();
    detail::require(std::find(known.begin(), known.end(), m) != known.end(), "unknown model: " + m);
  }
  const std::vector<double> sorted = samples.sorted();
  auto wanted = [&](const char* model) {
    return std::find(options.models.begin(), options.models.end(), model) != options.models.end();
  };

  FitReport report;
  report.source = samples.source();
  report.n = n;

  if (wanted(kModelDoublePareto)) {
    report.models.push_back(detail::guarded_fit(kModelDoublePareto, 3, [&](ModelFit& fit) {
      const DoubleParetoFit f = fit_dpareto_mle(samples);
      fit.parameters = {{"center", f.center_hat}, {"m1", f.m1_hat}, {"m2", f.m2_hat}};
      fit.log_likelihood = f.log_likelihood;
      const DoubleParetoDist dist(f.center_hat, f.m1_hat, f.m2_hat);
      fit.ks_statistic = ks_statistic_sorted(sorted, [&](double x) { return dpareto_cdf(dist, x); });
    }));
  }
  if (wanted(kModelLognormal)) {
    report.models.push_back(detail::guarded_fit(kModelLognormal, 2, [&](ModelFit& fit) {
      const LognormalFit f = fit_lognormal(samples);
      fit.parameters = {{"mu", f.mu_hat}, {"sigma", f.sigma_hat}};
      if (f.degenerate) {
        fit.error = "degenerate likelihood: zero log-variance";
        return;
      }
      fit.log_likelihood = f.log_likelihood;
      fit.ks_statistic = ks_statistic_sorted(sorted, [&](double x) { return lognormal_cdf(f.mu_hat, f.sigma_hat, x); });
    }));
  }
  if (wanted(kModelParetoTail)) {
    report.models.push_back(detail::guarded_fit(kModelParetoTail, 2, [&](ModelFit& fit) {
      const ParetoTailFit f = fit_pareto_tail(samples, options.hill_k);
      fit.parameters = {{"xmin", f.xmin}, {"exponent", f.exponent}, {"k", static_cast<double>(f.k)}};
      fit.log_likelihood = f.log_likelihood;
      fit.ks_statistic = ks_statistic_sorted(sorted, [&](double x) { return 1.0 - std::pow(x / f.xmin, -f.exponent); });
    }));
  }

  const ModelFit* best = nullptr;
  for (const auto& m : report.models) {
    if (m.ok() && std::isfinite(m.aic) && (!best || m.aic < best->aic)) best = &m;
  }
  if (best) report.preferred = best->model;
  return report;
}

inline io::json to_json(const FitReport& report) {
  io::json models = io::json::array();
  for (const auto& m : report.models) {
    io::json params = io::json::object();
    for (const auto& [key, value] : m.parameters) params[key] = io::number_or_null(value);
    models.push_back({
        {"model", m.model},
        {"n_params", m.n_params},
        {"parameters", params},
        {"log_likelihood", io::number_or_null(m.log_likelihood)},
        {"aic", io::number_or_null(m.aic)},
        {"ks_statistic", io::number_or_null(m.ks_statistic)},
        {"error", m.error ? io::json(*m.error) : io::json(nullptr)},
    });
  }
  return {
      {"source", report.source},
      {"n", report.n},
      {"models", models},
      {"preferred", report.preferred ? io::json(*report.preferred) : io::json(nullptr)},
  };
}

// Log-log histogram -----------------------------------------------------------

struct HistogramBin {
  double lo;
  double hi;
  double center;  // geometric midpoint
  std::size_t count;
  double density;  // count / (n * (hi - lo))
};

/// Logarithmically spaced bins covering [min, max]; empty bins are dropped.
/// A sample with a single distinct value gets one bin of log-width
/// 1/bins_per_decade centred on it.
inline std::vector<HistogramBin> loglog_histogram(const SampleSet& samples, std::size_t bins_per_decade) {
  detail::require(bins_per_decade >= 1, "bins_per_decade must be at least 1");
  const auto sorted = samples.sorted();
  const double n = static_cast<double>(sorted.size());
  double lo = std::log10(sorted.front());
  double hi = std::log10(sorted.back());
  const double nominal = 1.0 / static_cast<double>(bins_per_decade);
  std::size_t bins = 1;
  if (hi > lo) {
    bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) * static_cast<double>(bins_per_decade))));
  } else {
    lo -= 0.5 * nominal;
    hi += 0.5 * nominal;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double x : sorted) {
    const double pos = (std::log10(x) - lo) / width;
    auto idx = pos <= 0.0 ? std::size_t{0} : static_cast<std::size_t>(pos);
    counts[std::min(idx, bins - 1)]++;
  }
  std::vector<HistogramBin> out;
  for (std::size_t b = 0; b < bins; ++b) {
    if (counts[b] == 0) continue;
    const double e0 = std::pow(10.0, lo + width * static_cast<double>(b));
    const double e1 = std::pow(10.0, lo + width * static_cast<double>(b + 1));
    out.push_back({e0, e1, std::sqrt(e0 * e1), counts[b], static_cast<double>(counts[b]) / (n * (e1 - e0))});
  }
  return out;
}

}  // namespace stochevo

#endif  // STOCHEVO_TAIL_ESTIMATION_HPP
