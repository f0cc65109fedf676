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

// Double-Pareto law of a GBM observed at an exponential horizon.
//
// With mu = r - alpha^2/2 the MGF of ln X_T conditioned on an Exp(nu)
// horizon is nu / (nu - mu s - alpha^2 s^2 / 2). Its poles are the roots of
//
//     (alpha^2 / 2) s^2 + mu s - nu = 0,
//
// one positive (m1, upper-tail exponent) and one negative (-m2, m2 the
// lower-tail exponent). ln X_T is then asymmetric Laplace around ln x0 with
// rates m2 (left) and m1 (right), and X_T is double-Pareto.
//
// The historical closed forms for the exponents are written for the quadratic
// with the opposite sign on the linear term; they are exposed separately as
// solve_exponents_paper() and relate to the canonical pair by
//   mu > 0:  m1_paper = m2,   m2_paper = -m1
//   mu < 0:  m1_paper = -m1,  m2_paper = m2

#ifndef STOCHEVO_DPARETO_HPP
#define STOCHEVO_DPARETO_HPP

#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stochevo/errors.hpp"
#include "stochevo/io/format.hpp"
#include "stochevo/rng.hpp"

namespace stochevo {

enum class Regime { QuasiStochastic, Critical, Stochastic };

inline std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::QuasiStochastic: return "QuasiStochastic";
    case Regime::Critical: return "Critical";
    case Regime::Stochastic: return "Stochastic";
  }
  return "unknown";
}

/// Double-Pareto distribution: power law with exponent m2 below `center`
/// and m1 above it.
class DoubleParetoDist {
 public:
  DoubleParetoDist(double center, double m1, double m2) : center_(center), m1_(m1), m2_(m2) {
    detail::require(std::isfinite(center) && center > 0.0, "center must be finite and positive");
    detail::require(std::isfinite(m1) && m1 > 0.0, "m1 must be finite and positive");
    detail::require(std::isfinite(m2) && m2 > 0.0, "m2 must be finite and positive");
  }

  double center() const noexcept { return center_; }
  double m1() const noexcept { return m1_; }
  double m2() const noexcept { return m2_; }

  /// Probability mass below the center, m1 / (m1 + m2).
  double lower_mass() const noexcept { return m1_ / (m1_ + m2_); }
  double upper_mass() const noexcept { return m2_ / (m1_ + m2_); }

 private:
  double center_;
  double m1_;
  double m2_;
};

struct ExponentSolution {
  double m1_canonical;
  double m2_canonical;
  double m1_paper;
  double m2_paper;
  double mu;
  double alpha_star;
  Regime regime;
};

struct PaperExponents {
  double m1;
  double m2;
};

struct RegimeClass {
  double alpha_star;
  Regime regime;
};

/// Relative half-width of the Critical band around alpha_star.
inline constexpr double kCriticalBand = 1e-12;

inline RegimeClass classify_regime(double r, double alpha) {
  detail::require(std::isfinite(r) && r > 0.0,
                  "r must be strictly positive (alpha_star = sqrt(2r) is undefined otherwise)");
  detail::require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be finite and non-negative");
  const double alpha_star = std::sqrt(2.0 * r);
  if (std::abs(alpha - alpha_star) <= kCriticalBand * alpha_star) {
    return {alpha_star, Regime::Critical};
  }
  return {alpha_star, alpha < alpha_star ? Regime::QuasiStochastic : Regime::Stochastic};
}

/// The closed forms m1,2 = (mu/alpha^2)(1 +- sqrt(1 + 8 nu alpha^2 / (2r - alpha^2)^2)),
/// evaluated without cancellation in the minus branch. At alpha^2 = 2r exactly
/// the pair is the limit (+sqrt(nu/r), -sqrt(nu/r)) approached from below.
inline PaperExponents solve_exponents_paper(double r, double alpha, double nu) {
  detail::require_finite(r, "r");
  detail::require(std::isfinite(alpha) && alpha > 0.0, "alpha must be finite and positive");
  detail::require(std::isfinite(nu) && nu > 0.0, "nu must be finite and positive");
  const double a2 = alpha * alpha;
  const double gap = 2.0 * r - a2;
  if (gap == 0.0) {
    const double s = std::sqrt(nu / r);
    return {s, -s};
  }
  const double x = 8.0 * nu * a2 / (gap * gap);
  const double root = std::sqrt(1.0 + x);
  const double lead = (r - 0.5 * a2) / a2;
  return {lead * (1.0 + root), lead * (-x / (1.0 + root))};
}

/// Positive tail exponents from the characteristic quadratic. The larger
/// root magnitude comes from the sign-safe quadratic formula and the other
/// from the Vieta product m1 m2 = 2 nu / alpha^2.
inline ExponentSolution solve_exponents_canonical(double r, double alpha, double nu) {
  detail::require(std::isfinite(alpha), "alpha must be finite");
  detail::require(alpha > 0.0, "alpha must be strictly positive: the quadratic degenerates at alpha = 0");
  detail::require(std::isfinite(nu) && nu > 0.0, "nu must be finite and positive");
  const RegimeClass regime = classify_regime(r, alpha);

  const double a2 = alpha * alpha;
  const double mu = r - 0.5 * a2;
  const double product = 2.0 * nu / a2;
  const double sq = std::sqrt(mu * mu + 2.0 * a2 * nu);
  double m1 = 0.0;
  double m2 = 0.0;
  if (mu >= 0.0) {
    m2 = (mu + sq) / a2;
    m1 = product / m2;
  } else {
    m1 = (sq - mu) / a2;
    m2 = product / m1;
  }
  const PaperExponents printed = solve_exponents_paper(r, alpha, nu);
  return {m1, m2, printed.m1, printed.m2, mu, regime.alpha_star, regime.regime};
}

struct VietaResiduals {
  double product;     // |m1 m2 - 2 nu / alpha^2| / (2 nu / alpha^2)
  double difference;  // |(m2 - m1) - 2 mu / alpha^2| / (m1 + m2)
};

inline VietaResiduals vieta_residuals(double alpha, double nu, const ExponentSolution& s) {
  const double a2 = alpha * alpha;
  const double product = 2.0 * nu / a2;
  const double m1 = s.m1_canonical;
  const double m2 = s.m2_canonical;
  return {std::abs(m1 * m2 - product) / product, std::abs((m2 - m1) - 2.0 * s.mu / a2) / (m1 + m2)};
}

inline DoubleParetoDist killed_gbm_distribution(double x0, double r, double alpha, double nu) {
  const ExponentSolution s = solve_exponents_canonical(r, alpha, nu);
  return {x0, s.m1_canonical, s.m2_canonical};
}

namespace detail {

inline void require_level(double x) {
  require(!std::isnan(x) && x > 0.0, "x must be strictly positive");
}

}  // namespace detail

inline double dpareto_pdf(const DoubleParetoDist& dist, double x) {
  detail::require_level(x);
  const double m1 = dist.m1();
  const double m2 = dist.m2();
  const double c = m1 * m2 / ((m1 + m2) * dist.center());
  const double z = x / dist.center();
  return x <= dist.center() ? c * std::pow(z, m2 - 1.0) : c * std::pow(z, -m1 - 1.0);
}

inline double dpareto_cdf(const DoubleParetoDist& dist, double x) {
  detail::require_level(x);
  const double z = x / dist.center();
  return x <= dist.center() ? dist.lower_mass() * std::pow(z, dist.m2())
                            : 1.0 - dist.upper_mass() * std::pow(z, -dist.m1());
}

inline double dpareto_quantile(const DoubleParetoDist& dist, double p) {
  detail::require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  const double split = dist.lower_mass();
  if (p == split) return dist.center();
  if (p < split) return dist.center() * std::pow(p / split, 1.0 / dist.m2());
  return dist.center() * std::pow((1.0 - p) / dist.upper_mass(), -1.0 / dist.m1());
}

/// Asymmetric Laplace density of ln X at xi.
inline double dpareto_log_space_pdf(const DoubleParetoDist& dist, double xi) {
  const double m1 = dist.m1();
  const double m2 = dist.m2();
  const double c = m1 * m2 / (m1 + m2);
  const double d = xi - std::log(dist.center());
  return d <= 0.0 ? c * std::exp(m2 * d) : c * std::exp(-m1 * d);
}

/// E[exp(s ln X)], defined on the strip -m2 < s < m1.
inline double dpareto_log_mgf(const DoubleParetoDist& dist, double s) {
  if (!(s > -dist.m2() && s < dist.m1())) {
    throw domain_error("MGF argument must lie strictly inside (-m2, m1)");
  }
  const double m1 = dist.m1();
  const double m2 = dist.m2();
  return std::exp(std::log(dist.center()) * s) * m1 * m2 / ((m1 - s) * (m2 + s));
}

inline double sample_dpareto(const DoubleParetoDist& dist, RngStream& rng) {
  return dpareto_quantile(dist, rng.uniform_open());
}

// Limit report -------------------------------------------------------------

/// Fixed evaluation points standing in for the limits.
struct LimitProxies {
  static constexpr double nu_small = 1e-10;
  static constexpr double nu_large = 1e10;
  static constexpr double alpha_small = 1e-6;
  static constexpr double alpha_critical_offset = 1e-6;  // relative to alpha_star
  static constexpr double alpha_large = 1e3;
};

struct LimitRecord {
  int number;            // 17..28
  std::string limit_id;  // "eq17" ...
  std::string description;
  double alpha;  // evaluation point
  double nu;
  double evaluated;  // signed value of the closed form at the proxy
  double stated;     // signed limit as printed; may be +-inf
  double deviation;  // ||evaluated| - |stated||, or 1/|evaluated| for infinite limits
  bool sign_agrees;
};

struct LimitReport {
  double r;
  double alpha;
  double nu;
  std::vector<LimitRecord> records;
};

namespace detail {

inline LimitRecord make_limit_record(int number, std::string description, double alpha,
                                     double nu, double evaluated, double stated) {
  LimitRecord rec;
  rec.number = number;
  rec.limit_id = "eq" + std::to_string(number);
  rec.description = std::move(description);
  rec.alpha = alpha;
  rec.nu = nu;
  rec.evaluated = evaluated;
  rec.stated = stated;
  rec.deviation = std::isinf(stated) ? 1.0 / std::abs(evaluated)
                                     : std::abs(std::abs(evaluated) - std::abs(stated));
  rec.sign_agrees = stated == 0.0 || std::signbit(evaluated) == std::signbit(stated);
  return rec;
}

}  // namespace detail

/// Evaluates the closed forms at the proxy extremes and compares them with the
/// limits as they are usually stated. Magnitudes are what can be trusted;
/// signs are reported, not enforced.
inline LimitReport limit_table(double r, double alpha, double nu) {
  detail::require(std::isfinite(r) && r > 0.0, "r must be finite and positive");
  detail::require(std::isfinite(nu) && nu > 0.0, "nu must be finite and positive");
  detail::require(std::isfinite(alpha) && alpha > 0.0, "alpha must be finite and positive");
  using P = LimitProxies;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double a2 = alpha * alpha;
  const double root_ratio = std::sqrt(nu / r);
  const double alpha_star = std::sqrt(2.0 * r);
  const double above = alpha_star * (1.0 + P::alpha_critical_offset);
  const double below = alpha_star * (1.0 - P::alpha_critical_offset);

  const auto nu0 = solve_exponents_paper(r, alpha, P::nu_small);
  const auto nuinf = solve_exponents_paper(r, alpha, P::nu_large);
  const auto a0 = solve_exponents_paper(r, P::alpha_small, nu);
  const auto aplus = solve_exponents_paper(r, above, nu);
  const auto aminus = solve_exponents_paper(r, below, nu);
  const auto ainf = solve_exponents_paper(r, P::alpha_large, nu);

  using detail::make_limit_record;
  LimitReport report{r, alpha, nu, {}};
  auto& recs = report.records;
  recs.push_back(make_limit_record(17, "nu->0 m1", alpha, P::nu_small, nu0.m1, (2.0 * r - a2) / a2));
  recs.push_back(make_limit_record(18, "nu->0 m2", alpha, P::nu_small, nu0.m2, 0.0));
  recs.push_back(make_limit_record(19, "nu->inf m1", alpha, P::nu_large, nuinf.m1, inf));
  recs.push_back(make_limit_record(20, "nu->inf m2", alpha, P::nu_large, nuinf.m2, -inf));
  recs.push_back(make_limit_record(21, "alpha->0 m1", P::alpha_small, nu, a0.m1, inf));
  recs.push_back(make_limit_record(22, "alpha->0 m2", P::alpha_small, nu, a0.m2, -nu / r));
  recs.push_back(make_limit_record(23, "alpha->alpha_star+ m1", above, nu, aplus.m1, root_ratio));
  recs.push_back(make_limit_record(24, "alpha->alpha_star- m1", below, nu, aminus.m1, -root_ratio));
  recs.push_back(make_limit_record(25, "alpha->alpha_star+ m2", above, nu, aplus.m2, -root_ratio));
  recs.push_back(make_limit_record(26, "alpha->alpha_star- m2", below, nu, aminus.m2, root_ratio));
  recs.push_back(make_limit_record(27, "alpha->inf m1", P::alpha_large, nu, ainf.m1, -1.0));
  recs.push_back(make_limit_record(28, "alpha->inf m2", P::alpha_large, nu, ainf.m2, 0.0));
  return report;
}

inline void write_limit_csv(std::ostream& os, const LimitReport& report) {
  os << "limit_id,evaluated,stated,deviation,sign_agrees\n";
  for (const auto& rec : report.records) {
    os << rec.limit_id << ',' << io::format_double(rec.evaluated) << ','
       << io::format_double(rec.stated) << ',' << io::format_double(rec.deviation) << ','
       << (rec.sign_agrees ? "true" : "false") << '\n';
  }
}

// Figure data ---------------------------------------------------------------

struct Figure1Row {
  double alpha;
  double m1_paper;
  double m2_paper;
  double m1_canonical;
  double m2_canonical;
};

/// Minimum distance between a grid point and alpha_star.
inline constexpr double kFigureCriticalExclusion = 1e-9;

inline std::vector<Figure1Row> figure1_data(double r, double nu, std::span<const double> alpha_grid) {
  detail::require(std::isfinite(r) && r > 0.0, "r must be finite and positive");
  detail::require(std::isfinite(nu) && nu > 0.0, "nu must be finite and positive");
  const double alpha_star = std::sqrt(2.0 * r);
  std::vector<Figure1Row> rows;
  rows.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    detail::require(std::isfinite(alpha) && alpha > 0.0, "alpha grid values must be positive");
    detail::require(std::abs(alpha - alpha_star) > kFigureCriticalExclusion,
                    "alpha grid must exclude alpha_star = sqrt(2r)");
    const ExponentSolution s = solve_exponents_canonical(r, alpha, nu);
    rows.push_back({alpha, s.m1_paper, s.m2_paper, s.m1_canonical, s.m2_canonical});
  }
  return rows;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  detail::require(points >= 2 && lo < hi, "grid needs lo < hi and at least two points");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  detail::require(lo > 0.0, "log grid needs lo > 0");
  std::vector<double> grid = linear_grid(std::log(lo), std::log(hi), points);
  for (auto& g : grid) g = std::exp(g);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

inline void write_figure1_csv(std::ostream& os, std::span<const Figure1Row> rows) {
  os << "alpha,m1_paper,m2_paper,m1_canonical,m2_canonical\n";
  for (const auto& row : rows) {
    os << io::format_double(row.alpha) << ',' << io::format_double(row.m1_paper) << ','
       << io::format_double(row.m2_paper) << ',' << io::format_double(row.m1_canonical) << ','
       << io::format_double(row.m2_canonical) << '\n';
  }
}

}  // namespace stochevo

#endif  // STOCHEVO_DPARETO_HPP
