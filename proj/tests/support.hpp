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


#ifndef STOCHEVO_TESTS_SUPPORT_HPP
#define STOCHEVO_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

#include "stochevo/rng.hpp"

// Independent oracles used by the unit and acceptance suites. Nothing here
// calls into the code under test beyond the raw uniform stream.
namespace stochevo::testing {

// Bisection on a sign change; slow and boring on purpose.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 400) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct QuadRoots {
  double positive;
  double negative_magnitude;
};

// Roots of (alpha^2/2) s^2 + (r - alpha^2/2) s - nu, bracketed by growing the
// interval until the quadratic changes sign, then bisected in long double.
inline QuadRoots brute_force_roots(double r, double alpha, double nu) {
  const long double a = 0.5L * alpha * alpha;
  const long double b = static_cast<long double>(r) - a;
  const long double c = -static_cast<long double>(nu);
  auto q = [&](long double s) { return (a * s + b) * s + c; };
  auto solve = [&](long double lo, long double hi) {
    long double qlo = q(lo);
    for (int i = 0; i < 20000; ++i) {
      const long double mid = 0.5L * (lo + hi);
      if (mid == lo || mid == hi) break;
      const long double qm = q(mid);
      if ((qm < 0) == (qlo < 0)) {
        lo = mid;
        qlo = qm;
      } else {
        hi = mid;
      }
    }
    return static_cast<double>(0.5L * (lo + hi));
  };
  long double hi = 1.0L;
  while (q(hi) < 0) hi *= 2.0L;
  long double lo = -1.0L;
  while (q(lo) < 0) lo *= 2.0L;
  return {solve(0.0L, hi), -solve(lo, 0.0L)};
}

// Adaptive Simpson.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                          double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60);
}

// Pure Pareto(xmin, m) by inverse CDF: x = xmin * u^(-1/m) with u in (0, 1].
inline std::vector<double> pareto_samples(std::size_t n, double xmin, double m, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<double> out(n);
  for (auto& x : out) x = xmin * std::pow(1.0 - rng.uniform(), -1.0 / m);
  return out;
}

// Double-Pareto draws written out from the CDF by hand.
inline std::vector<double> dpareto_samples(std::size_t n, double center, double m1, double m2,
                                           std::uint64_t seed) {
  RngStream rng(seed, 0);
  const double split = m1 / (m1 + m2);
  std::vector<double> out(n);
  for (auto& x : out) {
    const double p = rng.uniform_open();
    x = p <= split ? center * std::pow(p / split, 1.0 / m2)
                   : center * std::pow((1.0 - p) / (1.0 - split), -1.0 / m1);
  }
  return out;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Least-squares slope of y on x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace stochevo::testing

#endif  // STOCHEVO_TESTS_SUPPORT_HPP
