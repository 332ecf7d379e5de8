// Copyright 2026 The Lexiprec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXIPREC_STATS_HPP_
#define LEXIPREC_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "lexiprec/error.hpp"
#include "lexiprec/parallel.hpp"
#include "lexiprec/rational.hpp"
#include "lexiprec/theory.hpp"

namespace lexiprec::stats {

inline constexpr double kInfiniteDf = std::numeric_limits<double>::infinity();

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  std::optional<double> df;
};

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw DataError("mean of an empty sample");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

// Sample standard deviation (n - 1 denominator), two-pass.
inline double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// Regularized incomplete beta I_x(a, b), continued fraction evaluated with
// the modified Lentz method to relative tolerance 1e-12 (stops at machine
// precision when it can).
inline double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DataError("incomplete beta needs a > 0 and b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) throw DataError("incomplete beta needs x in [0, 1]");
  if (x == 0.0 || x == 1.0) return x;

  // The fraction converges quickly for x < (a + 1) / (a + b + 2); use the
  // symmetry I_x(a, b) = 1 - I_{1-x}(b, a) on the other side.
  if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - incomplete_beta(b, a, 1.0 - x);

  const double log_front = a * std::log(x) + b * std::log1p(-x) -
                           (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  constexpr int kMaxIter = 10000;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double f = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    f *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::fabs(delta - 1.0) < kEps) return std::exp(log_front) * f / a;
  }
  throw NumericalError("incomplete beta continued fraction did not converge (a=" +
                       std::to_string(a) + ", b=" + std::to_string(b) +
                       ", x=" + std::to_string(x) + ")");
}

// P(|T| >= |t|) for Student's t with df degrees of freedom.
inline double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw DataError("t distribution needs df > 0");
  if (std::isnan(t)) throw DataError("t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

// One-sample t-test of paired differences against zero.
inline TestResult paired_t_test(std::span<const double> differences) {
  const std::size_t n = differences.size();
  if (n < 2) throw DataError("paired t-test needs at least 2 differences");
  TestResult r;
  r.n = n;
  r.df = static_cast<double>(n - 1);
  const double m = mean(differences);
  const double sd = sample_sd(differences);
  if (sd == 0.0) {
    r.statistic = m == 0.0 ? 0.0 : std::copysign(kInfiniteDf, m);
    r.p_value = m == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.statistic = m / (sd / std::sqrt(static_cast<double>(n)));
  r.p_value = std::clamp(student_t_two_sided_p(r.statistic, *r.df), 0.0, 1.0);
  return r;
}

// Exact two-sided binomial sign test at success probability 1/2. Zero
// (tied) preferences are excluded by the caller. The statistic is n_pos.
inline TestResult sign_test(std::uint64_t n_pos, std::uint64_t n_neg) {
  const std::uint64_t n = n_pos + n_neg;
  if (n == 0) throw DataError("sign test needs at least one non-zero preference");
  const std::uint64_t top = std::max(n_pos, n_neg);
  BigInt tail = 0;
  for (std::uint64_t k = top; k <= n; ++k) tail += theory::binomial(n, k);
  Rational p = Rational(tail * 2, BigInt(1) << n);
  if (p > 1) p = 1;
  TestResult r;
  r.statistic = static_cast<double>(n_pos);
  r.p_value = to_double(p);
  r.n = static_cast<std::size_t>(n);
  return r;
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

namespace detail {

// P(range of k iid standard normals <= w)
//   = k * integral phi(z) [Phi(z) - Phi(z - w)]^(k-1) dz
// by 20-point Gauss-Legendre on unit panels over [-8.5, 8.5]; phi is below
// 1e-16 outside that window.
inline double normal_range_cdf(double w, int k) {
  if (w <= 0.0) return 0.0;
  using Rule = boost::math::quadrature::gauss<double, 20>;
  auto integrand = [w, k](double z) {
    const double inner = normal_cdf(z) - normal_cdf(z - w);
    return normal_pdf(z) * std::pow(std::max(inner, 0.0), k - 1);
  };
  double value = 0.0;
  for (double a = -8.5; a < 8.5; a += 1.0) {
    value += Rule::integrate(integrand, a, a + 1.0);
  }
  return std::clamp(k * value, 0.0, 1.0);
}

// Panel boundaries for integrating against the density of
// s = sqrt(chi2_df / df): chi quantiles at fixed probabilities, so panels
// are narrow where the mass is.
inline std::vector<double> chi_panels(double df) {
  static constexpr double kProbs[] = {
      1e-13, 1e-10, 1e-7, 1e-5, 1e-4, 1e-3, 0.01, 0.03, 0.07, 0.15,
      0.25,  0.35,  0.5,  0.65, 0.75, 0.85, 0.93, 0.97, 0.99, 0.999};
  const double half = df / 2.0;
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (double p : kProbs) {
    cuts.push_back(std::sqrt(boost::math::gamma_p_inv(half, p) / half));
  }
  static constexpr double kUpper[] = {1e-4, 1e-5, 1e-7, 1e-10, 1e-13};
  for (double p : kUpper) {
    cuts.push_back(std::sqrt(boost::math::gamma_q_inv(half, p) / half));
  }
  return cuts;
}

}  // namespace detail

// CDF of the studentized range Q(k, df) at q. df may be kInfiniteDf. For
// finite df the normal-range CDF at q*s is integrated against the density
// of s = sqrt(chi2_df / df) with 10-point Gauss-Legendre on each panel of
// detail::chi_panels.
inline double studentized_range_cdf(double q, int k, double df) {
  if (k < 2) throw DataError("studentized range needs k >= 2");
  if (!(df >= 1.0)) throw DataError("studentized range needs df >= 1");
  if (q <= 0.0) return 0.0;
  if (std::isinf(q)) return 1.0;
  if (std::isinf(df)) return detail::normal_range_cdf(q, k);

  const double half = df / 2.0;
  const double log_norm =
      std::log(2.0) + half * std::log(half) - std::lgamma(half);
  auto integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double density =
        std::exp(log_norm + (df - 1.0) * std::log(s) - half * s * s);
    return density * detail::normal_range_cdf(q * s, k);
  };
  using Rule = boost::math::quadrature::gauss<double, 10>;
  const auto cuts = detail::chi_panels(df);
  double value = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    value += Rule::integrate(integrand, cuts[i], cuts[i + 1]);
  }
  return std::clamp(value, 0.0, 1.0);
}

// Upper-tail probability P(Q(k, df) >= q).
inline double studentized_range_sf(double q, int k, double df) {
  return 1.0 - studentized_range_cdf(q, k, df);
}

// q with P(Q(k, df) <= q) = 1 - alpha, bracketed and refined with TOMS 748
// to an absolute tolerance of 1e-9.
inline double studentized_range_quantile(double alpha, int k, double df) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DataError("alpha must lie in (0, 1)");
  }
  const double target = 1.0 - alpha;
  auto f = [&](double q) { return studentized_range_cdf(q, k, df) - target; };
  double lo = 0.0;
  double hi = 1.0;
  double f_hi = f(hi);
  while (f_hi < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4) {
      std::ostringstream msg;
      msg << "studentized range quantile failed to bracket (alpha=" << alpha
          << ", k=" << k << ", df=" << df << ", cdf(" << hi / 2.0
          << ")=" << f(hi / 2.0) + target << ")";
      throw NumericalError(msg.str());
    }
    f_hi = f(hi);
  }
  const double f_lo = lo == 0.0 ? -target : f(lo);
  if (f_hi == 0.0) return hi;
  std::uintmax_t max_iter = 200;
  auto tol = [](double a, double b) { return std::fabs(b - a) < 1e-9; };
  auto [a, b] =
      boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, max_iter);
  if (max_iter >= 200 && std::fabs(b - a) >= 1e-6) {
    std::ostringstream msg;
    msg << "studentized range quantile did not converge (alpha=" << alpha
        << ", k=" << k << ", df=" << df << ", bracket=[" << a << ", " << b
        << "])";
    throw NumericalError(msg.str());
  }
  return 0.5 * (a + b);
}

struct HsdPair {
  std::size_t a = 0;
  std::size_t b = 0;
  double mean_difference = 0.0;  // mean_a - mean_b
  TestResult result;
  bool significant = false;
};

struct HsdResult {
  std::size_t systems = 0;
  std::size_t topics = 0;
  double df = 0.0;
  double mse = 0.0;
  double critical_q = 0.0;
  double alpha = 0.05;
  std::vector<double> means;
  std::vector<HsdPair> pairs;  // (a, b) with a < b, row-major order
};

struct HsdOptions {
  // Skip the per-pair tail probabilities (one quadrature each) when only the
  // decisions are needed.
  bool compute_p_values = true;
  // Workers for the per-pair tail probabilities; 0 means hardware
  // concurrency. Results do not depend on it.
  unsigned threads = 1;
};

// Tukey's HSD over a systems x topics matrix, with topics as blocks:
// two-way ANOVA without replication supplies the residual mean square with
// (k - 1)(n - 1) degrees of freedom; pair (i, j) is significant when
// |mean_i - mean_j| / sqrt(MSE / n) reaches the studentized range quantile.
// p_value is the exact upper tail of the studentized range at the statistic.
inline HsdResult tukey_hsd(const Eigen::MatrixXd& values, double alpha = 0.05,
                           const HsdOptions& options = {}) {
  const auto k = static_cast<std::size_t>(values.rows());
  const auto n = static_cast<std::size_t>(values.cols());
  if (k < 2 || n < 2) throw DataError("Tukey HSD needs >= 2 systems and >= 2 topics");
  if (!values.allFinite()) throw DataError("Tukey HSD needs a complete matrix");

  HsdResult out;
  out.systems = k;
  out.topics = n;
  out.alpha = alpha;
  out.df = static_cast<double>((k - 1) * (n - 1));
  const double grand = values.mean();
  const Eigen::VectorXd row_means = values.rowwise().mean();
  const Eigen::RowVectorXd col_means = values.colwise().mean();
  double ss_resid = 0.0;
  double ss_total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double r = values(i, j) - row_means(i) - col_means(j) + grand;
      ss_resid += r * r;
      ss_total += (values(i, j) - grand) * (values(i, j) - grand);
    }
  }
  // Residuals that are rounding noise relative to the data count as zero.
  const bool degenerate = ss_resid <= 1e-24 * ss_total || ss_total == 0.0;
  out.mse = degenerate ? 0.0 : ss_resid / out.df;
  out.critical_q = studentized_range_quantile(alpha, static_cast<int>(k), out.df);
  out.means.assign(row_means.data(), row_means.data() + k);

  const double se = std::sqrt(out.mse / static_cast<double>(n));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      HsdPair pair;
      pair.a = a;
      pair.b = b;
      pair.mean_difference = row_means(a) - row_means(b);
      pair.result.n = n;
      pair.result.df = out.df;
      const double diff = std::fabs(pair.mean_difference);
      if (degenerate) {
        pair.result.statistic = diff == 0.0 ? 0.0 : kInfiniteDf;
      } else {
        pair.result.statistic = diff / se;
      }
      pair.significant = pair.result.statistic >= out.critical_q;
      out.pairs.push_back(pair);
    }
  }
  parallel_for(out.pairs.size(), options.threads, [&](std::size_t i) {
    HsdPair& pair = out.pairs[i];
    if (pair.mean_difference == 0.0) {
      pair.result.p_value = 1.0;
    } else if (std::isinf(pair.result.statistic)) {
      pair.result.p_value = 0.0;
    } else if (options.compute_p_values) {
      pair.result.p_value = studentized_range_sf(pair.result.statistic,
                                                 static_cast<int>(k), out.df);
    } else {
      pair.result.p_value = pair.significant ? alpha : 1.0;
    }
  });
  return out;
}

inline std::vector<double> bonferroni(std::span<const double> p_values) {
  std::vector<double> out;
  out.reserve(p_values.size());
  const double m = static_cast<double>(p_values.size());
  for (double p : p_values) out.push_back(std::min(1.0, p * m));
  return out;
}

// Sample correlation; nullopt when either side has zero variance.
inline std::optional<double> pearson(std::span<const double> xs,
                                     std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DataError("pearson: samples differ in length");
  if (xs.size() < 2) throw DataError("pearson needs at least 2 observations");
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// Least-squares coefficients of y on the columns of X (include an intercept
// column yourself). Solved by column-pivoting Householder QR.
inline Eigen::VectorXd ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size()) throw DataError("ols: X and y differ in rows");
  if (X.rows() <= X.cols()) throw DataError("ols needs more rows than columns");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < X.cols()) {
    throw DataError("ols: design matrix is rank deficient (rank " +
                    std::to_string(qr.rank()) + " < " +
                    std::to_string(X.cols()) + ")");
  }
  return qr.solve(y);
}

}  // namespace lexiprec::stats

#endif  // LEXIPREC_STATS_HPP_
