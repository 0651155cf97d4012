// Copyright 2026 The aihq-rater Authors.
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

#include "aihq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aihq/error.hpp"

namespace aihq::stats {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return h;
}

// x and y = 1 - x are passed separately so callers can supply an accurate
// complement when x is close to 1.
double ibeta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

double mean_of(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

// Unbiased sample variance.
double variance_of(std::span<const double> v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "incomplete beta requires a, b > 0 and x in [0, 1]");
  }
  return ibeta(a, b, x, 1.0 - x);
}

double t_cdf_complement(double t, double df) {
  if (!(df > 0.0)) throw Error(ErrorCode::InvalidDf, "t distribution needs df > 0, got " + std::to_string(df));
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (t == kInf) return 0.0;
  if (t == -kInf) return 1.0;
  const double t2 = t * t;
  const double x = df / (df + t2);
  const double y = t2 / (df + t2);
  const double tail = 0.5 * ibeta(0.5 * df, 0.5, x, y);
  return t > 0.0 ? tail : 1.0 - tail;
}

double t_from_r(double r, double df) {
  if (r >= 1.0) return kInf;
  if (r <= -1.0) return -kInf;
  return r * std::sqrt(df) / std::sqrt(1.0 - r * r);
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "pearson: x has " + std::to_string(x.size()) +
                                               " values, y has " + std::to_string(y.size()));
  }
  if (x.size() < 3) throw Error(ErrorCode::TooFewSamples, "pearson needs at least 3 pairs");

  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::DegenerateVariance, "pearson: a variable has zero variance");
  }

  CorrelationResult result;
  result.n = x.size();
  result.df = static_cast<double>(x.size()) - 2.0;
  result.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  result.t = t_from_r(result.r, result.df);
  result.p_two_tailed = std::min(1.0, 2.0 * t_cdf_complement(std::fabs(result.t), result.df));
  return result;
}

std::string_view to_string(TTestMethod m) noexcept {
  switch (m) {
    case TTestMethod::Student: return "student";
    case TTestMethod::Welch: return "welch";
    case TTestMethod::Paired: return "paired";
  }
  return "?";
}

std::string_view to_string(Tail t) noexcept {
  return t == Tail::OneTailedGreater ? "greater" : "two-sided";
}

TTestResult group_ttest(std::span<const double> a, std::span<const double> b, TTestMethod method,
                        Tail tail) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::TooFewSamples, "t-test needs at least 2 samples per group");
  }
  TTestResult result;
  result.method = method;
  result.tail = tail;
  result.mean_a = mean_of(a);
  result.mean_b = mean_of(b);

  double diff = result.mean_a - result.mean_b;
  double se = 0.0;
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());

  switch (method) {
    case TTestMethod::Student: {
      const double pooled =
          ((na - 1.0) * variance_of(a, result.mean_a) + (nb - 1.0) * variance_of(b, result.mean_b)) /
          (na + nb - 2.0);
      se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
      result.df = na + nb - 2.0;
      break;
    }
    case TTestMethod::Welch: {
      const double qa = variance_of(a, result.mean_a) / na;
      const double qb = variance_of(b, result.mean_b) / nb;
      se = std::sqrt(qa + qb);
      const double denom = qa * qa / (na - 1.0) + qb * qb / (nb - 1.0);
      result.df = denom > 0.0 ? (qa + qb) * (qa + qb) / denom : na + nb - 2.0;
      break;
    }
    case TTestMethod::Paired: {
      if (a.size() != b.size()) {
        throw Error(ErrorCode::LengthMismatch, "paired t-test needs equal-length samples");
      }
      std::vector<double> d(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
      diff = mean_of(d);
      se = std::sqrt(variance_of(d, diff) / na);
      result.df = na - 1.0;
      break;
    }
  }

  if (se == 0.0) {
    result.t = diff == 0.0 ? 0.0 : (diff > 0.0 ? kInf : -kInf);
  } else {
    result.t = diff / se;
  }
  result.p = tail == Tail::TwoTailed
                 ? std::min(1.0, 2.0 * t_cdf_complement(std::fabs(result.t), result.df))
                 : t_cdf_complement(result.t, result.df);
  return result;
}

std::string_view to_string(IccForm f) noexcept { return f == IccForm::ICC2_1 ? "ICC2_1" : "ICC3_1"; }

AnovaTwoWay anova_two_way(const std::vector<std::vector<double>>& ratings) {
  const std::size_t n = ratings.size();
  if (n < 2) throw Error(ErrorCode::TooFewSubjects, "ICC needs at least 2 subjects");
  const std::size_t k = ratings.front().size();
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "ICC needs at least 2 raters");
  for (std::size_t i = 0; i < n; ++i) {
    if (ratings[i].size() != k) throw Error(ErrorCode::InvalidArgument, "ICC rating matrix is ragged");
    for (std::size_t j = 0; j < k; ++j) {
      if (std::isnan(ratings[i][j])) {
        throw Error(ErrorCode::MissingCells, "ICC matrix has a missing cell at subject " +
                                                 std::to_string(i) + ", rater " + std::to_string(j));
      }
    }
  }

  std::vector<double> row_mean(n, 0.0);
  std::vector<double> col_mean(k, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      row_mean[i] += ratings[i][j];
      col_mean[j] += ratings[i][j];
      grand += ratings[i][j];
    }
  }
  for (auto& m : row_mean) m /= static_cast<double>(k);
  for (auto& m : col_mean) m /= static_cast<double>(n);
  grand /= static_cast<double>(n * k);

  double ss_rows = 0.0;
  for (double m : row_mean) ss_rows += (m - grand) * (m - grand);
  ss_rows *= static_cast<double>(k);
  double ss_cols = 0.0;
  for (double m : col_mean) ss_cols += (m - grand) * (m - grand);
  ss_cols *= static_cast<double>(n);
  double ss_error = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double e = ratings[i][j] - row_mean[i] - col_mean[j] + grand;
      ss_error += e * e;
    }
  }

  AnovaTwoWay anova;
  anova.n = n;
  anova.k = k;
  anova.ms_rows = ss_rows / static_cast<double>(n - 1);
  anova.ms_cols = ss_cols / static_cast<double>(k - 1);
  anova.ms_error = ss_error / static_cast<double>((n - 1) * (k - 1));
  return anova;
}

double icc_two_way(const std::vector<std::vector<double>>& ratings, IccForm form) {
  const auto a = anova_two_way(ratings);
  const auto k = static_cast<double>(a.k);
  const auto n = static_cast<double>(a.n);
  double denom = a.ms_rows + (k - 1.0) * a.ms_error;
  if (form == IccForm::ICC2_1) denom += (k / n) * (a.ms_cols - a.ms_error);
  if (denom == 0.0) throw Error(ErrorCode::DegenerateVariance, "ICC undefined: zero denominator");
  return (a.ms_rows - a.ms_error) / denom;
}

std::string_view significance_stars(double p) noexcept {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

}  // namespace aihq::stats
