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

#pragma once

// Reference implementations written from the textbook definitions. They
// share no code with the library and trade speed for transparency.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace aihq::oracle {

/// Student-t density.
inline long double t_density(long double x, long double df) {
  const long double log_c = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5L * std::log(df * std::numbers::pi_v<long double>);
  return std::exp(log_c - (df + 1) / 2 * std::log1p(x * x / df));
}

/// P(T > t) by adaptive Gauss-Kronrod integration of the density on [0, |t|].
inline double t_upper_tail(double t, double df) {
  using boost::math::quadrature::gauss_kronrod;
  const long double a = std::fabs(static_cast<long double>(t));
  const long double mass = gauss_kronrod<long double, 61>::integrate(
      [df](long double x) { return t_density(x, df); }, 0.0L, a, 15, 1e-14L);
  const long double upper = 0.5L - mass;
  return static_cast<double>(t >= 0 ? upper : 1.0L - upper);
}

/// Product-moment r from raw sums.
inline double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<long double>(x.size());
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  return static_cast<double>((n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

inline long double mean(const std::vector<double>& v) {
  long double s = 0;
  for (double d : v) s += d;
  return s / static_cast<long double>(v.size());
}

inline long double variance(const std::vector<double>& v) {
  const long double m = mean(v);
  long double s = 0;
  for (double d : v) s += (d - m) * (d - m);
  return s / static_cast<long double>(v.size() - 1);
}

struct TTest {
  double t;
  double df;
};

inline TTest student(const std::vector<double>& a, const std::vector<double>& b) {
  const auto na = static_cast<long double>(a.size());
  const auto nb = static_cast<long double>(b.size());
  const long double sp2 = ((na - 1) * variance(a) + (nb - 1) * variance(b)) / (na + nb - 2);
  const long double t = (mean(a) - mean(b)) / std::sqrt(sp2 * (1 / na + 1 / nb));
  return {static_cast<double>(t), static_cast<double>(na + nb - 2)};
}

inline TTest welch(const std::vector<double>& a, const std::vector<double>& b) {
  const auto na = static_cast<long double>(a.size());
  const auto nb = static_cast<long double>(b.size());
  const long double qa = variance(a) / na;
  const long double qb = variance(b) / nb;
  const long double t = (mean(a) - mean(b)) / std::sqrt(qa + qb);
  const long double df = (qa + qb) * (qa + qb) / (qa * qa / (na - 1) + qb * qb / (nb - 1));
  return {static_cast<double>(t), static_cast<double>(df)};
}

inline TTest paired(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const auto n = static_cast<long double>(d.size());
  const long double t = mean(d) / std::sqrt(variance(d) / n);
  return {static_cast<double>(t), static_cast<double>(n - 1)};
}

/// ICC from sums of squares, with SSE obtained by subtraction.
inline double icc(const std::vector<std::vector<double>>& m, bool agreement) {
  const std::size_t n = m.size();
  const std::size_t k = m[0].size();
  long double grand = 0;
  for (const auto& row : m) {
    for (double v : row) grand += v;
  }
  grand /= static_cast<long double>(n * k);
  long double sst = 0, ssr = 0, ssc = 0;
  for (const auto& row : m) {
    long double rm = 0;
    for (double v : row) {
      sst += (v - grand) * (v - grand);
      rm += v;
    }
    rm /= static_cast<long double>(k);
    ssr += static_cast<long double>(k) * (rm - grand) * (rm - grand);
  }
  for (std::size_t j = 0; j < k; ++j) {
    long double cm = 0;
    for (std::size_t i = 0; i < n; ++i) cm += m[i][j];
    cm /= static_cast<long double>(n);
    ssc += static_cast<long double>(n) * (cm - grand) * (cm - grand);
  }
  const long double sse = sst - ssr - ssc;
  const long double msr = ssr / static_cast<long double>(n - 1);
  const long double msc = ssc / static_cast<long double>(k - 1);
  const long double mse = sse / static_cast<long double>((n - 1) * (k - 1));
  const auto kk = static_cast<long double>(k);
  const auto nn = static_cast<long double>(n);
  if (agreement) return static_cast<double>((msr - mse) / (msr + (kk - 1) * mse + kk / nn * (msc - mse)));
  return static_cast<double>((msr - mse) / (msr + (kk - 1) * mse));
}

/// True when `sub` can be obtained from `seq` by deleting elements.
inline bool is_subsequence(const std::vector<std::string>& sub, const std::vector<std::string>& seq) {
  std::size_t i = 0;
  for (std::size_t j = 0; j < seq.size() && i < sub.size(); ++j) {
    if (sub[i] == seq[j]) ++i;
  }
  return i == sub.size();
}

/// LCS length by enumerating every subsequence of `a` (|a| <= ~16).
inline std::size_t lcs_enumerate(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t best = 0;
  const std::size_t total = std::size_t{1} << a.size();
  for (std::size_t mask = 0; mask < total; ++mask) {
    std::vector<std::string> sub;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (mask & (std::size_t{1} << i)) sub.push_back(a[i]);
    }
    if (sub.size() > best && is_subsequence(sub, b)) best = sub.size();
  }
  return best;
}

/// Clipped n-gram overlap count.
inline std::size_t ngram_overlap(const std::vector<std::string>& c, const std::vector<std::string>& r, std::size_t n) {
  auto grams = [n](const std::vector<std::string>& t) {
    std::map<std::vector<std::string>, std::size_t> g;
    for (std::size_t i = 0; i + n <= t.size(); ++i) ++g[std::vector<std::string>(t.begin() + i, t.begin() + i + n)];
    return g;
  };
  const auto gc = grams(c);
  const auto gr = grams(r);
  std::size_t hits = 0;
  for (const auto& [g, cnt] : gc) {
    if (auto it = gr.find(g); it != gr.end()) hits += std::min(cnt, it->second);
  }
  return hits;
}

struct Prf {
  double p;
  double r;
  double f;
};

inline Prf prf(std::size_t hits, std::size_t cand, std::size_t ref) {
  if (cand == 0 || ref == 0 || hits == 0) return {0, 0, 0};
  const double p = static_cast<double>(hits) / static_cast<double>(cand);
  const double r = static_cast<double>(hits) / static_cast<double>(ref);
  return {p, r, 2 * p * r / (p + r)};
}

}  // namespace aihq::oracle
