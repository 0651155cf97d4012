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

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace aihq::stats {

/// I_x(a, b) by Lentz's continued fraction, using the symmetry
/// I_x(a,b) = 1 - I_{1-x}(b,a) to stay in the fast-converging region.
double regularized_incomplete_beta(double a, double b, double x);

/// Upper-tail probability P(T > t) of Student's t with `df` degrees of
/// freedom (df may be fractional). Throws InvalidDf for df <= 0 or NaN.
double t_cdf_complement(double t, double df);

/// t = r * sqrt(df) / sqrt(1 - r^2); +-infinity at |r| = 1.
double t_from_r(double r, double df);

struct CorrelationResult {
  double r = 0.0;
  std::size_t n = 0;
  double df = 0.0;
  double t = 0.0;
  double p_two_tailed = 1.0;
};

/// Product-moment correlation with the r->t test on n-2 df.
/// Errors: LengthMismatch, TooFewSamples (n < 3), DegenerateVariance.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

enum class Tail { OneTailedGreater, TwoTailed };
enum class TTestMethod { Student, Welch, Paired };

std::string_view to_string(TTestMethod m) noexcept;
std::string_view to_string(Tail t) noexcept;

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  Tail tail = Tail::TwoTailed;
  TTestMethod method = TTestMethod::Welch;
  double mean_a = 0.0;
  double mean_b = 0.0;
};

/// Tests mean(a) - mean(b). OneTailedGreater is the alternative mean(a) > mean(b).
/// Student pools variances (df = na + nb - 2); Welch uses the
/// Welch-Satterthwaite df; Paired tests the mean of a[i] - b[i] on n - 1 df.
/// Zero standard error with equal means gives t = 0 and p = 1.
/// Errors: TooFewSamples (either group < 2), LengthMismatch (Paired only).
TTestResult group_ttest(std::span<const double> a, std::span<const double> b,
                        TTestMethod method = TTestMethod::Welch,
                        Tail tail = Tail::OneTailedGreater);

enum class IccForm { ICC2_1, ICC3_1 };

std::string_view to_string(IccForm f) noexcept;

/// Two-way ANOVA mean squares of an n x k subjects-by-raters matrix.
struct AnovaTwoWay {
  std::size_t n = 0;
  std::size_t k = 0;
  double ms_rows = 0.0;
  double ms_cols = 0.0;
  double ms_error = 0.0;
};

/// `ratings` holds one row per subject; NaN marks a missing cell.
/// Errors: TooFewSubjects (n < 2), InvalidArgument (k < 2 or ragged rows),
/// MissingCells.
AnovaTwoWay anova_two_way(const std::vector<std::vector<double>>& ratings);

/// ICC(2,1) absolute agreement or ICC(3,1) consistency, single rater.
/// Throws DegenerateVariance when the denominator vanishes (constant matrix).
double icc_two_way(const std::vector<std::vector<double>>& ratings, IccForm form = IccForm::ICC2_1);

/// "*" p < .05, "**" p < .01, "***" p < .001, strict inequalities.
std::string_view significance_stars(double p) noexcept;

}  // namespace aihq::stats
