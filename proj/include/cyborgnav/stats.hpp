#pragma once

#include <span>
#include <vector>

namespace cyborgnav {

struct TTestResult
{
    double t{0.0};
    double df{0.0};
    double p{1.0};  ///< two-sided
};

struct AnovaResult
{
    double f{0.0};
    double df_between{0.0};
    double df_within{0.0};
    double p{1.0};
};

double sample_mean(std::span<const double> xs);
/// Sample variance with the n - 1 denominator.
double sample_variance(std::span<const double> xs);

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of freedom.
/// Both samples need at least two values; throws DataError("degenerate data")
/// when both have zero variance.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// Student's t-test with pooled variance, df = na + nb - 2.
TTestResult pooled_t_test(std::span<const double> a, std::span<const double> b);

/// One-way ANOVA F statistic with (k - 1, N - k) degrees of freedom.
AnovaResult one_way_anova(std::span<const std::vector<double>> groups);

/// Two-sided p-value of a t statistic.
double student_t_two_sided_p(double t, double df);
/// Upper-tail probability of the F distribution.
double f_survival(double f, double df1, double df2);

}  // namespace cyborgnav
