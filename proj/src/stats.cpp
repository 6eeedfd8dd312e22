#include "cyborgnav/stats.hpp"

#include "cyborgnav/errors.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <numeric>

namespace cyborgnav {

double sample_mean(std::span<const double> xs)
{
    if (xs.empty())
        throw DataError("mean of an empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs)
{
    if (xs.size() < 2)
        throw DataError("variance needs at least two samples");
    const double m = sample_mean(xs);
    double ss = 0.0;
    for (double x : xs)
        ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

double student_t_two_sided_p(double t, double df)
{
    if (!(df > 0.0))
        throw DataError("degrees of freedom must be positive");
    if (!std::isfinite(t))
        return 0.0;
    const boost::math::students_t dist(df);
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

double f_survival(double f, double df1, double df2)
{
    if (!(df1 > 0.0) || !(df2 > 0.0))
        throw DataError("degrees of freedom must be positive");
    if (!std::isfinite(f))
        return 0.0;
    if (f <= 0.0)
        return 1.0;
    const boost::math::fisher_f dist(df1, df2);
    return boost::math::cdf(boost::math::complement(dist, f));
}

namespace {

void require_pair(std::span<const double> a, std::span<const double> b)
{
    if (a.size() < 2 || b.size() < 2)
        throw DataError("t-test needs at least two samples per group");
}

}  // namespace

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b)
{
    require_pair(a, b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double va = sample_variance(a) / na;
    const double vb = sample_variance(b) / nb;
    if (va == 0.0 && vb == 0.0)
        throw DataError("degenerate data");
    TTestResult r;
    r.t = (sample_mean(a) - sample_mean(b)) / std::sqrt(va + vb);
    r.df = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    r.p = student_t_two_sided_p(r.t, r.df);
    return r;
}

TTestResult pooled_t_test(std::span<const double> a, std::span<const double> b)
{
    require_pair(a, b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double pooled = ((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) / (na + nb - 2.0);
    if (pooled == 0.0)
        throw DataError("degenerate data");
    TTestResult r;
    r.t = (sample_mean(a) - sample_mean(b)) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    r.df = na + nb - 2.0;
    r.p = student_t_two_sided_p(r.t, r.df);
    return r;
}

AnovaResult one_way_anova(std::span<const std::vector<double>> groups)
{
    if (groups.size() < 2)
        throw DataError("ANOVA needs at least two groups");
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& g : groups) {
        if (g.size() < 2)
            throw DataError("ANOVA needs at least two samples per group");
        total += std::accumulate(g.begin(), g.end(), 0.0);
        n += g.size();
    }
    const double grand = total / static_cast<double>(n);

    double ss_between = 0.0;
    double ss_within = 0.0;
    for (const auto& g : groups) {
        const double m = sample_mean(g);
        ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
        for (double x : g)
            ss_within += (x - m) * (x - m);
    }
    if (ss_within == 0.0)
        throw DataError("degenerate data");

    AnovaResult r;
    r.df_between = static_cast<double>(groups.size() - 1);
    r.df_within = static_cast<double>(n - groups.size());
    r.f = (ss_between / r.df_between) / (ss_within / r.df_within);
    r.p = f_survival(r.f, r.df_between, r.df_within);
    return r;
}

}  // namespace cyborgnav
