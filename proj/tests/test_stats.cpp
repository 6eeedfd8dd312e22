#include "cyborgnav/errors.hpp"
#include "cyborgnav/stats.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

using namespace cyborgnav;

namespace {

// reference values computed with scipy.stats (ttest_ind, f_oneway, t.sf, f.sf)
const std::vector<double> kA{12.1, 9.8, 14.3, 11.0, 10.7, 13.9, 12.6, 8.9, 11.8, 10.2};
const std::vector<double> kB{15.2, 17.9, 13.4, 19.1, 16.3, 14.8, 18.6};
const std::vector<double> kC{11.5, 13.0, 12.2, 14.1, 12.8};

}  // namespace

TEST(Welch, ReferenceDataset)
{
    const auto r = welch_t_test(kA, kB);
    EXPECT_NEAR(r.t, -5.052181493676204, 1e-9);
    EXPECT_NEAR(r.df, 11.290331100404988, 1e-9);
    EXPECT_NEAR(r.p, 0.0003421453034706451, 1e-6);
}

TEST(Pooled, ReferenceDataset)
{
    const auto r = pooled_t_test(kA, kB);
    EXPECT_NEAR(r.t, -5.244361923071224, 1e-9);
    EXPECT_DOUBLE_EQ(r.df, 15.0);
    EXPECT_NEAR(r.p, 9.899900309038452e-05, 1e-7);
}

TEST(Anova, ReferenceDataset)
{
    const std::vector<std::vector<double>> g{kA, kB, kC};
    const auto r = one_way_anova(g);
    EXPECT_NEAR(r.f, 16.75142182968283, 1e-9);
    EXPECT_DOUBLE_EQ(r.df_between, 2.0);
    EXPECT_DOUBLE_EQ(r.df_within, 19.0);
    EXPECT_NEAR(r.p, 6.403572917023791e-05, 1e-7);
}

TEST(Distributions, ReferenceTails)
{
    EXPECT_NEAR(student_t_two_sided_p(2.5, 7.3), 0.039650234665600415, 1e-9);
    EXPECT_NEAR(student_t_two_sided_p(-2.5, 7.3), 0.039650234665600415, 1e-9);
    EXPECT_NEAR(f_survival(3.1, 2, 19), 0.06836818830258845, 1e-9);
    EXPECT_DOUBLE_EQ(student_t_two_sided_p(0.0, 5.0), 1.0);
}

TEST(Welch, IdenticalGroups)
{
    const std::vector<double> a{1, 2, 3};
    const auto r = welch_t_test(a, a);
    EXPECT_DOUBLE_EQ(r.t, 0.0);
    EXPECT_DOUBLE_EQ(r.p, 1.0);
}

TEST(Welch, SwapNegatesT)
{
    const auto ab = welch_t_test(kA, kB);
    const auto ba = welch_t_test(kB, kA);
    EXPECT_DOUBLE_EQ(ab.t, -ba.t);
    EXPECT_DOUBLE_EQ(ab.p, ba.p);
    EXPECT_DOUBLE_EQ(ab.df, ba.df);
}

TEST(Welch, DegenerateData)
{
    const std::vector<double> a{2, 2, 2}, b{5, 5};
    try {
        welch_t_test(a, b);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_STREQ(e.what(), "degenerate data");
    }
    const std::vector<double> one{1.0};
    EXPECT_THROW(welch_t_test(one, kA), DataError);
}

TEST(Anova, IdenticalGroupsGiveZero)
{
    const std::vector<std::vector<double>> g{{1, 2, 3}, {1, 2, 3}, {1, 2, 3}};
    EXPECT_DOUBLE_EQ(one_way_anova(g).f, 0.0);
    const std::vector<std::vector<double>> flat{{1, 1}, {1, 1}};
    EXPECT_THROW(one_way_anova(flat), DataError);
}

TEST(Anova, TwoGroupsEqualPooledTSquared)
{
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> a, b;
        for (int i = 0; i < 3 + rep % 17; ++i)
            a.push_back(10.0 + 3.0 * n(rng));
        for (int i = 0; i < 2 + rep % 11; ++i)
            b.push_back(11.0 + 2.0 * n(rng));
        const double t = pooled_t_test(a, b).t;
        const std::vector<std::vector<double>> g{a, b};
        const auto f = one_way_anova(g);
        EXPECT_NEAR(f.f, t * t, 1e-9 * std::max(1.0, t * t));
        EXPECT_NEAR(f.p, pooled_t_test(a, b).p, 1e-9);
    }
}

TEST(Moments, SampleVariance)
{
    const std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
    EXPECT_DOUBLE_EQ(sample_mean(xs), 5.0);
    EXPECT_NEAR(sample_variance(xs), 32.0 / 7.0, 1e-12);
}
