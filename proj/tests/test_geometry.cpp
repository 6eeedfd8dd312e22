#include "cyborgnav/errors.hpp"
#include "cyborgnav/geometry.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cyborgnav;

namespace {

PathSpec flat()
{
    PathSpec s;
    s.amplitude = 0.0;
    return s;
}

}  // namespace

TEST(PathPoint, Examples)
{
    const PathSpec s;
    EXPECT_DOUBLE_EQ(path_point(s, 0.0).y, 0.0);
    EXPECT_NEAR(path_point(s, 212.5).y, 170.0, 1e-12);
    EXPECT_NEAR(path_point(s, 425.0).y, 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(path_point(s, 212.5).x, 212.5);
}

TEST(PathPoint, StaysWithinAmplitude)
{
    const PathSpec s;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5000.0, 5000.0);
    for (int i = 0; i < 10000; ++i) {
        const double y = path_point(s, u(rng)).y;
        EXPECT_LE(std::abs(y), s.amplitude);
    }
}

TEST(PathSpecValidate, RejectsBadValues)
{
    PathSpec s;
    s.wavelength = 0.0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = {};
    s.endpoint_radius = -1.0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = {};
    s.x_end = s.x_start;
    EXPECT_THROW(s.validate(), ConfigError);
    ArenaSpec a;
    a.width = 0.0;
    EXPECT_THROW(a.validate(), ConfigError);
    EXPECT_NO_THROW(PathSpec{}.validate());
}

TEST(Arena, CenteredOnPath)
{
    const PathSpec s;
    const ArenaSpec a;
    EXPECT_TRUE(arena_contains(a, s, {0, 0}));
    EXPECT_TRUE(arena_contains(a, s, {599, 299}));
    EXPECT_FALSE(arena_contains(a, s, {601, 0}));
    EXPECT_FALSE(arena_contains(a, s, {0, -301}));
    EXPECT_DOUBLE_EQ(destination_center(s, TravelDirection::forward).x, 425.0);
    EXPECT_DOUBLE_EQ(destination_center(s, TravelDirection::reversed).x, -425.0);
    EXPECT_DOUBLE_EQ(origin_center(s, TravelDirection::reversed).x, 425.0);
}

TEST(Projection, PointOnPath)
{
    const auto pr = project_onto_path(PathSpec{}, {0.0, 0.0});
    EXPECT_NEAR(pr.foot.x, 0.0, 1e-6);
    EXPECT_NEAR(pr.foot.y, 0.0, 1e-6);
    EXPECT_NEAR(pr.distance, 0.0, 1e-6);
}

TEST(Projection, FlatPath)
{
    const auto pr = project_onto_path(flat(), {100.0, 30.0});
    EXPECT_NEAR(pr.foot.x, 100.0, 1e-6);
    EXPECT_NEAR(pr.foot.y, 0.0, 1e-12);
    EXPECT_NEAR(pr.distance, 30.0, 1e-9);
    EXPECT_NEAR(pr.arc_param, 100.0, 1e-6);
}

TEST(Projection, QuarterWaveBelowCrest)
{
    // (212.5, 0) sits 170 mm under the crest; the dense oracle puts the foot off-crest
    const PathSpec s;
    const auto pr = project_onto_path(s, {212.5, 0.0});
    const auto o = oracle::dense_projection(s, {212.5, 0.0});
    EXPECT_LE(pr.distance, o.distance + 1e-6);
    EXPECT_GE(pr.distance, o.distance - oracle::dense_grid_slack(s));
    EXPECT_LT(pr.distance, 170.0);
    EXPECT_NEAR(distance(pr.foot, {212.5, 0.0}), pr.distance, 1e-9);
    EXPECT_NEAR(pr.foot.y, path_point(s, pr.foot.x).y, 1e-9);
}

TEST(Projection, ClampedToRange)
{
    const PathSpec s;
    const auto pr = project_onto_path(s, {-600.0, 0.0});
    EXPECT_NEAR(pr.arc_param, s.x_start, 1e-6);
    EXPECT_NEAR(pr.distance, 175.0, 1e-6);
}

TEST(Projection, NeverWorseThanDenseOracle)
{
    const PathSpec s;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-600.0, 600.0), uy(-300.0, 300.0);
    std::uniform_real_distribution<double> us(s.x_start, s.x_end);
    for (int i = 0; i < 300; ++i) {
        const Point2 p{ux(rng), uy(rng)};
        const auto pr = project_onto_path(s, p);
        const auto o = oracle::dense_projection(s, p);
        EXPECT_LE(pr.distance, o.distance + 1e-6) << p.x << "," << p.y;
        EXPECT_GE(pr.distance, o.distance - oracle::dense_grid_slack(s)) << p.x << "," << p.y;
        // and never beaten by any sampled path point
        for (int k = 0; k < 20; ++k)
            EXPECT_LE(pr.distance, distance(p, path_point(s, us(rng))) + 1e-9);
    }
}

TEST(Carrot, FlatPath)
{
    const Point2 t = carrot_target(flat(), {0.0, 0.0}, 80.0);
    EXPECT_NEAR(t.x, 80.0, 1e-6);
    EXPECT_NEAR(t.y, 0.0, 1e-9);
}

TEST(Carrot, ClampsToDestination)
{
    const PathSpec s;
    const Point2 foot = path_point(s, 400.0);
    const Point2 t = carrot_target(s, foot, 80.0);
    EXPECT_DOUBLE_EQ(t.x, destination_center(s, TravelDirection::forward).x);
    EXPECT_DOUBLE_EQ(t.y, destination_center(s, TravelDirection::forward).y);
    const Point2 back = carrot_target(s, path_point(s, -400.0), 80.0, TravelDirection::reversed);
    EXPECT_DOUBLE_EQ(back.x, s.x_start);
}

TEST(Carrot, MatchesBisectionOracle)
{
    const PathSpec s;
    const Point2 t = carrot_target(s, {0.0, 0.0}, 80.0);
    const auto o = oracle::bisect_carrot(s, {0.0, 0.0}, 80.0);
    ASSERT_TRUE(o.has_value());
    EXPECT_NEAR(t.x, o->x, 1e-6);
    EXPECT_NEAR(t.y, o->y, 1e-6);
    // frozen from the oracle: the steep rise at x=0 keeps the carrot well short of x=80
    EXPECT_NEAR(o->x, 50.5251, 1e-4);
}

TEST(Carrot, OnPathAndAtLookahead)
{
    const PathSpec s;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(s.x_start, s.x_end), ul(20.0, 200.0);
    for (int i = 0; i < 2000; ++i) {
        const Point2 foot = path_point(s, ux(rng));
        const double L = ul(rng);
        const auto dir = i % 2 ? TravelDirection::forward : TravelDirection::reversed;
        const Point2 t = carrot_target(s, foot, L, dir);
        EXPECT_LT(std::abs(t.y - path_point(s, t.x).y), 1e-6);
        const Point2 dest = destination_center(s, dir);
        if (t.x == dest.x && t.y == dest.y)
            continue;
        EXPECT_NEAR(distance(t, foot), L, 1e-6);
        if (dir == TravelDirection::forward)
            EXPECT_GT(t.x, foot.x);
        else
            EXPECT_LT(t.x, foot.x);
    }
}

TEST(Carrot, ForwardOracleAgreementOnRandomFeet)
{
    const PathSpec s;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ux(s.x_start, s.x_end);
    for (int i = 0; i < 200; ++i) {
        const Point2 foot = path_point(s, ux(rng));
        const auto o = oracle::bisect_carrot(s, foot, 80.0);
        const Point2 t = carrot_target(s, foot, 80.0);
        if (o)
            EXPECT_NEAR(t.x, o->x, 1e-6);
        else
            EXPECT_DOUBLE_EQ(t.x, s.x_end);
    }
}

TEST(HeadingError, Examples)
{
    EXPECT_NEAR(heading_error({0, 0, 0}, {100, 0}), 0.0, 1e-12);
    EXPECT_NEAR(heading_error({0, 0, 0}, {0, 100}), 90.0, 1e-12);
    EXPECT_NEAR(heading_error({0, 0, 45}, {100, 0}), -45.0, 1e-12);
    EXPECT_NEAR(heading_error({0, 0, 0}, {-100, 0}), 180.0, 1e-12);
    EXPECT_NEAR(heading_error({0, 0, 170}, {100, -30}), normalize_deg(std::atan2(-30.0, 100.0) * 180 / std::numbers::pi - 170), 1e-9);
}

TEST(HeadingError, DegenerateTarget)
{
    try {
        heading_error({5, 5, 0}, {5, 5});
        FAIL();
    } catch (const DataError& e) {
        EXPECT_STREQ(e.what(), "degenerate target");
    }
}

TEST(HeadingError, MirrorAntisymmetry)
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-500, 500), h(-179.9, 180.0);
    for (int i = 0; i < 5000; ++i) {
        const Pose2D pose{u(rng), u(rng), h(rng)};
        const Point2 tgt{u(rng), u(rng)};
        const double theta = heading_error(pose, tgt);
        if (std::abs(std::abs(theta) - 180.0) < 1e-6)
            continue;
        // reflect the target across the heading axis through the pose
        const double a = pose.heading * std::numbers::pi / 180.0;
        const double dx = tgt.x - pose.x, dy = tgt.y - pose.y;
        const double along = dx * std::cos(a) + dy * std::sin(a);
        const double across = -dx * std::sin(a) + dy * std::cos(a);
        const Point2 mirrored{pose.x + along * std::cos(a) + across * std::sin(a),
                              pose.y + along * std::sin(a) - across * std::cos(a)};
        EXPECT_NEAR(heading_error(pose, mirrored), -theta, 1e-9);
    }
}

TEST(NormalizeDeg, HalfOpenRange)
{
    EXPECT_DOUBLE_EQ(normalize_deg(180.0), 180.0);
    EXPECT_DOUBLE_EQ(normalize_deg(-180.0), 180.0);
    EXPECT_DOUBLE_EQ(normalize_deg(540.0), 180.0);
    EXPECT_NEAR(normalize_deg(-190.0), 170.0, 1e-12);
    EXPECT_NEAR(normalize_deg(725.0), 5.0, 1e-12);
}

TEST(AreaBetween, IdenticalToPath)
{
    const PathSpec s;
    std::vector<Point2> pts;
    for (int x = -425; x <= 425; ++x)
        pts.push_back(path_point(s, x));
    EXPECT_NEAR(area_between(pts, s), 0.0, 1e-6);
}

TEST(AreaBetween, Rectangle)
{
    const std::vector<Point2> pts{{0, 10}, {100, 10}};
    // end points are projected to 1e-6 mm in x
    EXPECT_NEAR(area_between(pts, flat()), 1000.0, 1e-4);
    const std::vector<Point2> below{{0, -10}, {50, -10}, {100, -10}};
    EXPECT_NEAR(area_between(below, flat()), 1000.0, 1e-4);
}

TEST(AreaBetween, CrossingPiecesAddUp)
{
    // zig-zag crossing the flat path: two triangles of 5*10/2 each
    const std::vector<Point2> pts{{0, 0}, {5, 10}, {10, 0}, {15, -10}, {20, 0}};
    EXPECT_NEAR(area_between(pts, flat()), 100.0, 1e-9);
}

TEST(AreaBetween, TooShort)
{
    const std::vector<Point2> one{{0, 0}};
    try {
        area_between(one, PathSpec{});
        FAIL();
    } catch (const DataError& e) {
        EXPECT_STREQ(e.what(), "insufficient trajectory");
    }
}

TEST(AreaBetween, SineTrajectoryVsFlatPath)
{
    PathSpec traj;
    traj.amplitude = 50.0;
    std::vector<Point2> pts;
    for (double x = -425.0; x <= 425.0 + 1e-9; x += 0.5)
        pts.push_back(path_point(traj, x));
    const double got = area_between(pts, flat());
    const double want = oracle::integrate_abs_gap([&](double x) { return oracle::sine_y(traj, x); },
                                                  [](double) { return 0.0; }, -425.0, 425.0);
    // closed form: 2 * 50 * 850 / pi
    EXPECT_NEAR(want, 100.0 * 850.0 / std::numbers::pi, 0.1);
    EXPECT_NEAR(got, want, 0.005 * want);
}

TEST(AreaBetween, RandomPerturbedSinesMatchIntegration)
{
    const PathSpec s;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ua(-40.0, 40.0), us(-400.0, -100.0), ue(100.0, 400.0);
    std::uniform_int_distribution<int> um(1, 5);
    for (int i = 0; i < 20; ++i) {
        const double a = ua(rng), x0 = us(rng), x1 = ue(rng);
        const int m = um(rng);
        auto f = [&](double x) {
            return oracle::sine_y(s, x) + a * std::sin(m * std::numbers::pi * (x - x0) / (x1 - x0));
        };
        std::vector<Point2> pts;
        for (double x = x0; x < x1; x += 1.0)
            pts.push_back({x, f(x)});
        pts.push_back({x1, f(x1)});
        const double want = oracle::integrate_abs_gap(f, [&](double x) { return oracle::sine_y(s, x); }, x0, x1);
        EXPECT_NEAR(area_between(pts, s), want, 0.005 * want) << i;
    }
}

TEST(AreaBetween, DensificationInvariant)
{
    const PathSpec s;
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 15.0);
    std::vector<Point2> pts;
    for (double x = -400; x <= 400; x += 7.0)
        pts.push_back({x, oracle::sine_y(s, x) + n(rng)});
    std::vector<Point2> dense;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        dense.push_back(pts[i]);
        dense.push_back({0.5 * (pts[i].x + pts[i + 1].x), 0.5 * (pts[i].y + pts[i + 1].y)});
    }
    dense.push_back(pts.back());
    const double a = area_between(pts, s);
    EXPECT_NEAR(area_between(dense, s), a, 1e-3 * a);
}

TEST(GoldenSection, FindsParabolaMinimum)
{
    const double x = golden_section_minimize([](double v) { return (v - 1.3) * (v - 1.3); }, -4.0, 7.0, 1e-9);
    EXPECT_NEAR(x, 1.3, 1e-8);
}
