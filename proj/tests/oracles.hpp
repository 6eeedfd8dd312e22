#pragma once

// Brute-force reference computations shared by the unit tests and the
// acceptance binary. Deliberately naive: nothing here calls the routines it
// is used to check.

#include "cyborgnav/geometry.hpp"
#include "cyborgnav/metrics.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace oracle {

inline double sine_y(const cyborgnav::PathSpec& s, double x)
{
    return s.amplitude * std::sin(2.0 * std::numbers::pi * x / s.wavelength);
}

struct DenseHit
{
    double x{0.0};
    double distance{std::numeric_limits<double>::infinity()};
};

// argmin over the path sampled every `step` mm (endpoints included)
inline DenseHit dense_projection(const cyborgnav::PathSpec& s, cyborgnav::Point2 p, double step = 0.01)
{
    DenseHit best;
    const auto n = static_cast<long>(std::ceil((s.x_end - s.x_start) / step));
    for (long i = 0; i <= n; ++i) {
        const double x = std::min(s.x_start + static_cast<double>(i) * step, s.x_end);
        const double d = std::hypot(x - p.x, sine_y(s, x) - p.y);
        if (d < best.distance)
            best = {x, d};
    }
    return best;
}

// worst case by which a grid of spacing `step` can overshoot the true minimum:
// half a step along the curve, at the steepest slope
inline double dense_grid_slack(const cyborgnav::PathSpec& s, double step = 0.01)
{
    const double k = 2.0 * std::numbers::pi * s.amplitude / s.wavelength;
    return 0.5 * step * std::sqrt(1.0 + k * k);
}

// first sign change of |path(x) - foot| - L for x > foot.x, scanned at
// `scan` mm and refined by bisection; nullopt if none before x_end
inline std::optional<cyborgnav::Point2> bisect_carrot(const cyborgnav::PathSpec& s, cyborgnav::Point2 foot,
                                                      double lookahead, double scan = 0.25)
{
    auto g = [&](double x) { return std::hypot(x - foot.x, sine_y(s, x) - foot.y) - lookahead; };
    double a = foot.x;
    double ga = g(a);
    while (a < s.x_end) {
        const double b = std::min(a + scan, s.x_end);
        const double gb = g(b);
        if (ga < 0.0 && gb >= 0.0) {
            double lo = a, hi = b;
            for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
                const double m = 0.5 * (lo + hi);
                (g(m) < 0.0 ? lo : hi) = m;
            }
            const double x = 0.5 * (lo + hi);
            return cyborgnav::Point2{x, sine_y(s, x)};
        }
        a = b;
        ga = gb;
    }
    return std::nullopt;
}

// midpoint-rule integral of |f - g| over [a, b]
inline double integrate_abs_gap(const std::function<double(double)>& f, const std::function<double(double)>& g,
                                double a, double b, double h = 0.1)
{
    const auto n = static_cast<long>(std::ceil((b - a) / h));
    const double w = (b - a) / static_cast<double>(n);
    double sum = 0.0;
    for (long i = 0; i < n; ++i) {
        const double x = a + (static_cast<double>(i) + 0.5) * w;
        sum += std::abs(f(x) - g(x)) * w;
    }
    return sum;
}

// per-sample windowed mean, recomputed from scratch for every output
inline std::vector<cyborgnav::TimedSample> windowed_mean(const std::vector<cyborgnav::TimedSample>& xs,
                                                          double window)
{
    std::vector<cyborgnav::TimedSample> out;
    for (const auto& c : xs) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& s : xs) {
            if (std::abs(s.t - c.t) <= 0.5 * window + 1e-9) {
                sum += s.value;
                ++n;
            }
        }
        out.push_back({c.t, sum / static_cast<double>(n)});
    }
    return out;
}

// smoothed tracked positions, built from windowed_mean
inline std::vector<cyborgnav::TimedPoint> smoothed(const cyborgnav::TrialRecord& r, double window = 0.1)
{
    std::vector<cyborgnav::TimedSample> xs, ys;
    for (const auto& f : r.frames) {
        if (f.tracked) {
            xs.push_back({f.t, f.pose.x});
            ys.push_back({f.t, f.pose.y});
        }
    }
    const auto mx = windowed_mean(xs, window);
    const auto my = windowed_mean(ys, window);
    std::vector<cyborgnav::TimedPoint> out;
    for (std::size_t i = 0; i < mx.size(); ++i)
        out.push_back({mx[i].t, {mx[i].value, my[i].value}});
    return out;
}

// displacement rate inside [tick - 50 ms, tick + 50 ms] at every 0.5 s tick
inline std::vector<cyborgnav::TimedSample> speed_ticks(const cyborgnav::TrialRecord& r)
{
    std::vector<cyborgnav::TimedSample> out;
    if (r.frames.size() < 2 || r.frames.back().t - r.frames.front().t < 1.0 - 1e-9)
        return out;
    const auto pts = smoothed(r);
    for (int m = 0; 0.5 * m <= r.frames.back().t + 1e-9; ++m) {
        const double tick = 0.5 * m;
        std::vector<cyborgnav::TimedPoint> in;
        for (const auto& p : pts)
            if (std::abs(p.t - tick) <= 0.05 + 1e-9)
                in.push_back(p);
        if (in.size() < 2)
            continue;
        double len = 0.0;
        for (std::size_t j = 1; j < in.size(); ++j)
            len += std::hypot(in[j].p.x - in[j - 1].p.x, in[j].p.y - in[j - 1].p.y);
        out.push_back({tick, len / (in.back().t - in.front().t)});
    }
    return out;
}

// distance of the smoothed position nearest each 0.5 s tick, by dense projection
inline std::vector<cyborgnav::TimedSample> distance_ticks(const cyborgnav::TrialRecord& r,
                                                          const cyborgnav::PathSpec& s, double step = 0.01)
{
    std::vector<cyborgnav::TimedSample> out;
    if (r.frames.size() < 2 || r.frames.back().t - r.frames.front().t < 1.0 - 1e-9)
        return out;
    const auto pts = smoothed(r);
    for (int m = 0; 0.5 * m <= r.frames.back().t + 1e-9; ++m) {
        const double tick = 0.5 * m;
        const cyborgnav::TimedPoint* best = nullptr;
        for (const auto& p : pts)
            if (!best || std::abs(p.t - tick) < std::abs(best->t - tick))
                best = &p;
        if (!best || std::abs(best->t - tick) > 0.005 + 1e-9)
            continue;
        out.push_back({tick, dense_projection(s, best->p, step).distance});
    }
    return out;
}

}  // namespace oracle
