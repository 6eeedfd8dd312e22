#include "cyborgnav/geometry.hpp"

#include "cyborgnav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cyborgnav {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double squared_distance(Point2 a, Point2 b) noexcept
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

bool finite(Point2 p) noexcept { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

double distance(Point2 a, Point2 b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

double normalize_deg(double deg) noexcept
{
    double r = std::fmod(deg, 360.0);
    if (r <= -180.0)
        r += 360.0;
    else if (r > 180.0)
        r -= 360.0;
    return r;
}

void PathSpec::validate() const
{
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw ConfigError("path.wavelength must be positive");
    if (!(endpoint_radius > 0.0) || !std::isfinite(endpoint_radius))
        throw ConfigError("path.endpoint_radius must be positive");
    if (!(x_start < x_end) || !std::isfinite(x_start) || !std::isfinite(x_end))
        throw ConfigError("path.x_start must be less than path.x_end");
    if (!std::isfinite(amplitude))
        throw ConfigError("path.amplitude must be finite");
}

void ArenaSpec::validate() const
{
    if (!(width > 0.0) || !(height > 0.0) || !std::isfinite(width) || !std::isfinite(height))
        throw ConfigError("arena dimensions must be positive");
}

bool arena_contains(const ArenaSpec& arena, const PathSpec& path, Point2 p) noexcept
{
    const double cx = 0.5 * (path.x_start + path.x_end);
    return std::abs(p.x - cx) <= 0.5 * arena.width && std::abs(p.y) <= 0.5 * arena.height;
}

TravelDirection opposite(TravelDirection d) noexcept
{
    return d == TravelDirection::forward ? TravelDirection::reversed : TravelDirection::forward;
}

Point2 path_point(const PathSpec& spec, double x) noexcept
{
    return {x, spec.amplitude * std::sin(kTwoPi * x / spec.wavelength)};
}

double path_slope(const PathSpec& spec, double x) noexcept
{
    return spec.amplitude * kTwoPi / spec.wavelength * std::cos(kTwoPi * x / spec.wavelength);
}

double path_tangent_deg(const PathSpec& spec, double x, TravelDirection dir) noexcept
{
    const double s = path_slope(spec, x);
    const double sx = dir == TravelDirection::forward ? 1.0 : -1.0;
    return normalize_deg(std::atan2(sx * s, sx) * kRadToDeg);
}

Point2 origin_center(const PathSpec& spec, TravelDirection dir) noexcept
{
    return path_point(spec, dir == TravelDirection::forward ? spec.x_start : spec.x_end);
}

Point2 destination_center(const PathSpec& spec, TravelDirection dir) noexcept
{
    return path_point(spec, dir == TravelDirection::forward ? spec.x_end : spec.x_start);
}

double path_arc_length(const PathSpec& spec)
{
    // Composite Simpson on sqrt(1 + y'^2); the integrand is smooth and periodic.
    constexpr int n = 20000;
    const double h = (spec.x_end - spec.x_start) / n;
    auto integrand = [&](double x) {
        const double s = path_slope(spec, x);
        return std::sqrt(1.0 + s * s);
    };
    double sum = integrand(spec.x_start) + integrand(spec.x_end);
    for (int i = 1; i < n; ++i)
        sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(spec.x_start + i * h);
    return sum * h / 3.0;
}

PathProjection project_onto_path(const PathSpec& spec, Point2 p)
{
    const double step = spec.wavelength / 100.0;
    const double span = spec.x_end - spec.x_start;
    const int n = std::max(1, static_cast<int>(std::ceil(span / step)));
    const double h = span / n;

    auto d2 = [&](double x) { return squared_distance(path_point(spec, x), p); };

    std::vector<double> samples(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        samples[static_cast<std::size_t>(i)] = d2(i == n ? spec.x_end : spec.x_start + i * h);

    double best_x = spec.x_start;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        const auto u = static_cast<std::size_t>(i);
        const bool left_ok = i == 0 || samples[u] <= samples[u - 1];
        const bool right_ok = i == n || samples[u] <= samples[u + 1];
        if (!left_ok || !right_ok)
            continue;
        const double lo = spec.x_start + std::max(0, i - 1) * h;
        const double hi = std::min(spec.x_end, spec.x_start + std::min(n, i + 1) * h);
        double x = golden_section_minimize(d2, lo, hi, 1e-7);
        // The grid sample itself may beat the refined point at a clamped end.
        const double xi = i == n ? spec.x_end : spec.x_start + i * h;
        if (samples[u] < d2(x))
            x = xi;
        const double v = d2(x);
        if (v < best_d2) {
            best_d2 = v;
            best_x = x;
        }
    }

    const Point2 foot = path_point(spec, best_x);
    return {foot, distance(foot, p), best_x};
}

Point2 carrot_target(const PathSpec& spec, Point2 foot, double lookahead, TravelDirection dir)
{
    const double sign = dir == TravelDirection::forward ? 1.0 : -1.0;
    const double limit = dir == TravelDirection::forward ? spec.x_end : spec.x_start;
    auto g = [&](double x) { return distance(path_point(spec, x), foot) - lookahead; };

    const double step = std::min(lookahead / 8.0, spec.wavelength / 200.0);
    double a = std::clamp(foot.x, spec.x_start, spec.x_end);
    while (sign * (limit - a) > 0.0) {
        double b = a + sign * step;
        if (sign * (b - limit) > 0.0)
            b = limit;
        if (g(b) >= 0.0) {
            double lo = a;
            double hi = b;
            for (int i = 0; i < 200 && std::abs(hi - lo) > 1e-12; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (g(mid) >= 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            return path_point(spec, hi);
        }
        a = b;
    }
    return destination_center(spec, dir);
}

double heading_error(const Pose2D& pose, Point2 target)
{
    const double dx = target.x - pose.x;
    const double dy = target.y - pose.y;
    if (std::hypot(dx, dy) <= 1e-9)
        throw DataError("degenerate target");
    return normalize_deg(std::atan2(dy, dx) * kRadToDeg - pose.heading);
}

double path_polyline_y(const PathSpec& spec, double x) noexcept
{
    const double u = (x - spec.x_start) / kAreaPathGrid;
    const double k = std::floor(u);
    const double x0 = spec.x_start + k * kAreaPathGrid;
    const double y0 = path_point(spec, x0).y;
    const double w = u - k;
    if (w == 0.0)
        return y0;
    const double y1 = path_point(spec, x0 + kAreaPathGrid).y;
    return y0 + w * (y1 - y0);
}

namespace {

class PieceAccumulator
{
public:
    explicit PieceAccumulator(const PathSpec& spec) : spec_(spec) {}

    void start(double path_x, Point2 first)
    {
        start_x_ = path_x;
        vertices_.clear();
        vertices_.push_back(first);
    }

    void add(Point2 p) { vertices_.push_back(p); }

    /// Closes the current piece at path_x and returns its unsigned area.
    double close(double path_x)
    {
        std::vector<Point2> poly;
        poly.reserve(vertices_.size() + 4);
        poly.push_back({start_x_, path_polyline_y(spec_, start_x_)});
        poly.insert(poly.end(), vertices_.begin(), vertices_.end());
        poly.push_back({path_x, path_polyline_y(spec_, path_x)});

        // Walk the polyline back from path_x to start_x_ through interior grid nodes.
        const double lo = std::min(start_x_, path_x);
        const double hi = std::max(start_x_, path_x);
        const double k_lo = std::floor((lo - spec_.x_start) / kAreaPathGrid) + 1.0;
        const double k_hi = std::ceil((hi - spec_.x_start) / kAreaPathGrid) - 1.0;
        if (k_hi >= k_lo) {
            const auto count = static_cast<long>(k_hi - k_lo) + 1;
            for (long j = 0; j < count; ++j) {
                const double k = path_x >= start_x_ ? k_hi - j : k_lo + j;
                const double gx = spec_.x_start + k * kAreaPathGrid;
                poly.push_back(path_point(spec_, gx));
            }
        }
        return std::abs(shoelace(poly));
    }

private:
    static double shoelace(const std::vector<Point2>& poly)
    {
        const Point2 o = poly.front();
        double twice = 0.0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Point2 a{poly[i].x - o.x, poly[i].y - o.y};
            const Point2& nb = poly[(i + 1) % poly.size()];
            const Point2 b{nb.x - o.x, nb.y - o.y};
            twice += a.x * b.y - b.x * a.y;
        }
        return 0.5 * twice;
    }

    const PathSpec& spec_;
    double start_x_{0.0};
    std::vector<Point2> vertices_;
};

}  // namespace

double area_between(std::span<const Point2> trajectory, const PathSpec& spec)
{
    if (trajectory.size() < 2)
        throw DataError("insufficient trajectory");
    for (const auto& p : trajectory)
        if (!finite(p))
            throw DataError("trajectory contains non-finite points");

    constexpr double kOnPath = 1e-12;
    auto side = [&](Point2 p) {
        const double s = p.y - path_polyline_y(spec, p.x);
        return std::abs(s) <= kOnPath ? 0.0 : s;
    };

    PieceAccumulator piece(spec);
    double total = 0.0;

    piece.start(project_onto_path(spec, trajectory.front()).arc_param, trajectory.front());
    double prev_side = side(trajectory.front());

    for (std::size_t i = 1; i < trajectory.size(); ++i) {
        const Point2 a = trajectory[i - 1];
        const Point2 b = trajectory[i];
        const double sb = side(b);
        if (prev_side * sb < 0.0) {
            // Bisect for the crossing on segment a-b.
            double lo = 0.0;
            double hi = 1.0;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const Point2 m{a.x + mid * (b.x - a.x), a.y + mid * (b.y - a.y)};
                const double sm = side(m);
                if (sm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((sm < 0.0) == (prev_side < 0.0))
                    lo = mid;
                else
                    hi = mid;
            }
            const double t = 0.5 * (lo + hi);
            const Point2 c{a.x + t * (b.x - a.x), path_polyline_y(spec, a.x + t * (b.x - a.x))};
            piece.add(c);
            total += piece.close(c.x);
            piece.start(c.x, c);
        }
        piece.add(b);
        if (sb == 0.0 && i + 1 < trajectory.size()) {
            total += piece.close(b.x);
            piece.start(b.x, b);
        }
        prev_side = sb;
    }

    total += piece.close(project_onto_path(spec, trajectory.back()).arc_param);
    return total;
}

}  // namespace cyborgnav
