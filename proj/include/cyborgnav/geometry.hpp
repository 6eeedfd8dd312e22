#pragma once

#include <span>
#include <vector>

namespace cyborgnav {

struct Point2
{
    double x{0.0};  ///< mm
    double y{0.0};  ///< mm
};

double distance(Point2 a, Point2 b) noexcept;

/// Planar pose. Heading is in degrees, counter-clockwise from +x, kept in (-180, 180].
struct Pose2D
{
    double x{0.0};
    double y{0.0};
    double heading{0.0};

    Point2 position() const noexcept { return {x, y}; }
};

/// Wraps an angle in degrees into (-180, 180].
double normalize_deg(double deg) noexcept;

/// Reference path y = amplitude * sin(2*pi*x / wavelength) on [x_start, x_end].
/// The origin and destination circles are centered on the path at the two ends.
struct PathSpec
{
    double amplitude{170.0};
    double wavelength{850.0};
    double x_start{-425.0};
    double x_end{425.0};
    double endpoint_radius{40.0};

    /// Throws ConfigError on violated invariants.
    void validate() const;

    bool operator==(const PathSpec&) const = default;
};

/// Rectangular floor centered on the midpoint of the path's x-range, y = 0.
struct ArenaSpec
{
    double width{1200.0};
    double height{600.0};

    void validate() const;

    bool operator==(const ArenaSpec&) const = default;
};

bool arena_contains(const ArenaSpec& arena, const PathSpec& path, Point2 p) noexcept;

/// Which end of the path is the destination. Trials alternate between the two.
enum class TravelDirection { forward, reversed };

TravelDirection opposite(TravelDirection d) noexcept;

Point2 path_point(const PathSpec& spec, double x) noexcept;
double path_slope(const PathSpec& spec, double x) noexcept;
/// Direction of travel along the path at x, in degrees.
double path_tangent_deg(const PathSpec& spec, double x, TravelDirection dir) noexcept;
Point2 origin_center(const PathSpec& spec, TravelDirection dir) noexcept;
Point2 destination_center(const PathSpec& spec, TravelDirection dir) noexcept;
double path_arc_length(const PathSpec& spec);

struct PathProjection
{
    Point2 foot;
    double distance{0.0};
    double arc_param{0.0};  ///< x-coordinate of the foot
};

/// Closest point of the path (restricted to [x_start, x_end]) to p.
/// Coarse sampling at wavelength/100 seeds a golden-section refinement of every
/// local minimum of the sampled distance, to 1e-6 mm in x.
PathProjection project_onto_path(const PathSpec& spec, Point2 p);

/// First intersection of the circle (foot, lookahead) with the path moving from
/// foot toward the destination. Falls back to the destination center when the
/// circle leaves the path before intersecting it.
Point2 carrot_target(const PathSpec& spec, Point2 foot, double lookahead,
                     TravelDirection dir = TravelDirection::forward);

/// Signed angle in (-180, 180] from the pose heading to the bearing of target.
/// Positive means the target lies to the left. Throws DataError("degenerate target")
/// when target coincides with the pose position.
double heading_error(const Pose2D& pose, Point2 target);

/// Path polyline used as the reference for area computations: the sine sampled
/// on a 1 mm grid anchored at x_start, linearly interpolated between samples.
inline constexpr double kAreaPathGrid = 1.0;
double path_polyline_y(const PathSpec& spec, double x) noexcept;

/// Unsigned area (mm^2) of the region between the trajectory polyline and the
/// path polyline. The trajectory is split wherever it crosses the path; each
/// piece is closed by the path segment between its end points (crossings, or the
/// projections of the trajectory's first and last points) and contributes the
/// absolute value of its shoelace area. Throws DataError("insufficient trajectory").
double area_between(std::span<const Point2> trajectory, const PathSpec& spec);

/// Minimizes f on [lo, hi] by golden-section search until the bracket is below tol.
template <typename F>
double golden_section_minimize(F&& f, double lo, double hi, double tol);

}  // namespace cyborgnav

#include <cmath>

namespace cyborgnav {

template <typename F>
double golden_section_minimize(F&& f, double lo, double hi, double tol)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace cyborgnav
